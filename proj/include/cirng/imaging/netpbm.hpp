#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "image.hpp"

namespace cirng::imaging {

class NetpbmError : public std::runtime_error
{
public:
    NetpbmError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset)
    {
    }

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

namespace detail {

// Header tokenizer for binary Netpbm files: whitespace and '#' comments
// between tokens, exactly one whitespace byte before the raster.
class HeaderReader
{
public:
    explicit HeaderReader(std::string_view data) : data_(data) {}

    void expect_magic(std::string_view magic)
    {
        if (data_.substr(0, 2) != magic)
            throw NetpbmError("expected magic number " + std::string(magic), 0);
        pos_ = 2;
    }

    std::size_t read_uint(const char* what)
    {
        skip_space_and_comments();
        const std::size_t start = pos_;
        std::size_t v = 0;
        while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
            v = v * 10 + static_cast<std::size_t>(data_[pos_] - '0');
            if (v > 1'000'000'000)
                throw NetpbmError(std::string("value too large for ") + what, start);
            ++pos_;
        }
        if (pos_ == start)
            throw NetpbmError(std::string("malformed header: expected ") + what, start);
        return v;
    }

    // Consumes the single whitespace byte separating header and raster.
    std::size_t raster_start()
    {
        if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
            throw NetpbmError("malformed header: missing whitespace before raster", pos_);
        return pos_ + 1;
    }

private:
    void skip_space_and_comments()
    {
        while (pos_ < data_.size()) {
            const char c = data_[pos_];
            if (c == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n' && data_[pos_] != '\r')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view data_;
    std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace detail

// Binary PGM (P5) with maxval 255.
inline GrayImage decode_pgm(std::string_view data)
{
    detail::HeaderReader h(data);
    h.expect_magic("P5");
    const std::size_t w = h.read_uint("width");
    const std::size_t hgt = h.read_uint("height");
    const std::size_t maxval = h.read_uint("maxval");
    if (w == 0 || hgt == 0)
        throw NetpbmError("image dimensions must be positive", 2);
    if (maxval != 255)
        throw NetpbmError("unsupported maxval " + std::to_string(maxval) + " (need 255)", 2);
    const std::size_t start = h.raster_start();
    if (data.size() - start < w * hgt)
        throw NetpbmError("truncated raster: need " + std::to_string(w * hgt) + " bytes, have " +
                              std::to_string(data.size() - start),
                          data.size());
    GrayImage img(w, hgt);
    for (std::size_t i = 0; i < w * hgt; ++i)
        img.pixels[i] = static_cast<std::uint8_t>(data[start + i]);
    return img;
}

inline std::string encode_pgm(const GrayImage& img)
{
    std::string out = "P5\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.append(reinterpret_cast<const char*>(img.pixels.data()), img.pixels.size());
    return out;
}

// Binary PBM (P4): rows padded to whole bytes, 1 = black, MSB first.
inline BinaryImage decode_pbm(std::string_view data)
{
    detail::HeaderReader h(data);
    h.expect_magic("P4");
    const std::size_t w = h.read_uint("width");
    const std::size_t hgt = h.read_uint("height");
    if (w == 0 || hgt == 0)
        throw NetpbmError("image dimensions must be positive", 2);
    const std::size_t start = h.raster_start();
    const std::size_t row_bytes = (w + 7) / 8;
    if (data.size() - start < row_bytes * hgt)
        throw NetpbmError("truncated raster: need " + std::to_string(row_bytes * hgt) + " bytes, have " +
                              std::to_string(data.size() - start),
                          data.size());
    BinaryImage img(w, hgt);
    for (std::size_t y = 0; y < hgt; ++y)
        for (std::size_t x = 0; x < w; ++x) {
            const auto byte = static_cast<std::uint8_t>(data[start + y * row_bytes + x / 8]);
            img.at(x, y) = (byte >> (7 - x % 8)) & 1u;
        }
    return img;
}

inline std::string encode_pbm(const BinaryImage& img)
{
    std::string out = "P4\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n";
    const std::size_t row_bytes = (img.width + 7) / 8;
    std::string raster(row_bytes * img.height, '\0');
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            if (img.at(x, y))
                raster[y * row_bytes + x / 8] = static_cast<char>(
                    static_cast<std::uint8_t>(raster[y * row_bytes + x / 8]) | (0x80u >> (x % 8)));
    return out + raster;
}

inline GrayImage load_pgm(const std::string& path) { return decode_pgm(detail::read_file(path)); }
inline void save_pgm(const GrayImage& img, const std::string& path) { detail::write_file(path, encode_pgm(img)); }
inline BinaryImage load_pbm(const std::string& path) { return decode_pbm(detail::read_file(path)); }
inline void save_pbm(const BinaryImage& img, const std::string& path) { detail::write_file(path, encode_pbm(img)); }

} // namespace cirng::imaging
