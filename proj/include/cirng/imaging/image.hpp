#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace cirng::imaging {

// Row-major 8-bit grayscale raster.
struct GrayImage
{
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), pixels(w * h, fill) {}

    std::uint8_t& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    std::size_t size() const noexcept { return pixels.size(); }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

// Row-major 1-bit raster, one byte (0 or 1) per pixel.
struct BinaryImage
{
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bits;

    BinaryImage() = default;
    BinaryImage(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), bits(w * h, fill) {}

    std::uint8_t& at(std::size_t x, std::size_t y) { return bits[y * width + x]; }
    std::uint8_t at(std::size_t x, std::size_t y) const { return bits[y * width + x]; }
    std::size_t size() const noexcept { return bits.size(); }

    friend bool operator==(const BinaryImage&, const BinaryImage&) = default;
};

// Peak signal-to-noise ratio with peak 255; +infinity for identical images.
inline double psnr(const GrayImage& a, const GrayImage& b)
{
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("psnr: image dimensions differ");
    if (a.pixels.empty())
        throw std::invalid_argument("psnr: empty image");
    double sse = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d = double(a.pixels[i]) - double(b.pixels[i]);
        sse += d * d;
    }
    if (sse == 0.0)
        return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

} // namespace cirng::imaging
