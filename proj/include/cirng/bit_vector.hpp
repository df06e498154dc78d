#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cirng {

// Fixed-length packed boolean vector. Cells are addressed 0-based; cell 0 is
// the first component (x_1 in one-based notation) and is emitted first.
class BitVector
{
public:
    BitVector() = default;

    explicit BitVector(std::size_t size, bool value = false)
        : size_(size), words_((size + 63) / 64, value ? ~std::uint64_t{0} : 0)
    {
        trim();
    }

    BitVector(std::initializer_list<int> bits) : BitVector(bits.size())
    {
        std::size_t i = 0;
        for (int b : bits)
            set(i++, b != 0);
    }

    // Parses a string of '0'/'1' characters, first character is cell 0.
    static BitVector from_string(std::string_view text)
    {
        BitVector v(text.size());
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] != '0' && text[i] != '1')
                throw std::invalid_argument("BitVector: expected '0' or '1'");
            v.set(i, text[i] == '1');
        }
        return v;
    }

    std::size_t size() const noexcept { return size_; }

    bool operator[](std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1u; }

    bool at(std::size_t i) const
    {
        if (i >= size_)
            throw std::out_of_range("BitVector: cell index out of range");
        return (*this)[i];
    }

    void set(std::size_t i, bool value) noexcept
    {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    void flip_all() noexcept
    {
        for (auto& w : words_)
            w = ~w;
        trim();
    }

    std::size_t popcount() const noexcept
    {
        std::size_t n = 0;
        for (auto w : words_)
            n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    std::size_t hamming_distance(const BitVector& other) const
    {
        if (other.size_ != size_)
            throw std::invalid_argument("BitVector: length mismatch");
        std::size_t n = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            n += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
        return n;
    }

    BitVector& operator^=(const BitVector& other)
    {
        if (other.size_ != size_)
            throw std::invalid_argument("BitVector: length mismatch");
        for (std::size_t i = 0; i < words_.size(); ++i)
            words_[i] ^= other.words_[i];
        return *this;
    }

    std::string to_string() const
    {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i)
            if ((*this)[i])
                s[i] = '1';
        return s;
    }

    std::vector<std::uint8_t> to_bits() const
    {
        std::vector<std::uint8_t> out(size_);
        for (std::size_t i = 0; i < size_; ++i)
            out[i] = (*this)[i];
        return out;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    void trim() noexcept
    {
        if (size_ % 64 != 0 && !words_.empty())
            words_.back() &= (std::uint64_t{1} << (size_ % 64)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// Vectorial boolean negation: complements every component.
inline BitVector vector_negation(BitVector x)
{
    x.flip_all();
    return x;
}

} // namespace cirng
