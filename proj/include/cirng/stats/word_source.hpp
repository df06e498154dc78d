#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cirng::stats {

class InsufficientData : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A stream of 32-bit words, backed by a generator or a packed byte buffer.
// Bytes are grouped big-endian, so bit order matches the MSB-first packing
// of the generator output.
class WordSource
{
public:
    static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

    template <class Gen>
    static WordSource from_generator(Gen gen, std::string description,
                                     std::size_t limit = kUnlimited)
    {
        auto shared = std::make_shared<Gen>(std::move(gen));
        return WordSource([shared] { return static_cast<std::uint32_t>((*shared)()); },
                          std::move(description), limit);
    }

    static WordSource from_bytes(std::vector<std::uint8_t> bytes, std::string description)
    {
        const std::size_t n_words = bytes.size() / 4;
        auto data = std::make_shared<std::vector<std::uint8_t>>(std::move(bytes));
        auto pos = std::make_shared<std::size_t>(0);
        return WordSource(
            [data, pos] {
                const std::uint8_t* b = data->data() + 4 * (*pos)++;
                return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
                       (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
            },
            std::move(description), n_words);
    }

    static WordSource from_words(std::vector<std::uint32_t> words, std::string description)
    {
        const std::size_t n = words.size();
        auto data = std::make_shared<std::vector<std::uint32_t>>(std::move(words));
        auto pos = std::make_shared<std::size_t>(0);
        return WordSource([data, pos] { return (*data)[(*pos)++]; }, std::move(description), n);
    }

    const std::string& description() const noexcept { return description_; }
    std::size_t consumed() const noexcept { return consumed_; }
    std::size_t remaining() const noexcept { return limit_ - consumed_; }

    // Throws InsufficientData unless `count` more words are available.
    void require(std::size_t count, const std::string& test_name) const
    {
        if (remaining() < count)
            throw InsufficientData(test_name + ": needs " + std::to_string(count) +
                                   " words, " + std::to_string(remaining()) + " available");
    }

    std::uint32_t next()
    {
        if (consumed_ >= limit_)
            throw InsufficientData("word source exhausted");
        ++consumed_;
        return next_();
    }

    void fill(std::span<std::uint32_t> out)
    {
        for (auto& w : out)
            w = next();
    }

    // Uniform real in [0,1): word / 2^32.
    double next_uniform() { return next() * 0x1p-32; }

private:
    WordSource(std::function<std::uint32_t()> next, std::string description, std::size_t limit)
        : next_(std::move(next)), description_(std::move(description)), limit_(limit)
    {
    }

    std::function<std::uint32_t()> next_;
    std::string description_;
    std::size_t limit_;
    std::size_t consumed_ = 0;
};

} // namespace cirng::stats
