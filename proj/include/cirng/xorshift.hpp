#pragma once

#include <cstdint>
#include <limits>

namespace cirng {

// Marsaglia 32-bit xorshift with the (13, 17, 5) triple. The state word is
// also the output of each round.
class XorShift32
{
public:
    using result_type = std::uint32_t;

    // Substituted for a zero seed; zero is the fixed point of the round map.
    static constexpr result_type kZeroSeedFallback = 0x9E3779B9u;

    constexpr XorShift32() noexcept : word_(kZeroSeedFallback) {}
    constexpr explicit XorShift32(result_type seed) noexcept
        : word_(seed == 0 ? kZeroSeedFallback : seed)
    {
    }

    static constexpr result_type step(result_type x) noexcept
    {
        x ^= x << 13;
        x ^= x >> 17;
        x ^= x << 5;
        return x;
    }

    constexpr result_type operator()() noexcept
    {
        word_ = step(word_);
        return word_;
    }

    constexpr result_type word() const noexcept { return word_; }

    static constexpr result_type min() noexcept { return 1; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    friend constexpr bool operator==(const XorShift32&, const XorShift32&) = default;

private:
    result_type word_;
};

constexpr XorShift32 seed_xorshift(std::uint32_t raw) noexcept { return XorShift32(raw); }

// One round applied to an explicit state; returns the advanced state, whose
// word is the round output.
constexpr XorShift32 xorshift_next(XorShift32 state) noexcept
{
    state();
    return state;
}

} // namespace cirng
