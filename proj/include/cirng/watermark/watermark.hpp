#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "../bit_vector.hpp"
#include "../chaotic.hpp"
#include "../imaging/image.hpp"

namespace cirng::watermark {

using imaging::BinaryImage;
using imaging::GrayImage;

// Bit-plane selection. Plane 7 is the most significant bit of a pixel.
struct CoefficientSpec
{
    std::uint8_t msc_planes = 0xF0;   // four most significant bits
    std::uint8_t lsc_planes = 0x07;   // three least significant bits

    void validate() const
    {
        if (msc_planes & lsc_planes)
            throw std::invalid_argument("CoefficientSpec: a bit-plane cannot be both MSC and LSC");
        if (lsc_planes == 0)
            throw std::invalid_argument("CoefficientSpec: at least one LSC plane is required");
    }

    std::size_t msc_per_pixel() const { return static_cast<std::size_t>(std::popcount(msc_planes)); }
    std::size_t lsc_per_pixel() const { return static_cast<std::size_t>(std::popcount(lsc_planes)); }
};

struct Coefficients
{
    std::vector<std::uint8_t> msc;
    std::vector<std::uint8_t> lsc;
};

namespace detail {

inline void collect_planes(std::uint8_t pixel, std::uint8_t planes, std::vector<std::uint8_t>& out)
{
    for (int b = 7; b >= 0; --b)
        if (planes & (1u << b))
            out.push_back((pixel >> b) & 1u);
}

} // namespace detail

// Row-major, MSB-first linearization of the selected bit-planes.
inline Coefficients split_coefficients(const GrayImage& img, const CoefficientSpec& spec)
{
    spec.validate();
    Coefficients c;
    c.msc.reserve(img.size() * spec.msc_per_pixel());
    c.lsc.reserve(img.size() * spec.lsc_per_pixel());
    for (std::uint8_t p : img.pixels) {
        detail::collect_planes(p, spec.msc_planes, c.msc);
        detail::collect_planes(p, spec.lsc_planes, c.lsc);
    }
    return c;
}

// Inverse of split_coefficients; planes in neither set are taken from `base`.
inline GrayImage merge_coefficients(const GrayImage& base, const Coefficients& c,
                                    const CoefficientSpec& spec)
{
    spec.validate();
    if (c.msc.size() != base.size() * spec.msc_per_pixel() ||
        c.lsc.size() != base.size() * spec.lsc_per_pixel())
        throw std::invalid_argument("merge_coefficients: coefficient count does not match image");
    GrayImage out = base;
    std::size_t im = 0, il = 0;
    for (auto& p : out.pixels) {
        unsigned v = p;
        for (int b = 7; b >= 0; --b) {
            const unsigned mask = 1u << b;
            if (spec.msc_planes & mask)
                v = (v & ~mask) | (unsigned{c.msc[im++]} << b);
            else if (spec.lsc_planes & mask)
                v = (v & ~mask) | (unsigned{c.lsc[il++]} << b);
        }
        p = static_cast<std::uint8_t>(v);
    }
    return out;
}

enum class Mode { Unauthenticated, Authenticated };

inline const char* to_string(Mode m) { return m == Mode::Authenticated ? "auth" : "unauth"; }

enum class Mixing { ChaoticIterations, Xor };

struct EmbeddingKey
{
    std::uint32_t seed1 = 1;   // drives the chunk lengths of the mixing iterations
    std::uint32_t seed2 = 2;   // drives the strategy (cell indices)
    Mode mode = Mode::Unauthenticated;
    std::size_t c = 0;         // inner iterations per round; 0 selects 3 * (watermark bits)
    std::size_t rounds = 0;    // mixing rounds; 0 selects ceil(4 * bits / c)
};

struct EmbedOptions
{
    CoefficientSpec coefficients;
    Mixing mixing = Mixing::ChaoticIterations;
    std::size_t repetitions = 1;   // copies of the watermark, extracted by majority vote
};

// ---------------------------------------------------------------------------
// Strategy derivation

// XOR-rotate fold of a bit sequence into 32 bits: the bits are packed
// MSB-first into 32-bit words w_i (zero padded) and h <- rotl(h, 5) xor w_i,
// starting from kFoldInit. A single flipped input bit always changes h.
inline constexpr std::uint32_t kFoldInit = 0x6A09E667u;

inline std::uint32_t fold_bits(std::span<const std::uint8_t> bits)
{
    std::uint32_t h = kFoldInit;
    for (std::size_t i = 0; i < bits.size(); i += 32) {
        std::uint32_t w = 0;
        for (std::size_t j = 0; j < 32; ++j)
            w = (w << 1) | (i + j < bits.size() ? (bits[i + j] & 1u) : 0u);
        h = std::rotl(h, 5) ^ w;
    }
    return h;
}

// Bijective avalanche finalizer (MurmurHash3 fmix32).
inline constexpr std::uint32_t avalanche(std::uint32_t h) noexcept
{
    h ^= h >> 16;
    h *= 0x85EBCA6Bu;
    h ^= h >> 13;
    h *= 0xC2B2AE35u;
    h ^= h >> 16;
    return h;
}

struct StrategySeeds
{
    std::uint32_t seed1;
    std::uint32_t seed2;
    friend bool operator==(const StrategySeeds&, const StrategySeeds&) = default;
};

// Unauthenticated: the key seeds. Authenticated: d = avalanche(fold(msc));
// seed1 ^= d, seed2 ^= rotl(d, 16).
inline StrategySeeds derive_strategy_seed(const EmbeddingKey& key, std::span<const std::uint8_t> msc)
{
    if (key.mode == Mode::Unauthenticated)
        return {key.seed1, key.seed2};
    const std::uint32_t d = avalanche(fold_bits(msc));
    return {key.seed1 ^ d, key.seed2 ^ std::rotl(d, 16)};
}

// ---------------------------------------------------------------------------
// Mixture

inline std::size_t mixing_c(const EmbeddingKey& key, std::size_t n_bits)
{
    return key.c != 0 ? key.c : 3 * n_bits;
}

inline std::size_t mixing_rounds(const EmbeddingKey& key, std::size_t n_bits)
{
    if (key.rounds != 0)
        return key.rounds;
    const std::size_t c = mixing_c(key, n_bits);
    return std::max<std::size_t>(1, (4 * n_bits + c - 1) / c);
}

// Runs `rounds` chaotic-iteration rounds with the watermark bits as the
// system state. Negation is an involution and the flips commute, so running
// the same strategy again restores the input.
template <LengthSource Lengths, IndexSource Indices>
std::vector<std::uint8_t> mix_with_strategy(std::span<const std::uint8_t> bits, Lengths lengths,
                                            Indices indices, std::size_t rounds)
{
    BitVector x(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        x.set(i, bits[i] & 1u);
    ChaoticGenerator gen(std::move(x), std::move(lengths), std::move(indices));
    for (std::size_t r = 0; r < rounds; ++r)
        gen.round();
    return gen.state().to_bits();
}

inline std::vector<std::uint8_t> mix_bits(std::span<const std::uint8_t> bits, const StrategySeeds& seeds,
                                          const EmbeddingKey& key, Mixing mixing)
{
    if (bits.size() < 2)
        throw std::invalid_argument("mix_bits: watermark needs at least two bits");
    if (mixing == Mixing::ChaoticIterations)
        return mix_with_strategy(bits, XorShiftLengths{seed_xorshift(seeds.seed1), mixing_c(key, bits.size())},
                                 XorShiftIndices{seed_xorshift(seeds.seed2)},
                                 mixing_rounds(key, bits.size()));
    auto stream = make_ci_generator(CiConfig{seeds.seed1, seeds.seed2, 32, 96, 0, false});
    std::vector<std::uint8_t> out(bits.begin(), bits.end());
    for (auto& b : out)
        b = static_cast<std::uint8_t>((b & 1u) ^ stream.next_bit());
    return out;
}

// Key-driven mixture of a watermark (seeds taken from the key as-is).
inline std::vector<std::uint8_t> mix_watermark(const BinaryImage& wm, const EmbeddingKey& key,
                                               Mixing mixing = Mixing::ChaoticIterations)
{
    return mix_bits(wm.bits, {key.seed1, key.seed2}, key, mixing);
}

inline BinaryImage unmix_watermark(std::span<const std::uint8_t> mixed, std::size_t width,
                                   std::size_t height, const EmbeddingKey& key,
                                   Mixing mixing = Mixing::ChaoticIterations)
{
    if (mixed.size() != width * height)
        throw std::invalid_argument("unmix_watermark: bit count does not match dimensions");
    BinaryImage wm(width, height);
    wm.bits = mix_bits(mixed, {key.seed1, key.seed2}, key, mixing);
    return wm;
}

// ---------------------------------------------------------------------------
// LSC addressing

struct LscAddressSequence
{
    std::vector<std::size_t> u;
    std::size_t modulus = 0;
};

// U^0 = S^0, U^{n+1} = S^{n+1} + 2 U^n + n  (mod M).
inline LscAddressSequence embedding_sequence(std::span<const std::size_t> strategy, std::size_t modulus,
                                             std::size_t count)
{
    if (modulus == 0)
        throw std::invalid_argument("embedding_sequence: modulus must be positive");
    if (strategy.size() < count)
        throw std::invalid_argument("embedding_sequence: strategy shorter than requested count");
    LscAddressSequence seq;
    seq.modulus = modulus;
    seq.u.reserve(count);
    const std::uint64_t m = modulus;
    std::uint64_t u = 0;
    for (std::size_t n = 0; n < count; ++n) {
        const std::uint64_t s = strategy[n] % m;
        u = n == 0 ? s : (s + 2 * u + (n - 1) % m) % m;
        seq.u.push_back(static_cast<std::size_t>(u));
    }
    return seq;
}

// Distinct write positions: U^k itself, or on a repeat visit the next free
// address after it (cyclically). Needs count <= M.
inline std::vector<std::size_t> resolve_addresses(const LscAddressSequence& seq)
{
    if (seq.u.size() > seq.modulus)
        throw std::invalid_argument("resolve_addresses: more writes than LSCs");
    std::vector<std::uint8_t> used(seq.modulus, 0);
    std::vector<std::size_t> out;
    out.reserve(seq.u.size());
    for (std::size_t a : seq.u) {
        while (used[a])
            a = a + 1 == seq.modulus ? 0 : a + 1;
        used[a] = 1;
        out.push_back(a);
    }
    return out;
}

// Seed of the index stream behind the LSC addresses. The mixture alone is
// nearly blind to seed1 (it only moves round boundaries inside one flip
// sequence), so seed1 enters here as well.
inline std::uint32_t address_seed(const StrategySeeds& seeds)
{
    return seeds.seed2 ^ avalanche(seeds.seed1);
}

// The first `count` strategy indices (cells of the mixing system).
inline std::vector<std::size_t> strategy_indices(std::uint32_t seed, std::size_t n_cells, std::size_t count)
{
    XorShiftIndices src{seed_xorshift(seed)};
    std::vector<std::size_t> s(count);
    for (auto& v : s)
        v = src.next_index(n_cells);
    return s;
}

// ---------------------------------------------------------------------------
// Embedding and extraction

namespace detail {

struct Plan
{
    StrategySeeds seeds;
    std::vector<std::size_t> addresses;
};

inline Plan make_plan(const Coefficients& coeffs, std::size_t wm_bits, const EmbeddingKey& key,
                      const EmbedOptions& opt)
{
    if (opt.repetitions == 0)
        throw std::invalid_argument("repetitions must be at least 1");
    const std::size_t writes = wm_bits * opt.repetitions;
    if (writes > coeffs.lsc.size())
        throw std::invalid_argument("watermark (" + std::to_string(writes) + " bits) exceeds LSC capacity (" +
                                    std::to_string(coeffs.lsc.size()) + ")");
    Plan p;
    p.seeds = derive_strategy_seed(key, coeffs.msc);
    const auto s = strategy_indices(address_seed(p.seeds), wm_bits, writes);
    p.addresses = resolve_addresses(embedding_sequence(s, coeffs.lsc.size(), writes));
    return p;
}

} // namespace detail

inline GrayImage embed(const GrayImage& carrier, const BinaryImage& wm, const EmbeddingKey& key,
                       const EmbedOptions& opt = {})
{
    Coefficients coeffs = split_coefficients(carrier, opt.coefficients);
    const auto plan = detail::make_plan(coeffs, wm.size(), key, opt);
    const auto mixed = mix_bits(wm.bits, plan.seeds, key, opt.mixing);
    for (std::size_t k = 0; k < plan.addresses.size(); ++k)
        coeffs.lsc[plan.addresses[k]] = mixed[k % mixed.size()];
    return merge_coefficients(carrier, coeffs, opt.coefficients);
}

inline BinaryImage extract(const GrayImage& img, const EmbeddingKey& key, std::size_t wm_width,
                           std::size_t wm_height, const EmbedOptions& opt = {})
{
    const std::size_t n = wm_width * wm_height;
    const Coefficients coeffs = split_coefficients(img, opt.coefficients);
    const auto plan = detail::make_plan(coeffs, n, key, opt);
    std::vector<std::size_t> ones(n, 0);
    std::vector<std::uint8_t> first(n, 0);
    for (std::size_t k = 0; k < plan.addresses.size(); ++k) {
        const std::uint8_t b = coeffs.lsc[plan.addresses[k]];
        if (k < n)
            first[k] = b;
        ones[k % n] += b;
    }
    std::vector<std::uint8_t> mixed(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t zeros = opt.repetitions - ones[i];
        mixed[i] = ones[i] == zeros ? first[i] : static_cast<std::uint8_t>(ones[i] > zeros);
    }
    BinaryImage wm(wm_width, wm_height);
    wm.bits = mix_bits(mixed, plan.seeds, key, opt.mixing);
    return wm;
}

// Percentage of equal bits.
inline double similarity(const BinaryImage& a, const BinaryImage& b)
{
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("similarity: watermark dimensions differ");
    if (a.bits.empty())
        throw std::invalid_argument("similarity: empty watermark");
    std::size_t same = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i)
        same += (a.bits[i] & 1u) == (b.bits[i] & 1u);
    return 100.0 * static_cast<double>(same) / static_cast<double>(a.bits.size());
}

} // namespace cirng::watermark
