#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bit_vector.hpp"
#include "xorshift.hpp"

namespace cirng {

// A source of chunk lengths m (number of inner iterations per emitted state).
template <class T>
concept LengthSource = requires(T t) {
    { t.next_length() } -> std::convertible_to<std::size_t>;
};

// A strategy: an unbounded sequence of 0-based cell indices.
template <class T>
concept IndexSource = requires(T t, std::size_t n) {
    { t.next_index(n) } -> std::convertible_to<std::size_t>;
};

// m = (a mod 2) + c with a drawn from the first xorshift.
struct XorShiftLengths
{
    XorShift32 gen;
    std::size_t c = 96;

    std::size_t next_length() noexcept { return (gen() & 1u) + c; }
};

// S = b mod N with b drawn from the second xorshift.
struct XorShiftIndices
{
    XorShift32 gen;

    std::size_t next_index(std::size_t n_cells) noexcept { return gen() % n_cells; }
};

// Replays an explicit, finite list of lengths.
class SequenceLengths
{
public:
    explicit SequenceLengths(std::vector<std::size_t> lengths) : lengths_(std::move(lengths)) {}

    std::size_t next_length()
    {
        if (pos_ >= lengths_.size())
            throw std::out_of_range("SequenceLengths: injected sequence exhausted");
        return lengths_[pos_++];
    }

private:
    std::vector<std::size_t> lengths_;
    std::size_t pos_ = 0;
};

// Replays an explicit, finite strategy. Indices are stored 0-based.
class SequenceIndices
{
public:
    explicit SequenceIndices(std::vector<std::size_t> indices) : indices_(std::move(indices)) {}

    static SequenceIndices from_one_based(std::span<const std::size_t> one_based)
    {
        std::vector<std::size_t> v;
        v.reserve(one_based.size());
        for (auto s : one_based) {
            if (s == 0)
                throw std::invalid_argument("SequenceIndices: one-based index must be >= 1");
            v.push_back(s - 1);
        }
        return SequenceIndices(std::move(v));
    }

    std::size_t next_index(std::size_t n_cells)
    {
        if (pos_ >= indices_.size())
            throw std::out_of_range("SequenceIndices: injected strategy exhausted");
        const std::size_t s = indices_[pos_++];
        if (s >= n_cells)
            throw std::invalid_argument("SequenceIndices: strategy index outside the state vector");
        return s;
    }

private:
    std::vector<std::size_t> indices_;
    std::size_t pos_ = 0;
};

// Component of the vectorial negation: f_0(x)_i = not x_i.
struct NegationComponent
{
    bool operator()(const BitVector& x, std::size_t i) const noexcept { return !x[i]; }
};

namespace detail {

template <class F>
bool iteration_component(F& f, const BitVector& x, std::size_t i)
{
    if constexpr (std::is_invocable_r_v<bool, F&, const BitVector&, std::size_t>)
        return f(x, i);
    else
        return f(x)[i];
}

} // namespace detail

// General chaotic iterations: at step n only cell S^n is replaced by
// f(x^{n-1})_{S^n}. `f` is either a whole-vector map BitVector -> BitVector
// or a component map (x, i) -> bool. Returns x^0 .. x^steps.
template <class F, IndexSource Strategy>
std::vector<BitVector> chaotic_iterate(BitVector x0, F f, Strategy& strategy, std::size_t steps)
{
    std::vector<BitVector> states;
    states.reserve(steps + 1);
    states.push_back(x0);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t s = strategy.next_index(x0.size());
        if (s >= x0.size())
            throw std::invalid_argument("chaotic_iterate: strategy index outside the state vector");
        x0.set(s, detail::iteration_component(f, x0, s));
        states.push_back(x0);
    }
    return states;
}

// Same iteration, keeping only the final state.
template <class F, IndexSource Strategy>
BitVector chaotic_iterate_final(BitVector x, F f, Strategy& strategy, std::size_t steps)
{
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t s = strategy.next_index(x.size());
        if (s >= x.size())
            throw std::invalid_argument("chaotic_iterate: strategy index outside the state vector");
        x.set(s, detail::iteration_component(f, x, s));
    }
    return x;
}

// x^0 = t mod 2^N written as N bits, most significant first.
inline BitVector seed_from_time(std::uint64_t t, std::size_t n_cells)
{
    BitVector x(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        const std::size_t shift = n_cells - 1 - i;
        x.set(i, shift < 64 && ((t >> shift) & 1u));
    }
    return x;
}

// The chaotic-iterations generator. Each round draws m from the length
// source, negates m strategy-selected cells, and emits the whole state.
template <LengthSource Lengths, IndexSource Indices>
class ChaoticGenerator
{
public:
    ChaoticGenerator(BitVector x0, Lengths lengths, Indices indices, bool emit_seed_first = false)
        : x_(std::move(x0)), lengths_(std::move(lengths)), indices_(std::move(indices)),
          seed_pending_(emit_seed_first)
    {
        if (x_.size() < 2)
            throw std::invalid_argument("ChaoticGenerator: state needs at least two cells");
    }

    std::size_t n_cells() const noexcept { return x_.size(); }
    const BitVector& state() const noexcept { return x_; }

    // One round of the generator; returns the number of inner iterations m.
    std::size_t round()
    {
        const std::size_t m = lengths_.next_length();
        const std::size_t n = x_.size();
        for (std::size_t i = 0; i < m; ++i)
            x_.flip(indices_.next_index(n));
        return m;
    }

    // Next emitted N-bit chunk: x^0 first when emission of the seed is
    // requested, then the state after each round.
    const BitVector& next_chunk()
    {
        if (seed_pending_)
            seed_pending_ = false;
        else
            round();
        return x_;
    }

    bool next_bit()
    {
        if (bit_pos_ == chunk_.size()) {
            chunk_ = next_chunk();
            bit_pos_ = 0;
        }
        return chunk_[bit_pos_++];
    }

    // 32 consecutive output bits, first bit in the most significant position.
    std::uint32_t next_word()
    {
        std::uint32_t w = 0;
        for (int i = 0; i < 32; ++i)
            w = (w << 1) | static_cast<std::uint32_t>(next_bit());
        return w;
    }

    std::uint32_t operator()() { return next_word(); }

    std::vector<std::uint8_t> bits(std::size_t count)
    {
        std::vector<std::uint8_t> out(count);
        for (auto& b : out)
            b = next_bit();
        return out;
    }

    // Packs output bits MSB-first into bytes.
    void fill_bytes(std::span<std::uint8_t> out)
    {
        for (auto& byte : out) {
            std::uint8_t v = 0;
            for (int i = 0; i < 8; ++i)
                v = static_cast<std::uint8_t>((v << 1) | next_bit());
            byte = v;
        }
    }

private:
    BitVector x_;
    Lengths lengths_;
    Indices indices_;
    bool seed_pending_;
    BitVector chunk_;
    std::size_t bit_pos_ = 0;
};

using CiGenerator = ChaoticGenerator<XorShiftLengths, XorShiftIndices>;

struct CiConfig
{
    std::uint32_t seed1 = 1;
    std::uint32_t seed2 = 2;
    std::size_t n_cells = 32;
    std::size_t c = 96;
    std::uint64_t x0 = 0;     // rendered with seed_from_time
    bool emit_seed_first = false;
};

inline CiGenerator make_ci_generator(const CiConfig& cfg)
{
    if (cfg.c == 0)
        throw std::invalid_argument("make_ci_generator: c must be positive");
    return CiGenerator(seed_from_time(cfg.x0, cfg.n_cells),
                       XorShiftLengths{seed_xorshift(cfg.seed1), cfg.c},
                       XorShiftIndices{seed_xorshift(cfg.seed2)}, cfg.emit_seed_first);
}

// Bit k of the stream (seed not emitted), evaluated directly from the closed
// form x_{k mod N}^{m_0 + ... + m_{floor(k/N)}} by running the plain chaotic
// iterations from fresh copies of the sources.
template <LengthSource Lengths, IndexSource Indices>
bool kth_bit_oracle(const BitVector& x0, Lengths lengths, Indices indices, std::size_t k)
{
    const std::size_t n = x0.size();
    std::size_t total = 0;
    for (std::size_t i = 0; i <= k / n; ++i)
        total += lengths.next_length();
    const BitVector x = chaotic_iterate_final(x0, NegationComponent{}, indices, total);
    return x[k % n];
}

// Record of the m and S sequences consumed and the emitted states, for
// reproducing worked traces. Strategy indices are stored one-based.
struct StrategyTrace
{
    std::vector<std::size_t> m_seq;
    std::vector<std::size_t> s_seq;
    std::vector<BitVector> states;   // x^0 followed by the state after each round
};

template <LengthSource Lengths, IndexSource Indices>
StrategyTrace trace_rounds(BitVector x0, Lengths lengths, Indices indices, std::size_t rounds)
{
    StrategyTrace t;
    t.states.push_back(x0);
    for (std::size_t r = 0; r < rounds; ++r) {
        const std::size_t m = lengths.next_length();
        t.m_seq.push_back(m);
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t s = indices.next_index(x0.size());
            t.s_seq.push_back(s + 1);
            x0.flip(s);
        }
        t.states.push_back(x0);
    }
    return t;
}

} // namespace cirng
