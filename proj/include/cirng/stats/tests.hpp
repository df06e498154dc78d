#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gf2.hpp"
#include "special.hpp"
#include "word_source.hpp"

namespace cirng::stats {

enum class Verdict { Pass, Fail, InsufficientData };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    case Verdict::InsufficientData: return "INSUFFICIENT";
    }
    return "?";
}

struct TestResult
{
    std::string name;
    std::vector<double> p_values;
    Verdict verdict = Verdict::InsufficientData;
    std::size_t samples = 0;     // words consumed
    std::string message;
};

inline constexpr double kDefaultEpsilon = 1e-4;

// Two-tailed rule: fail iff some p-value is below eps or above 1 - eps.
inline Verdict verdict(std::span<const double> p_values, double epsilon = kDefaultEpsilon)
{
    for (double p : p_values)
        if (p < epsilon || p > 1.0 - epsilon)
            return Verdict::Fail;
    return Verdict::Pass;
}

namespace detail {

template <class Body>
TestResult run_guarded(const std::string& name, WordSource& src, double epsilon, Body body)
{
    TestResult r;
    r.name = name;
    const std::size_t start = src.consumed();
    try {
        r.p_values = body();
        for (double& p : r.p_values)
            p = std::clamp(p, 0.0, 1.0);
        r.verdict = verdict(r.p_values, epsilon);
    } catch (const InsufficientData& e) {
        r.p_values.clear();
        r.verdict = Verdict::InsufficientData;
        r.message = e.what();
    }
    r.samples = src.consumed() - start;
    return r;
}

// Pearson chi-square of observed counts against expected probabilities.
inline double chi_square_stat(std::span<const double> observed, std::span<const double> probs,
                              double total)
{
    double q = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = total * probs[i];
        q += (observed[i] - e) * (observed[i] - e) / e;
    }
    return q;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Binary rank

struct RankBins
{
    std::vector<std::size_t> lower_edges;   // bin i holds ranks >= lower_edges[i] (and < the next)
    std::vector<double> probs;
};

// Ranks of a rows x cols matrix binned as {<= k-lumped, ..., min(rows,cols)}.
inline RankBins rank_bins(std::size_t rows, std::size_t cols, std::size_t n_bins)
{
    const std::size_t full = std::min(rows, cols);
    RankBins b;
    double top = 0.0;
    for (std::size_t i = 0; i + 1 < n_bins; ++i) {
        const std::size_t r = full - i;
        b.lower_edges.insert(b.lower_edges.begin(), r);
        const double p = rank_probability(rows, cols, r);
        b.probs.insert(b.probs.begin(), p);
        top += p;
    }
    b.lower_edges.insert(b.lower_edges.begin(), 0);
    b.probs.insert(b.probs.begin(), 1.0 - top);
    return b;
}

inline double rank_chi_square_pvalue(std::span<const std::size_t> ranks, const RankBins& bins)
{
    std::vector<double> counts(bins.probs.size(), 0.0);
    for (std::size_t r : ranks) {
        std::size_t bin = 0;
        while (bin + 1 < bins.lower_edges.size() && r >= bins.lower_edges[bin + 1])
            ++bin;
        counts[bin] += 1.0;
    }
    const double q = detail::chi_square_stat(counts, bins.probs, static_cast<double>(ranks.size()));
    return chi_square_pvalue(q, static_cast<unsigned>(bins.probs.size() - 1));
}

// 32x32 uses whole words as rows; 31x31 uses the 31 most significant bits of
// 31 words. Ranks are binned {<= n-3, n-2, n-1, n}.
inline TestResult binary_rank_square_test(WordSource& src, std::size_t n, std::size_t matrices,
                                          double epsilon = kDefaultEpsilon)
{
    const std::string name = "Binary Rank " + std::to_string(n) + "x" + std::to_string(n);
    return detail::run_guarded(name, src, epsilon, [&]() -> std::vector<double> {
        if (n != 31 && n != 32)
            throw std::invalid_argument("binary_rank_square_test: size must be 31 or 32");
        src.require(n * matrices, name);
        std::vector<std::size_t> ranks(matrices);
        std::vector<std::uint64_t> rows(n);
        for (auto& r : ranks) {
            for (auto& row : rows)
                row = n == 32 ? src.next() : (src.next() >> 1);
            r = gf2_rank(rows, n);
        }
        return {rank_chi_square_pvalue(ranks, rank_bins(n, n, 4))};
    });
}

// 6x8 matrices built from one byte of each of six words. The byte window
// slides over the 25 bit offsets of the word; each offset yields a chi-square
// p-value on bins {<= 4, 5, 6} and the final p-value is their KS uniformity.
inline TestResult binary_rank_6x8_test(WordSource& src, std::size_t matrices_per_offset,
                                       double epsilon = kDefaultEpsilon)
{
    const std::string name = "Binary Rank 6x8";
    return detail::run_guarded(name, src, epsilon, [&]() -> std::vector<double> {
        constexpr std::size_t kOffsets = 25;
        src.require(6 * matrices_per_offset * kOffsets, name);
        const RankBins bins = rank_bins(6, 8, 3);
        std::vector<double> per_offset;
        std::vector<std::size_t> ranks(matrices_per_offset);
        std::array<std::uint64_t, 6> rows{};
        for (std::size_t offset = 0; offset < kOffsets; ++offset) {
            const unsigned shift = static_cast<unsigned>(24 - offset);
            for (auto& r : ranks) {
                for (auto& row : rows)
                    row = (src.next() >> shift) & 0xFFu;
                r = gf2_rank(rows, 8);
            }
            per_offset.push_back(rank_chi_square_pvalue(ranks, bins));
        }
        return {ks_uniformity(per_offset)};
    });
}

// ---------------------------------------------------------------------------
// Count the ones

// Letter of a byte by popcount: {<=2, 3, 4, 5, >=6} -> 0..4.
inline int ones_letter(std::uint8_t byte)
{
    const int k = std::popcount(byte);
    return std::clamp(k - 2, 0, 4);
}

inline constexpr std::array<double, 5> kLetterProbs = {37.0 / 256, 56.0 / 256, 70.0 / 256,
                                                       56.0 / 256, 37.0 / 256};

// Q5 - Q4 over overlapping (cyclic) words of a letter sequence; asymptotically
// chi-square with 5^5 - 5^4 = 2500 degrees of freedom.
inline double overlapping_letters_pvalue(std::span<const std::uint8_t> letters)
{
    const std::size_t n = letters.size();
    std::vector<double> c5(3125, 0.0), c4(625, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < 4; ++j)
            w = w * 5 + letters[(i + j) % n];
        c4[w] += 1.0;
        c5[w * 5 + letters[(i + 4) % n]] += 1.0;
    }
    auto q = [n](const std::vector<double>& counts, std::size_t len) {
        double s = 0.0;
        for (std::size_t w = 0; w < counts.size(); ++w) {
            double p = 1.0;
            std::size_t v = w;
            for (std::size_t j = 0; j < len; ++j) {
                p *= kLetterProbs[v % 5];
                v /= 5;
            }
            const double e = static_cast<double>(n) * p;
            s += (counts[w] - e) * (counts[w] - e) / e;
        }
        return s;
    };
    const double stat = std::max(0.0, q(c5, 5) - q(c4, 4));
    return chi_square_pvalue(stat, 2500);
}

enum class OnesVariant { Stream, SpecificByte };

// Stream: letters from every byte of the stream (most significant byte of
// each word first). SpecificByte: one letter per word, taken from the byte
// starting `bit_offset` bits below the top of the word; one p-value per offset.
inline TestResult count_the_ones_test(WordSource& src, OnesVariant variant, std::size_t letters,
                                      std::size_t repetitions,
                                      std::span<const unsigned> bit_offsets = {},
                                      double epsilon = kDefaultEpsilon)
{
    const std::string name = variant == OnesVariant::Stream ? "Count the ones 1" : "Count the ones 2";
    return detail::run_guarded(name, src, epsilon, [&]() -> std::vector<double> {
        std::vector<double> ps;
        std::vector<std::uint8_t> seq(letters);
        if (variant == OnesVariant::Stream) {
            src.require(repetitions * ((letters + 3) / 4), name);
            for (std::size_t rep = 0; rep < repetitions; ++rep) {
                std::uint32_t w = 0;
                for (std::size_t i = 0; i < letters; ++i) {
                    if (i % 4 == 0)
                        w = src.next();
                    seq[i] = static_cast<std::uint8_t>(
                        ones_letter(static_cast<std::uint8_t>(w >> (24 - 8 * (i % 4)))));
                }
                ps.push_back(overlapping_letters_pvalue(seq));
            }
        } else {
            static constexpr std::array<unsigned, 1> kDefaultOffset = {0};
            const auto offsets = bit_offsets.empty() ? std::span<const unsigned>(kDefaultOffset)
                                                     : bit_offsets;
            src.require(repetitions * offsets.size() * letters, name);
            for (std::size_t rep = 0; rep < repetitions; ++rep)
                for (unsigned off : offsets) {
                    if (off > 24)
                        throw std::invalid_argument("count_the_ones_test: bit offset must be <= 24");
                    for (auto& l : seq)
                        l = static_cast<std::uint8_t>(
                            ones_letter(static_cast<std::uint8_t>(src.next() >> (24 - off))));
                    ps.push_back(overlapping_letters_pvalue(seq));
                }
        }
        return ps;
    });
}

// ---------------------------------------------------------------------------
// Runs up / runs down

namespace detail {

// Knuth's covariance inverse and run-length probabilities (TAOCP 3.3.2 G).
inline constexpr double kRunsA[6][6] = {
    {4529.4, 9044.9, 13568, 18091, 22615, 27892},
    {9044.9, 18097, 27139, 36187, 45234, 55789},
    {13568, 27139, 40721, 54281, 67852, 83685},
    {18091, 36187, 54281, 72414, 90470, 111580},
    {22615, 45234, 67852, 90470, 113262, 139476},
    {27892, 55789, 83685, 111580, 139476, 172860}};
inline constexpr double kRunsB[6] = {1.0 / 6, 5.0 / 24, 11.0 / 120, 19.0 / 720, 29.0 / 5040,
                                     1.0 / 840};

inline double runs_statistic(std::span<const double> u, bool up)
{
    std::array<double, 6> count{};
    std::size_t len = 1;
    for (std::size_t i = 1; i < u.size(); ++i) {
        const bool cont = up ? u[i] > u[i - 1] : u[i] < u[i - 1];
        if (cont) {
            ++len;
        } else {
            count[std::min<std::size_t>(len, 6) - 1] += 1.0;
            len = 1;
        }
    }
    count[std::min<std::size_t>(len, 6) - 1] += 1.0;
    const double n = static_cast<double>(u.size());
    double v = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            v += (count[i] - n * kRunsB[i]) * (count[j] - n * kRunsB[j]) * kRunsA[i][j];
    return v / (n - 6.0);
}

} // namespace detail

// Each repetition converts `length` words to reals and computes Knuth's runs
// statistic (chi-square, 6 dof) for ascending and descending runs. The
// repetitions are independent, so their statistics add up to a chi-square
// with 6 * repetitions dof. Returns the up and down p-values.
inline TestResult runs_test(WordSource& src, std::size_t length, std::size_t repetitions,
                            double epsilon = kDefaultEpsilon)
{
    const std::string name = "Runs Up/Down";
    return detail::run_guarded(name, src, epsilon, [&]() -> std::vector<double> {
        if (length < 100)
            throw std::invalid_argument("runs_test: sequence too short");
        if (repetitions == 0)
            throw std::invalid_argument("runs_test: need at least one repetition");
        src.require(length * repetitions, name);
        std::vector<double> u(length);
        double up = 0.0, down = 0.0;
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            for (auto& x : u)
                x = src.next_uniform();
            up += std::max(0.0, detail::runs_statistic(u, true));
            down += std::max(0.0, detail::runs_statistic(u, false));
        }
        const auto dof = static_cast<unsigned>(6 * repetitions);
        return {chi_square_pvalue(up, dof), chi_square_pvalue(down, dof)};
    });
}

// ---------------------------------------------------------------------------
// Birthday spacings

// Expected number of repeated spacings among m birthdays in 2^day_bits days.
inline double birthday_lambda(std::size_t m, unsigned day_bits)
{
    const double md = static_cast<double>(m);
    return md * md * md / std::exp2(day_bits + 2.0);
}

// Number of repeated values among the sorted spacings of sorted birthdays.
inline std::size_t repeated_spacings(std::vector<std::uint32_t> days)
{
    std::sort(days.begin(), days.end());
    std::vector<std::uint32_t> gaps(days.size());
    std::adjacent_difference(days.begin(), days.end(), gaps.begin());
    std::sort(gaps.begin(), gaps.end());
    std::size_t j = 0;
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (gaps[i] == gaps[i - 1])
            ++j;
    return j;
}

// Poisson goodness of fit of the repeat counts, with the upper cells lumped
// so that every expected count is at least 5.
inline double poisson_chi_square_pvalue(std::span<const std::size_t> counts, double lambda)
{
    const double total = static_cast<double>(counts.size());
    std::vector<double> probs;
    double p = std::exp(-lambda), cum = 0.0;
    for (std::size_t k = 0;; ++k) {
        if (total * (1.0 - cum - p) < 5.0 || k > 200) {
            probs.push_back(1.0 - cum);
            break;
        }
        probs.push_back(p);
        cum += p;
        p *= lambda / static_cast<double>(k + 1);
    }
    std::vector<double> obs(probs.size(), 0.0);
    for (std::size_t c : counts)
        obs[std::min(c, probs.size() - 1)] += 1.0;
    if (probs.size() < 2)
        throw std::invalid_argument("poisson_chi_square_pvalue: too few samples");
    const double q = detail::chi_square_stat(obs, probs, total);
    return chi_square_pvalue(q, static_cast<unsigned>(probs.size() - 1));
}

// Birthdays are `day_bits`-bit fields of consecutive words. The field slides
// from the top of the word down over `32 - day_bits + 1` offsets (at most 9);
// each offset gives a Poisson chi-square p-value and the final p-value is
// their KS uniformity.
inline TestResult birthday_spacings_test(WordSource& src, std::size_t birthdays, unsigned day_bits,
                                         std::size_t samples_per_offset,
                                         double epsilon = kDefaultEpsilon)
{
    const std::string name = "Birthday Spacing";
    return detail::run_guarded(name, src, epsilon, [&]() -> std::vector<double> {
        if (day_bits == 0 || day_bits > 32)
            throw std::invalid_argument("birthday_spacings_test: day_bits must be in 1..32");
        const unsigned offsets = std::min(9u, 32 - day_bits + 1);
        src.require(birthdays * samples_per_offset * offsets, name);
        const double lambda = birthday_lambda(birthdays, day_bits);
        const std::uint32_t mask =
            day_bits == 32 ? 0xFFFFFFFFu : (std::uint32_t{1} << day_bits) - 1;
        std::vector<double> per_offset;
        std::vector<std::uint32_t> days(birthdays);
        std::vector<std::size_t> repeats(samples_per_offset);
        for (unsigned off = 0; off < offsets; ++off) {
            const unsigned shift = 32 - day_bits - off;
            for (auto& j : repeats) {
                for (auto& d : days)
                    d = (src.next() >> shift) & mask;
                j = repeated_spacings(days);
            }
            per_offset.push_back(poisson_chi_square_pvalue(repeats, lambda));
        }
        return {ks_uniformity(per_offset)};
    });
}

// ---------------------------------------------------------------------------
// Overlapping sums

namespace detail {

inline constexpr std::size_t kSumWindow = 100;

// Lower Cholesky factor of Cov(S_j, S_k) = (100 - |j - k|) / 12 for the 100
// overlapping window sums.
inline const std::vector<double>& overlapping_sums_cholesky()
{
    static const std::vector<double> factor = [] {
        constexpr std::size_t m = kSumWindow;
        std::vector<double> l(m * m, 0.0);
        auto cov = [](std::size_t j, std::size_t k) {
            const double d = j > k ? double(j - k) : double(k - j);
            return (double(kSumWindow) - d) / 12.0;
        };
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t k = 0; k <= j; ++k) {
                double s = cov(j, k);
                for (std::size_t t = 0; t < k; ++t)
                    s -= l[j * m + t] * l[k * m + t];
                l[j * m + k] = j == k ? std::sqrt(s) : s / l[k * m + k];
            }
        }
        return l;
    }();
    return factor;
}

} // namespace detail

// Each repetition forms the 100 overlapping sums of 100 consecutive uniforms
// and whitens them with the exact covariance to independent standard normals.
// The normal CDF values of all repetitions are pooled into one KS test.
inline TestResult overlapping_sums_test(WordSource& src, std::size_t repetitions,
                                        double epsilon = kDefaultEpsilon)
{
    const std::string name = "Overlapping Sum";
    return detail::run_guarded(name, src, epsilon, [&]() -> std::vector<double> {
        constexpr std::size_t m = detail::kSumWindow;
        src.require(repetitions * (2 * m - 1), name);
        const auto& l = detail::overlapping_sums_cholesky();
        std::vector<double> u(2 * m - 1), s(m), z(m), p;
        p.reserve(repetitions * m);
        for (std::size_t rep = 0; rep < repetitions; ++rep) {
            for (auto& x : u)
                x = src.next_uniform();
            double acc = std::accumulate(u.begin(), u.begin() + m, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                s[j] = acc - 0.5 * m;
                if (j + m < u.size())
                    acc += u[j + m] - u[j];
            }
            for (std::size_t j = 0; j < m; ++j) {
                double v = s[j];
                for (std::size_t t = 0; t < j; ++t)
                    v -= l[j * m + t] * z[t];
                z[j] = v / l[j * m + j];
                p.push_back(normal_cdf(z[j]));
            }
        }
        return {ks_uniformity(p)};
    });
}

} // namespace cirng::stats
