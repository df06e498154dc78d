#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace cirng::stats {

// Rank over GF(2) of a matrix given as row bitmasks (at most 64 columns).
// Only the low `cols` bits of each row are considered.
inline std::size_t gf2_rank(std::span<const std::uint64_t> rows, std::size_t cols)
{
    if (rows.empty() || cols == 0 || cols > 64)
        throw std::invalid_argument("gf2_rank: need at least one row and 1..64 columns");
    const std::uint64_t col_mask = cols == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cols) - 1;
    std::vector<std::uint64_t> m(rows.begin(), rows.end());
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        std::size_t pivot = rank;
        while (pivot < m.size() && !(m[pivot] & col_mask & bit))
            ++pivot;
        if (pivot == m.size())
            continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = 0; r < m.size(); ++r)
            if (r != rank && (m[r] & bit))
                m[r] ^= m[rank];
        ++rank;
    }
    return rank;
}

// P(rank = r) for a uniformly random rows x cols matrix over GF(2):
// 2^{r(rows+cols-r) - rows*cols} prod_{i<r} (1-2^{i-rows})(1-2^{i-cols}) / (1-2^{i-r}).
inline double rank_probability(std::size_t rows, std::size_t cols, std::size_t r)
{
    if (r > rows || r > cols)
        return 0.0;
    const double m = static_cast<double>(rows);
    const double n = static_cast<double>(cols);
    const double rr = static_cast<double>(r);
    double p = std::exp2(rr * (m + n - rr) - m * n);
    for (std::size_t i = 0; i < r; ++i) {
        const double di = static_cast<double>(i);
        p *= (1.0 - std::exp2(di - m)) * (1.0 - std::exp2(di - n)) / (1.0 - std::exp2(di - rr));
    }
    return p;
}

inline double rank_distribution(std::size_t n, std::size_t r) { return rank_probability(n, n, r); }

} // namespace cirng::stats
