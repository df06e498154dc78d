#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace cirng::stats {

// Upper tail P(X >= stat) of a chi-square variable with `dof` degrees of
// freedom, i.e. Q(dof/2, stat/2).
inline double chi_square_pvalue(double stat, unsigned dof)
{
    if (dof == 0)
        throw std::invalid_argument("chi_square_pvalue: dof must be positive");
    if (!(stat >= 0.0))
        throw std::invalid_argument("chi_square_pvalue: statistic must be non-negative");
    if (stat == 0.0)
        return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * stat);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// P(K > x) for the limiting Kolmogorov distribution.
inline double kolmogorov_upper_tail(double x)
{
    if (x <= 0.0)
        return 1.0;
    if (x < 1.18) {
        // Small-x form: P(K <= x) = sqrt(2 pi)/x * sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
        const double pi2 = std::numbers::pi * std::numbers::pi;
        double cdf = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double t = 2.0 * k - 1.0;
            cdf += std::exp(-t * t * pi2 / (8.0 * x * x));
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double tail = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        tail += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18)
            break;
    }
    return std::clamp(tail, 0.0, 1.0);
}

// Two-sided Kolmogorov-Smirnov statistic D_n against the uniform CDF on [0,1].
inline double ks_statistic_uniform(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("ks_statistic_uniform: empty sample");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double u = std::clamp(v[i], 0.0, 1.0);
        d = std::max({d, (i + 1) / n - u, u - i / n});
    }
    return d;
}

// p-value of the KS uniformity test. The limiting distribution is evaluated
// at Stephens' finite-sample corrected statistic (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
inline double ks_uniformity(std::span<const double> p_values)
{
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("ks_uniformity: values must lie in [0,1]");
    const double d = ks_statistic_uniform(p_values);
    const double rn = std::sqrt(static_cast<double>(p_values.size()));
    return kolmogorov_upper_tail(d * (rn + 0.12 + 0.11 / rn));
}

} // namespace cirng::stats
