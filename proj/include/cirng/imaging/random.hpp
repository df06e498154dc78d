#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cirng::imaging {

// Standard normal deviates by Box-Muller over mt19937_64. The std
// distributions are avoided so streams are identical across standard
// libraries.
class GaussianSource
{
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    // Uniform in (0, 1].
    double uniform() { return static_cast<double>((rng_() >> 11) + 1) * 0x1p-53; }

    double operator()()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double a = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace cirng::imaging
