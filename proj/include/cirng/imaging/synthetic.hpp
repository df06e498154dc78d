#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "image.hpp"
#include "random.hpp"

namespace cirng::imaging {

// Deterministic photo-like test carrier: smooth illumination, soft-edged
// blobs and discs, and fine sensor-like grain.
inline GrayImage make_test_carrier(std::size_t width = 256, std::size_t height = 256,
                                   std::uint64_t seed = 1)
{
    GaussianSource rng(seed);
    auto unit = [&rng] { return rng.uniform(); };
    const double w = static_cast<double>(width), h = static_cast<double>(height);

    struct Blob { double x, y, r, amp; };
    std::vector<Blob> blobs(12);
    for (auto& b : blobs)
        b = {unit() * w, unit() * h, (0.05 + 0.2 * unit()) * w, -70.0 + 140.0 * unit()};
    struct Disc { double x, y, r, amp; };
    std::vector<Disc> discs(5);
    for (auto& d : discs)
        d = {unit() * w, unit() * h, (0.04 + 0.1 * unit()) * w, -50.0 + 100.0 * unit()};

    GrayImage img(width, height);
    for (std::size_t y = 0; y < height; ++y) {
        for (std::size_t x = 0; x < width; ++x) {
            const double fx = static_cast<double>(x), fy = static_cast<double>(y);
            double v = 110.0 + 40.0 * (fx / w) - 25.0 * (fy / h) +
                       12.0 * std::sin(fx / w * 9.0) * std::cos(fy / h * 7.0);
            for (const auto& b : blobs) {
                const double d2 = ((fx - b.x) * (fx - b.x) + (fy - b.y) * (fy - b.y)) / (b.r * b.r);
                v += b.amp * std::exp(-d2);
            }
            for (const auto& d : discs) {
                const double dist = std::hypot(fx - d.x, fy - d.y);
                v += d.amp / (1.0 + std::exp((dist - d.r) / 1.5));
            }
            v += 2.5 * rng();
            img.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
        }
    }
    return img;
}

// Logo-like binary watermark: a ring, a bar and a checkered block.
inline BinaryImage make_test_watermark(std::size_t width = 64, std::size_t height = 64)
{
    BinaryImage wm(width, height);
    const double cx = width / 2.0, cy = height / 2.0;
    const double r = std::min(width, height) * 0.38;
    for (std::size_t y = 0; y < height; ++y)
        for (std::size_t x = 0; x < width; ++x) {
            const double d = std::hypot(x + 0.5 - cx, y + 0.5 - cy);
            const bool ring = d > r - 4 && d < r;
            const bool bar = y > height * 0.45 && y < height * 0.55 && x > width * 0.2 && x < width * 0.8;
            const bool check = x < width / 4 && y < height / 4 && ((x / 4 + y / 4) % 2 == 0);
            wm.at(x, y) = (ring || bar || check) ? 1 : 0;
        }
    return wm;
}

inline GrayImage make_random_gray(std::size_t width, std::size_t height, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    GrayImage img(width, height);
    for (auto& p : img.pixels)
        p = static_cast<std::uint8_t>(rng() >> 56);
    return img;
}

inline BinaryImage make_random_binary(std::size_t width, std::size_t height, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    BinaryImage img(width, height);
    for (auto& b : img.bits)
        b = static_cast<std::uint8_t>(rng() >> 63);
    return img;
}

} // namespace cirng::imaging
