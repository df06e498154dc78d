#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "image.hpp"
#include "random.hpp"

namespace cirng::imaging {

// Zeroes the side x side square centred in the image.
inline GrayImage crop_attack(GrayImage img, std::size_t side)
{
    if (side > std::min(img.width, img.height))
        throw std::invalid_argument("crop_attack: side " + std::to_string(side) + " exceeds image size");
    const std::size_t x0 = (img.width - side) / 2;
    const std::size_t y0 = (img.height - side) / 2;
    for (std::size_t y = y0; y < y0 + side; ++y)
        for (std::size_t x = x0; x < x0 + side; ++x)
            img.at(x, y) = 0;
    return img;
}

enum class Interpolation { Nearest, Bilinear };

namespace detail {

inline std::uint8_t clamp_round(double v)
{
    return static_cast<std::uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

// Rotation by `theta` radians about (w/2, h/2): out(q) = in(r_{-theta} q).
// Samples outside the frame read as 0.
inline std::vector<double> rotate_samples(const std::vector<double>& in, std::size_t w, std::size_t h,
                                          double theta, Interpolation interp)
{
    const double cx = static_cast<double>(w) / 2.0;
    const double cy = static_cast<double>(h) / 2.0;
    const double c = std::cos(theta), s = std::sin(theta);
    auto pixel = [&](long x, long y) -> double {
        if (x < 0 || y < 0 || x >= static_cast<long>(w) || y >= static_cast<long>(h))
            return 0.0;
        return in[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)];
    };
    std::vector<double> out(w * h, 0.0);
    for (std::size_t qy = 0; qy < h; ++qy) {
        for (std::size_t qx = 0; qx < w; ++qx) {
            const double dx = static_cast<double>(qx) - cx;
            const double dy = static_cast<double>(qy) - cy;
            const double sx = c * dx + s * dy + cx;
            const double sy = -s * dx + c * dy + cy;
            double v;
            if (interp == Interpolation::Nearest) {
                v = pixel(std::lround(sx), std::lround(sy));
            } else {
                const double fx = std::floor(sx), fy = std::floor(sy);
                const double ax = sx - fx, ay = sy - fy;
                const long x0 = static_cast<long>(fx), y0 = static_cast<long>(fy);
                v = (1 - ax) * (1 - ay) * pixel(x0, y0) + ax * (1 - ay) * pixel(x0 + 1, y0) +
                    (1 - ax) * ay * pixel(x0, y0 + 1) + ax * ay * pixel(x0 + 1, y0 + 1);
            }
            out[qy * w + qx] = v;
        }
    }
    return out;
}

} // namespace detail

// r_{-theta} o r_theta about the image centre; the intermediate image is kept
// at full precision and only the final result is rounded.
inline GrayImage rotate_attack(const GrayImage& img, double theta_degrees,
                               Interpolation interp = Interpolation::Nearest)
{
    if (!(theta_degrees > -90.0 && theta_degrees < 90.0))
        throw std::invalid_argument("rotate_attack: angle must lie in (-90, 90) degrees");
    const double theta = theta_degrees * std::numbers::pi / 180.0;
    std::vector<double> v(img.pixels.begin(), img.pixels.end());
    v = detail::rotate_samples(v, img.width, img.height, theta, interp);
    v = detail::rotate_samples(v, img.width, img.height, -theta, interp);
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < v.size(); ++i)
        out.pixels[i] = detail::clamp_round(v[i]);
    return out;
}

// Standard JPEG luminance quantization table (quality 50), row-major in (v, u).
inline constexpr std::array<int, 64> kLuminanceQuant = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

// Level at which the quantization steps equal the standard table; level is
// a percentage of that table.
inline constexpr double kJpegReferenceLevel = 100.0;

// Blockwise 8x8 DCT quantization. The step for coefficient (u, v) is
// Q[u, v] * level / kJpegReferenceLevel (at least 1). Dimensions that are
// not multiples of 8 are padded by edge replication.
inline GrayImage jpeg_attack(const GrayImage& img, int level)
{
    if (level < 1)
        throw std::invalid_argument("jpeg_attack: level must be >= 1");
    static const std::array<double, 64> basis = [] {
        std::array<double, 64> b{};
        for (int k = 0; k < 8; ++k)
            for (int x = 0; x < 8; ++x)
                b[k * 8 + x] = (k == 0 ? std::sqrt(0.125) : 0.5) *
                               std::cos((2 * x + 1) * k * std::numbers::pi / 16.0);
        return b;
    }();
    std::array<double, 64> step{};
    for (int i = 0; i < 64; ++i)
        step[i] = std::max(1.0, kLuminanceQuant[i] * level / kJpegReferenceLevel);

    GrayImage out = img;
    std::array<double, 64> block{}, tmp{}, coef{};
    for (std::size_t by = 0; by < img.height; by += 8) {
        for (std::size_t bx = 0; bx < img.width; bx += 8) {
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    const std::size_t sx = std::min(bx + x, img.width - 1);
                    const std::size_t sy = std::min(by + y, img.height - 1);
                    block[y * 8 + x] = img.at(sx, sy) - 128.0;
                }
            // Separable forward transform: rows then columns.
            for (int y = 0; y < 8; ++y)
                for (int u = 0; u < 8; ++u) {
                    double s = 0;
                    for (int x = 0; x < 8; ++x)
                        s += basis[u * 8 + x] * block[y * 8 + x];
                    tmp[y * 8 + u] = s;
                }
            for (int v = 0; v < 8; ++v)
                for (int u = 0; u < 8; ++u) {
                    double s = 0;
                    for (int y = 0; y < 8; ++y)
                        s += basis[v * 8 + y] * tmp[y * 8 + u];
                    coef[v * 8 + u] = std::round(s / step[v * 8 + u]) * step[v * 8 + u];
                }
            for (int y = 0; y < 8; ++y)
                for (int u = 0; u < 8; ++u) {
                    double s = 0;
                    for (int v = 0; v < 8; ++v)
                        s += basis[v * 8 + y] * coef[v * 8 + u];
                    tmp[y * 8 + u] = s;
                }
            for (int y = 0; y < 8; ++y)
                for (int x = 0; x < 8; ++x) {
                    double s = 0;
                    for (int u = 0; u < 8; ++u)
                        s += basis[u * 8 + x] * tmp[y * 8 + u];
                    if (bx + x < img.width && by + y < img.height)
                        out.at(bx + x, by + y) = detail::clamp_round(s + 128.0);
                }
        }
    }
    return out;
}

// Adds N(0, sigma^2) to each pixel, rounds half away from zero and clamps.
// Deterministic in `seed`.
inline GrayImage gaussian_noise_attack(GrayImage img, double sigma, std::uint64_t seed)
{
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_noise_attack: sigma must be positive");
    GaussianSource normal(seed);
    for (auto& p : img.pixels)
        p = detail::clamp_round(p + sigma * normal());
    return img;
}

enum class AttackKind { Crop, Rotate, Jpeg, Noise };

inline const char* to_string(AttackKind k)
{
    switch (k) {
    case AttackKind::Crop: return "crop";
    case AttackKind::Rotate: return "rotate";
    case AttackKind::Jpeg: return "jpeg";
    case AttackKind::Noise: return "noise";
    }
    return "?";
}

inline AttackKind parse_attack_kind(const std::string& s)
{
    if (s == "crop") return AttackKind::Crop;
    if (s == "rotate") return AttackKind::Rotate;
    if (s == "jpeg") return AttackKind::Jpeg;
    if (s == "noise") return AttackKind::Noise;
    throw std::invalid_argument("unknown attack kind '" + s + "'");
}

struct AttackSpec
{
    AttackKind kind = AttackKind::Crop;
    double parameter = 0.0;          // crop side | angle (deg) | level | sigma
    std::uint64_t noise_seed = 0;
    Interpolation interpolation = Interpolation::Nearest;

    // Throws std::invalid_argument when the parameter is outside its range.
    void validate(const GrayImage& img) const
    {
        switch (kind) {
        case AttackKind::Crop:
            if (parameter < 0 || parameter != std::floor(parameter) ||
                parameter > static_cast<double>(std::min(img.width, img.height)))
                throw std::invalid_argument("crop side must be an integer in [0, min(width, height)]");
            break;
        case AttackKind::Rotate:
            if (!(parameter > 0.0 && parameter < 90.0))
                throw std::invalid_argument("rotation angle must lie in (0, 90) degrees");
            break;
        case AttackKind::Jpeg:
            if (parameter < 1 || parameter != std::floor(parameter))
                throw std::invalid_argument("jpeg level must be an integer >= 1");
            break;
        case AttackKind::Noise:
            if (!(parameter > 0.0))
                throw std::invalid_argument("noise standard deviation must be positive");
            break;
        }
    }

    nlohmann::ordered_json to_json() const
    {
        nlohmann::ordered_json j;
        j["kind"] = to_string(kind);
        j["parameter"] = parameter;
        if (kind == AttackKind::Noise)
            j["noise_seed"] = noise_seed;
        if (kind == AttackKind::Rotate)
            j["interpolation"] = interpolation == Interpolation::Nearest ? "nearest" : "bilinear";
        return j;
    }
};

inline GrayImage apply_attack(const GrayImage& img, const AttackSpec& spec)
{
    spec.validate(img);
    switch (spec.kind) {
    case AttackKind::Crop: return crop_attack(img, static_cast<std::size_t>(spec.parameter));
    case AttackKind::Rotate: return rotate_attack(img, spec.parameter, spec.interpolation);
    case AttackKind::Jpeg: return jpeg_attack(img, static_cast<int>(spec.parameter));
    case AttackKind::Noise: return gaussian_noise_attack(img, spec.parameter, spec.noise_seed);
    }
    throw std::invalid_argument("apply_attack: unknown attack");
}

} // namespace cirng::imaging
