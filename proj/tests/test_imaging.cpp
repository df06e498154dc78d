#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include <gtest/gtest.h>

#include <cirng/imaging/attacks.hpp>
#include <cirng/imaging/netpbm.hpp>
#include <cirng/imaging/synthetic.hpp>

using namespace cirng::imaging;

namespace {

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / ("cirng_test_" + name)).string();
}

// Mean first, then squared deviations of the difference; no shared code with psnr().
double two_pass_psnr(const GrayImage& a, const GrayImage& b)
{
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = static_cast<double>(a.pixels[i]) - b.pixels[i];
    double mean = 0.0;
    for (double v : d)
        mean += v;
    mean /= d.size();
    double var = 0.0;
    for (double v : d)
        var += (v - mean) * (v - mean);
    var /= d.size();
    const double mse = var + mean * mean;
    return 20.0 * std::log10(255.0) - 10.0 * std::log10(mse);
}

bool in_range_and_same_shape(const GrayImage& a, const GrayImage& b)
{
    return a.width == b.width && a.height == b.height && a.pixels.size() == b.pixels.size();
}

} // namespace

TEST(Netpbm, SmallPgmRoundTrip)
{
    GrayImage img(2, 2);
    img.pixels = {0, 128, 255, 7};
    EXPECT_EQ(decode_pgm(encode_pgm(img)), img);
}

TEST(Netpbm, HeaderCommentsAndWhitespace)
{
    const std::string data = std::string("P5 # comment\n 3\t# w\n2\r\n255\n") + std::string("abcdef");
    const auto img = decode_pgm(data);
    EXPECT_EQ(img.width, 3u);
    EXPECT_EQ(img.height, 2u);
    EXPECT_EQ(img.at(2, 1), 'f');
}

TEST(Netpbm, Errors)
{
    EXPECT_THROW(decode_pgm("P5\n256 256\n255\n" + std::string(100, 'x')), NetpbmError);
    EXPECT_THROW(decode_pgm("P5\n2 2\n65535\n" + std::string(8, 'x')), NetpbmError);
    EXPECT_THROW(decode_pgm("P2\n2 2\n255\n0 0 0 0"), NetpbmError);
    EXPECT_THROW(decode_pgm("P5\nx 2\n255\n"), NetpbmError);
    EXPECT_THROW(decode_pbm("P4\n9 2\n" + std::string(3, 'x')), NetpbmError);
    try {
        decode_pgm("P5\n4 4\n255\n" + std::string(3, 'x'));
        FAIL();
    } catch (const NetpbmError& e) {
        EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
    }
}

TEST(Netpbm, PbmRowsArePaddedAndMsbFirst)
{
    BinaryImage img(9, 2);
    img.at(0, 0) = 1;
    img.at(8, 1) = 1;
    const std::string enc = encode_pbm(img);
    const std::string raster = enc.substr(enc.size() - 4);
    EXPECT_EQ(static_cast<unsigned char>(raster[0]), 0x80);
    EXPECT_EQ(static_cast<unsigned char>(raster[1]), 0x00);
    EXPECT_EQ(static_cast<unsigned char>(raster[3]), 0x80);
    EXPECT_EQ(decode_pbm(enc), img);
}

TEST(Netpbm, FileRoundTripOnHundredRandomImages)
{
    std::mt19937 rng(1);
    const auto pg = temp_path("rt.pgm"), pb = temp_path("rt.pbm");
    for (int i = 0; i < 100; ++i) {
        const std::size_t w = 1 + rng() % 70, h = 1 + rng() % 70;
        const auto g = make_random_gray(w, h, i);
        const auto b = make_random_binary(w, h, i);
        save_pgm(g, pg);
        save_pbm(b, pb);
        ASSERT_EQ(load_pgm(pg), g);
        ASSERT_EQ(load_pbm(pb), b);
    }
    std::filesystem::remove(pg);
    std::filesystem::remove(pb);
}

TEST(Psnr, Examples)
{
    const auto a = make_random_gray(64, 64, 5);
    EXPECT_TRUE(std::isinf(psnr(a, a)));
    GrayImage flat(16, 16, 100), plus(16, 16, 101);
    EXPECT_NEAR(psnr(flat, plus), 20 * std::log10(255.0), 1e-12);
    EXPECT_NEAR(psnr(flat, plus), 48.13, 0.01);
    const auto b = make_random_gray(64, 64, 6);
    EXPECT_NEAR(psnr(a, b), two_pass_psnr(a, b), 1e-9);
    EXPECT_THROW(psnr(a, GrayImage(63, 64)), std::invalid_argument);
}

TEST(Crop, Examples)
{
    const auto img = make_test_carrier();
    EXPECT_EQ(crop_attack(img, 0), img);
    EXPECT_EQ(crop_attack(img, 256), GrayImage(256, 256, 0));
    EXPECT_THROW(crop_attack(img, 257), std::invalid_argument);

    const auto c = crop_attack(img, 10);
    std::size_t changed = 0;
    for (std::size_t y = 0; y < 256; ++y)
        for (std::size_t x = 0; x < 256; ++x) {
            const bool inside = x >= 123 && x < 133 && y >= 123 && y < 133;
            if (inside)
                EXPECT_EQ(c.at(x, y), 0);
            else
                ASSERT_EQ(c.at(x, y), img.at(x, y));
            changed += c.at(x, y) != img.at(x, y);
        }
    EXPECT_LE(changed, 100u);
    EXPECT_EQ(crop_attack(c, 10), c);
}

TEST(Rotate, ZeroAngleIsIdentityAndConstantInteriorStaysConstant)
{
    const auto img = make_test_carrier();
    EXPECT_EQ(rotate_attack(img, 0.0), img);
    for (auto interp : {Interpolation::Nearest, Interpolation::Bilinear}) {
        const auto r = rotate_attack(GrayImage(128, 128, 90), 10.0, interp);
        for (std::size_t y = 32; y < 96; ++y)
            for (std::size_t x = 32; x < 96; ++x)
                ASSERT_EQ(r.at(x, y), 90);
    }
    EXPECT_THROW(rotate_attack(img, 90.0), std::invalid_argument);
}

TEST(Rotate, TwoDegreesChangesButStaysAbovePsnrFloor)
{
    const auto img = make_test_carrier();
    for (auto interp : {Interpolation::Nearest, Interpolation::Bilinear}) {
        const auto r = rotate_attack(img, 2.0, interp);
        double mad = 0.0;
        for (std::size_t i = 0; i < img.size(); ++i)
            mad += std::abs(int(img.pixels[i]) - int(r.pixels[i]));
        EXPECT_GT(mad / img.size(), 0.0);
        EXPECT_GE(psnr(img, r), 25.0);
        EXPECT_TRUE(in_range_and_same_shape(img, r));
    }
}

TEST(Jpeg, ConstantImageAndUnitSteps)
{
    EXPECT_EQ(jpeg_attack(GrayImage(32, 24, 77), 50), GrayImage(32, 24, 77));
    // Level 1 makes every step max(1, Q/100) = 1 except a few high-frequency
    // entries; on a smooth ramp the result is within one gray level.
    GrayImage ramp(16, 16);
    for (std::size_t y = 0; y < 16; ++y)
        for (std::size_t x = 0; x < 16; ++x)
            ramp.at(x, y) = static_cast<std::uint8_t>(100 + x + y);
    const auto j = jpeg_attack(ramp, 1);
    for (std::size_t i = 0; i < ramp.size(); ++i)
        ASSERT_LE(std::abs(int(j.pixels[i]) - int(ramp.pixels[i])), 1);
}

TEST(Jpeg, CoarserLevelsDegradeMore)
{
    const auto img = make_test_carrier();
    double prev = std::numeric_limits<double>::infinity();
    for (int level : {1, 10, 50, 100, 400}) {
        const double p = psnr(img, jpeg_attack(img, level));
        EXPECT_LT(p, prev) << "level " << level;
        prev = p;
    }
    // The reference table (level 100) sits in the usual visibly-lossy range.
    const double p100 = psnr(img, jpeg_attack(img, 100));
    EXPECT_GE(p100, 30.0);
    EXPECT_LE(p100, 40.0);
}

TEST(Jpeg, RequantizationIsStable)
{
    const auto img = make_test_carrier();
    for (int level : {10, 50, 100, 200}) {
        const auto once = jpeg_attack(img, level);
        const auto twice = jpeg_attack(once, level);
        int worst = 0;
        for (std::size_t i = 0; i < img.size(); ++i)
            worst = std::max(worst, std::abs(int(once.pixels[i]) - int(twice.pixels[i])));
        EXPECT_LE(worst, 2) << "level " << level;
    }
}

TEST(Jpeg, PadsNonMultipleOfEight)
{
    const auto img = make_random_gray(13, 9, 2);
    const auto j = jpeg_attack(img, 20);
    EXPECT_TRUE(in_range_and_same_shape(img, j));
}

TEST(Noise, MomentsOnMidGray)
{
    const GrayImage mid(1000, 1000, 128);
    const auto n = gaussian_noise_attack(mid, 1.0, 17);
    double mean = 0.0, sq = 0.0;
    for (auto p : n.pixels) {
        const double d = double(p) - 128.0;
        mean += d;
        sq += d * d;
    }
    mean /= n.size();
    const double sd = std::sqrt(sq / n.size() - mean * mean);
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(sd, 1.0, 0.05);
}

TEST(Noise, DeterministicPerSeedAndClamped)
{
    const auto img = make_test_carrier();
    EXPECT_EQ(gaussian_noise_attack(img, 3.0, 1), gaussian_noise_attack(img, 3.0, 1));
    EXPECT_NE(gaussian_noise_attack(img, 3.0, 1), gaussian_noise_attack(img, 3.0, 2));
    const auto white = gaussian_noise_attack(GrayImage(64, 64, 255), 5.0, 3);
    std::size_t below = 0;
    for (auto p : white.pixels)
        below += p < 255;
    EXPECT_GT(below, 0u);
    EXPECT_THROW(gaussian_noise_attack(img, 0.0, 1), std::invalid_argument);
}

TEST(AttackSpec, ValidationAndDispatch)
{
    const GrayImage img(64, 64, 10);
    EXPECT_THROW(apply_attack(img, {AttackKind::Crop, 65}), std::invalid_argument);
    EXPECT_THROW(apply_attack(img, {AttackKind::Crop, 2.5}), std::invalid_argument);
    EXPECT_THROW(apply_attack(img, {AttackKind::Rotate, 0}), std::invalid_argument);
    EXPECT_THROW(apply_attack(img, {AttackKind::Jpeg, 0}), std::invalid_argument);
    EXPECT_THROW(apply_attack(img, {AttackKind::Noise, -1}), std::invalid_argument);
    EXPECT_EQ(apply_attack(img, {AttackKind::Crop, 64}), GrayImage(64, 64, 0));
    EXPECT_EQ(parse_attack_kind("jpeg"), AttackKind::Jpeg);
    EXPECT_THROW(parse_attack_kind("blur"), std::invalid_argument);
    const auto j = AttackSpec{AttackKind::Noise, 3, 42}.to_json();
    EXPECT_EQ(j["kind"], "noise");
    EXPECT_EQ(j["noise_seed"], 42);
}

TEST(Synthetic, DeterministicAndVaried)
{
    const auto a = make_test_carrier();
    EXPECT_EQ(a, make_test_carrier());
    EXPECT_NE(a, make_test_carrier(256, 256, 2));
    int lo = 255, hi = 0;
    for (auto p : a.pixels) {
        lo = std::min<int>(lo, p);
        hi = std::max<int>(hi, p);
    }
    EXPECT_GT(hi - lo, 100);
    const auto w = make_test_watermark();
    std::size_t ones = 0;
    for (auto b : w.bits)
        ones += b;
    EXPECT_GT(ones, 200u);
    EXPECT_LT(ones, 4096u - 200u);
}
