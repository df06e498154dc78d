#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cirng/chaotic.hpp>
#include <cirng/stats/battery.hpp>

using namespace cirng;
using namespace cirng::stats;

namespace {

// Row-reduction over a dense 0/1 table; independent of the bitmask kernel.
std::size_t dense_rank(std::vector<std::vector<int>> a)
{
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = cols; c-- > 0 && r < rows;) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i)
            if (a[i][c])
                for (std::size_t j = 0; j < cols; ++j)
                    a[i][j] ^= a[r][j];
        ++r;
    }
    return r;
}

WordSource constant_source(std::uint32_t w, std::size_t n = 4'000'000)
{
    return WordSource::from_words(std::vector<std::uint32_t>(n, w), "constant");
}

WordSource mt_source(std::uint32_t seed)
{
    return WordSource::from_generator(std::mt19937(seed), "mt19937");
}

// Composite Simpson rule for the chi-square(10) density on [0, x].
double chi2_10_cdf_by_quadrature(double x)
{
    auto f = [](double t) { return std::pow(t, 4) * std::exp(-t / 2) / 768.0; };
    const int n = 20000;
    const double h = x / n;
    double s = f(0) + f(x);
    for (int i = 1; i < n; ++i)
        s += f(i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

} // namespace

TEST(Gf2Rank, Examples)
{
    std::vector<std::uint64_t> id(32);
    for (std::size_t i = 0; i < 32; ++i)
        id[i] = std::uint64_t{1} << i;
    EXPECT_EQ(gf2_rank(id, 32), 32u);
    EXPECT_EQ(gf2_rank(std::vector<std::uint64_t>(31, 0), 31), 0u);
    EXPECT_EQ(gf2_rank(std::vector<std::uint64_t>(32, 0xFFFFFFFFu), 32), 1u);
}

TEST(Gf2Rank, AgreesWithDenseEliminationOnRandom8x8)
{
    std::mt19937_64 rng(42);
    for (int t = 0; t < 10'000; ++t) {
        std::vector<std::uint64_t> rows(8);
        std::vector<std::vector<int>> dense(8, std::vector<int>(8));
        for (std::size_t i = 0; i < 8; ++i) {
            rows[i] = rng() & 0xFF;
            for (std::size_t j = 0; j < 8; ++j)
                dense[i][j] = (rows[i] >> j) & 1;
        }
        ASSERT_EQ(gf2_rank(rows, 8), dense_rank(dense)) << "trial " << t;
    }
}

TEST(Gf2Rank, InvariantUnderRowPermutationAndRowAddition)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 2000; ++t) {
        const std::size_t rows_n = 1 + rng() % 12, cols = 1 + rng() % 12;
        std::vector<std::uint64_t> rows(rows_n);
        for (auto& r : rows)
            r = rng() & ((std::uint64_t{1} << cols) - 1) & (t % 3 ? ~0ull : rng());
        const auto rank = gf2_rank(rows, cols);
        ASSERT_LE(rank, std::min(rows_n, cols));
        auto perm = rows;
        std::shuffle(perm.begin(), perm.end(), rng);
        ASSERT_EQ(gf2_rank(perm, cols), rank);
        if (rows_n > 1) {
            auto added = rows;
            added[0] ^= added[1];
            ASSERT_EQ(gf2_rank(added, cols), rank);
        }
    }
}

TEST(RankDistribution, SmallCases)
{
    EXPECT_DOUBLE_EQ(rank_distribution(1, 1), 0.5);
    EXPECT_DOUBLE_EQ(rank_distribution(1, 0), 0.5);
    EXPECT_EQ(rank_distribution(4, 5), 0.0);
}

TEST(RankDistribution, NormalizedForAllSizes)
{
    for (std::size_t n = 1; n <= 32; ++n) {
        double s = 0.0;
        for (std::size_t r = 0; r <= n; ++r)
            s += rank_distribution(n, r);
        EXPECT_NEAR(s, 1.0, 1e-12) << "n=" << n;
    }
    double s68 = 0.0;
    for (std::size_t r = 0; r <= 6; ++r)
        s68 += rank_probability(6, 8, r);
    EXPECT_NEAR(s68, 1.0, 1e-12);
}

TEST(RankDistribution, FullRank32MatchesMonteCarlo)
{
    std::mt19937_64 rng(2024);
    const int trials = 1'000'000;
    int full = 0;
    std::vector<std::uint64_t> rows(32);
    for (int t = 0; t < trials; ++t) {
        for (auto& r : rows)
            r = rng() & 0xFFFFFFFFu;
        full += gf2_rank(rows, 32) == 32;
    }
    const double p = rank_distribution(32, 32);
    const double sigma = std::sqrt(p * (1 - p) / trials);
    EXPECT_NEAR(static_cast<double>(full) / trials, p, 3 * sigma);
}

TEST(ChiSquare, ClosedFormsAndQuadrature)
{
    EXPECT_EQ(chi_square_pvalue(0.0, 7), 1.0);
    EXPECT_NEAR(chi_square_pvalue(2 * std::log(2.0), 2), 0.5, 1e-12);
    const double oracle = 1.0 - chi2_10_cdf_by_quadrature(18.307);
    EXPECT_NEAR(oracle, 0.05, 0.001);
    EXPECT_NEAR(chi_square_pvalue(18.307, 10), oracle, 1e-8);
}

TEST(ChiSquare, MonotoneDecreasingOnGrid)
{
    for (unsigned dof : {1u, 2u, 5u, 30u, 2500u}) {
        double prev = 1.0;
        for (double x = 0.0; x < 4.0 * dof + 50; x += 0.25 + dof / 50.0) {
            const double p = chi_square_pvalue(x, dof);
            ASSERT_GE(p, 0.0);
            ASSERT_LE(p, prev + 1e-15);
            prev = p;
        }
    }
    EXPECT_THROW(chi_square_pvalue(1.0, 0), std::invalid_argument);
    EXPECT_THROW(chi_square_pvalue(-1.0, 3), std::invalid_argument);
}

TEST(KsUniformity, Examples)
{
    std::vector<double> even(200);
    for (std::size_t i = 0; i < even.size(); ++i)
        even[i] = (i + 1.0) / (even.size() + 1.0);
    const double pe = ks_uniformity(even);
    EXPECT_GT(pe, 0.99);
    EXPECT_LE(pe, 1.0);

    EXPECT_LT(ks_uniformity(std::vector<double>(200, 0.3)), 1e-10);

    std::mt19937 rng(11);
    std::vector<double> u(10'000);
    for (auto& v : u)
        v = rng() * 0x1p-32;
    const double pu = ks_uniformity(u);
    EXPECT_GE(pu, 0.001);
    EXPECT_LE(pu, 0.999);
    EXPECT_THROW(ks_uniformity(std::vector<double>{1.5}), std::invalid_argument);
}

TEST(KsUniformity, KolmogorovTailContinuousAcrossBranches)
{
    EXPECT_NEAR(kolmogorov_upper_tail(1.18 - 1e-9), kolmogorov_upper_tail(1.18 + 1e-9), 1e-7);
    EXPECT_NEAR(kolmogorov_upper_tail(1.3581), 0.05, 1e-4);
    EXPECT_EQ(kolmogorov_upper_tail(0.0), 1.0);
}

TEST(Verdict, Threshold)
{
    EXPECT_EQ(verdict(std::vector<double>{0.5}), Verdict::Pass);
    EXPECT_EQ(verdict(std::vector<double>{0.99995}), Verdict::Fail);
    EXPECT_EQ(verdict(std::vector<double>{0.00005}), Verdict::Fail);
    EXPECT_EQ(verdict(std::vector<double>{0.3, 0.99995}), Verdict::Fail);
    EXPECT_EQ(verdict(std::vector<double>{0.005}, 0.01), Verdict::Fail);
}

TEST(Birthday, LambdaAndSpacings)
{
    EXPECT_DOUBLE_EQ(birthday_lambda(512, 24), 2.0);
    // Sorted days 1 3 5 10 -> spacings 1 2 2 5 -> one repeat.
    EXPECT_EQ(repeated_spacings({10, 3, 1, 5}), 1u);
}

TEST(CountOnes, Letters)
{
    EXPECT_EQ(ones_letter(0x00), 0);
    EXPECT_EQ(ones_letter(0x07), 1);
    EXPECT_EQ(ones_letter(0x0F), 2);
    EXPECT_EQ(ones_letter(0x1F), 3);
    EXPECT_EQ(ones_letter(0xFF), 4);
    double total = 0.0;
    std::array<double, 5> counts{};
    for (int b = 0; b < 256; ++b)
        counts[ones_letter(static_cast<std::uint8_t>(b))] += 1.0 / 256;
    for (int i = 0; i < 5; ++i) {
        EXPECT_DOUBLE_EQ(counts[i], kLetterProbs[i]);
        total += kLetterProbs[i];
    }
    EXPECT_DOUBLE_EQ(total, 1.0);
}

TEST(DegenerateStreams, Fail)
{
    auto ones = constant_source(0xFFFFFFFFu);
    EXPECT_EQ(binary_rank_square_test(ones, 32, 1000).verdict, Verdict::Fail);
    auto ones31 = constant_source(0xFFFFFFFFu);
    EXPECT_EQ(binary_rank_square_test(ones31, 31, 1000).verdict, Verdict::Fail);
    auto zeros = constant_source(0);
    EXPECT_EQ(count_the_ones_test(zeros, OnesVariant::Stream, 20'000, 1).verdict, Verdict::Fail);
    auto c = constant_source(0x12345678u);
    EXPECT_EQ(birthday_spacings_test(c, 512, 24, 50).verdict, Verdict::Fail);
    auto c2 = constant_source(0x80000000u);
    EXPECT_EQ(overlapping_sums_test(c2, 5).verdict, Verdict::Fail);

    std::vector<std::uint32_t> inc(200'000);
    for (std::size_t i = 0; i < inc.size(); ++i)
        inc[i] = static_cast<std::uint32_t>(i * 20'000u);
    auto up = WordSource::from_words(inc, "increasing");
    EXPECT_EQ(runs_test(up, 10'000, 4).verdict, Verdict::Fail);
}

TEST(ReferenceStream, PassesEachTest)
{
    auto s1 = mt_source(1);
    EXPECT_EQ(binary_rank_square_test(s1, 32, 20'000).verdict, Verdict::Pass);
    auto s2 = mt_source(2);
    EXPECT_EQ(binary_rank_square_test(s2, 31, 20'000).verdict, Verdict::Pass);
    auto s3 = mt_source(3);
    EXPECT_EQ(binary_rank_6x8_test(s3, 5'000).verdict, Verdict::Pass);
    auto s4 = mt_source(4);
    EXPECT_EQ(count_the_ones_test(s4, OnesVariant::Stream, 256'000, 2).verdict, Verdict::Pass);
    auto s5 = mt_source(5);
    EXPECT_EQ(runs_test(s5, 10'000, 10).verdict, Verdict::Pass);
    auto s6 = mt_source(6);
    EXPECT_EQ(birthday_spacings_test(s6, 512, 24, 100).verdict, Verdict::Pass);
    auto s7 = mt_source(7);
    EXPECT_EQ(overlapping_sums_test(s7, 5).verdict, Verdict::Pass);
}

TEST(TestResult, PValuesInUnitIntervalAndRunsReportsTwo)
{
    auto s = mt_source(9);
    const auto r = runs_test(s, 10'000, 5);
    ASSERT_EQ(r.p_values.size(), 2u);
    for (double p : r.p_values) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
    EXPECT_EQ(r.samples, 50'000u);
}

TEST(WordSource, InsufficientDataIsAResultNotAVerdict)
{
    auto s = WordSource::from_bytes(std::vector<std::uint8_t>(400, 0xAB), "short file");
    const auto r = binary_rank_square_test(s, 32, 1000);
    EXPECT_EQ(r.verdict, Verdict::InsufficientData);
    EXPECT_TRUE(r.p_values.empty());
    EXPECT_NE(r.message.find("Binary Rank"), std::string::npos);
}

TEST(WordSource, BytesAreBigEndianWords)
{
    auto s = WordSource::from_bytes({0x01, 0x02, 0x03, 0x04, 0xFF}, "x");
    EXPECT_EQ(s.remaining(), 1u);
    EXPECT_EQ(s.next(), 0x01020304u);
    EXPECT_THROW(s.next(), InsufficientData);
}

TEST(Battery, OneResultPerEnabledTestAndDeterministic)
{
    BatteryConfig cfg;
    cfg.scale = 0.02;
    std::vector<std::uint8_t> bytes(4 * cfg.words_required());
    std::mt19937 rng(5);
    for (auto& b : bytes)
        b = static_cast<std::uint8_t>(rng());

    auto a = WordSource::from_bytes(bytes, "file");
    auto b = WordSource::from_bytes(bytes, "file");
    const auto ra = run_battery(a, cfg);
    const auto rb = run_battery(b, cfg);
    EXPECT_EQ(ra.results.size(), cfg.enabled.size());
    EXPECT_EQ(a.consumed(), cfg.words_required());
    EXPECT_FALSE(ra.any_insufficient());

    std::ostringstream ta, tb, ca, cb;
    render_table(ta, ra);
    render_table(tb, rb);
    render_csv(ca, ra);
    render_csv(cb, rb);
    EXPECT_EQ(ta.str(), tb.str());
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(report_to_json(ra).dump(), report_to_json(rb).dump());
    EXPECT_EQ(ca.str().rfind("test,name,p_value,verdict,samples\n", 0), 0u);
    EXPECT_NE(ta.str().find("Number of tests passed:"), std::string::npos);
}

TEST(Battery, ConstantZeroFileFailsOrIsDegenerate)
{
    BatteryConfig cfg;
    cfg.scale = 0.02;
    auto z = WordSource::from_bytes(std::vector<std::uint8_t>(4 * cfg.words_required(), 0), "zeros");
    const auto r = run_battery(z, cfg);
    for (const auto& t : r.results)
        EXPECT_NE(t.verdict, Verdict::Pass) << t.name;
}

TEST(Battery, ShortFileReportsInsufficientData)
{
    BatteryConfig cfg;
    cfg.scale = 0.02;
    auto s = WordSource::from_bytes(std::vector<std::uint8_t>(4000, 7), "tiny");
    const auto r = run_battery(s, cfg);
    EXPECT_TRUE(r.any_insufficient());
    EXPECT_EQ(r.results.size(), cfg.enabled.size());
}
