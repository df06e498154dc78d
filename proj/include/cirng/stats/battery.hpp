#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tests.hpp"

namespace cirng::stats {

enum class BatteryTest {
    OverlappingSums,
    Runs,
    BirthdaySpacings,
    CountOnesStream,
    BinaryRank6x8,
    BinaryRank31,
    BinaryRank32,
    CountOnesBytes,
};

inline const std::vector<BatteryTest>& all_battery_tests()
{
    static const std::vector<BatteryTest> all = {
        BatteryTest::OverlappingSums, BatteryTest::Runs,          BatteryTest::BirthdaySpacings,
        BatteryTest::CountOnesStream, BatteryTest::BinaryRank6x8, BatteryTest::BinaryRank31,
        BatteryTest::BinaryRank32,    BatteryTest::CountOnesBytes};
    return all;
}

// Row number of the test in the classic DieHARD listing.
inline int diehard_number(BatteryTest t)
{
    switch (t) {
    case BatteryTest::OverlappingSums: return 1;
    case BatteryTest::Runs: return 2;
    case BatteryTest::BirthdaySpacings: return 5;
    case BatteryTest::CountOnesStream: return 6;
    case BatteryTest::BinaryRank6x8: return 7;
    case BatteryTest::BinaryRank31: return 8;
    case BatteryTest::BinaryRank32: return 9;
    case BatteryTest::CountOnesBytes: return 10;
    }
    return 0;
}

// Sample counts are the canonical DieHARD counts multiplied by `scale`
// (structural sizes such as 100-term sums or 512 birthdays stay fixed).
struct BatteryConfig
{
    double epsilon = kDefaultEpsilon;
    double scale = 0.25;
    std::vector<BatteryTest> enabled = all_battery_tests();

    std::size_t scaled(double canonical, std::size_t minimum = 1) const
    {
        return std::max<std::size_t>(minimum, static_cast<std::size_t>(std::llround(canonical * scale)));
    }

    std::size_t osum_repetitions() const { return scaled(10, 2); }
    std::size_t runs_length() const { return 10000; }
    std::size_t runs_repetitions() const { return scaled(20, 2); }
    std::size_t birthday_samples() const { return scaled(500, 20); }
    std::size_t ones_stream_letters() const { return scaled(2'560'000, 1000); }
    std::size_t ones_stream_repetitions() const { return 2; }
    std::size_t ones_bytes_letters() const { return scaled(256'000, 1000); }
    std::size_t rank6x8_matrices() const { return scaled(100'000, 100); }
    std::size_t rank_square_matrices() const { return scaled(40'000, 100); }

    // Words the enabled tests consume in total.
    std::size_t words_required() const;

    nlohmann::ordered_json to_json() const;
};

inline const std::vector<unsigned>& count_ones_byte_offsets()
{
    static const std::vector<unsigned> offsets = [] {
        std::vector<unsigned> v;
        for (unsigned o = 0; o <= 24; ++o)
            v.push_back(o);
        return v;
    }();
    return offsets;
}

inline TestResult run_battery_test(BatteryTest t, WordSource& src, const BatteryConfig& cfg)
{
    switch (t) {
    case BatteryTest::OverlappingSums:
        return overlapping_sums_test(src, cfg.osum_repetitions(), cfg.epsilon);
    case BatteryTest::Runs:
        return runs_test(src, cfg.runs_length(), cfg.runs_repetitions(), cfg.epsilon);
    case BatteryTest::BirthdaySpacings:
        return birthday_spacings_test(src, 512, 24, cfg.birthday_samples(), cfg.epsilon);
    case BatteryTest::CountOnesStream:
        return count_the_ones_test(src, OnesVariant::Stream, cfg.ones_stream_letters(),
                                   cfg.ones_stream_repetitions(), {}, cfg.epsilon);
    case BatteryTest::BinaryRank6x8:
        return binary_rank_6x8_test(src, cfg.rank6x8_matrices(), cfg.epsilon);
    case BatteryTest::BinaryRank31:
        return binary_rank_square_test(src, 31, cfg.rank_square_matrices(), cfg.epsilon);
    case BatteryTest::BinaryRank32:
        return binary_rank_square_test(src, 32, cfg.rank_square_matrices(), cfg.epsilon);
    case BatteryTest::CountOnesBytes:
        return count_the_ones_test(src, OnesVariant::SpecificByte, cfg.ones_bytes_letters(), 1,
                                   count_ones_byte_offsets(), cfg.epsilon);
    }
    throw std::invalid_argument("run_battery_test: unknown test");
}

inline std::size_t BatteryConfig::words_required() const
{
    std::size_t total = 0;
    for (BatteryTest t : enabled) {
        switch (t) {
        case BatteryTest::OverlappingSums: total += osum_repetitions() * 199; break;
        case BatteryTest::Runs: total += runs_length() * runs_repetitions(); break;
        case BatteryTest::BirthdaySpacings: total += 512 * birthday_samples() * 9; break;
        case BatteryTest::CountOnesStream:
            total += ones_stream_repetitions() * ((ones_stream_letters() + 3) / 4);
            break;
        case BatteryTest::BinaryRank6x8: total += 6 * 25 * rank6x8_matrices(); break;
        case BatteryTest::BinaryRank31: total += 31 * rank_square_matrices(); break;
        case BatteryTest::BinaryRank32: total += 32 * rank_square_matrices(); break;
        case BatteryTest::CountOnesBytes:
            total += count_ones_byte_offsets().size() * ones_bytes_letters();
            break;
        }
    }
    return total;
}

struct TestReport
{
    std::vector<TestResult> results;
    std::vector<int> numbers;     // DieHARD row number per result
    std::string generator;
    std::string timestamp;
    nlohmann::ordered_json config;

    std::size_t passed() const
    {
        return static_cast<std::size_t>(std::count_if(results.begin(), results.end(), [](const auto& r) {
            return r.verdict == Verdict::Pass;
        }));
    }
    bool all_passed() const { return passed() == results.size(); }
    bool any_insufficient() const
    {
        return std::any_of(results.begin(), results.end(),
                           [](const auto& r) { return r.verdict == Verdict::InsufficientData; });
    }
};

// Runs the enabled tests in order, each on the next segment of the source.
inline TestReport run_battery(WordSource& src, const BatteryConfig& cfg, std::string timestamp = {})
{
    TestReport report;
    report.generator = src.description();
    report.timestamp = std::move(timestamp);
    report.config = cfg.to_json();
    for (BatteryTest t : cfg.enabled) {
        report.results.push_back(run_battery_test(t, src, cfg));
        report.numbers.push_back(diehard_number(t));
    }
    return report;
}

inline const char* battery_test_key(BatteryTest t)
{
    switch (t) {
    case BatteryTest::OverlappingSums: return "overlapping-sums";
    case BatteryTest::Runs: return "runs";
    case BatteryTest::BirthdaySpacings: return "birthday-spacings";
    case BatteryTest::CountOnesStream: return "count-ones-stream";
    case BatteryTest::BinaryRank6x8: return "rank-6x8";
    case BatteryTest::BinaryRank31: return "rank-31x31";
    case BatteryTest::BinaryRank32: return "rank-32x32";
    case BatteryTest::CountOnesBytes: return "count-ones-bytes";
    }
    return "?";
}

inline nlohmann::ordered_json BatteryConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["epsilon"] = epsilon;
    j["scale"] = scale;
    auto& tests = j["tests"] = nlohmann::ordered_json::array();
    for (BatteryTest t : enabled)
        tests.push_back(battery_test_key(t));
    return j;
}

namespace detail {

inline std::string format_p(double p)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", p);
    return buf;
}

} // namespace detail

inline void render_table(std::ostream& os, const TestReport& r)
{
    os << "# generator: " << r.generator << "\n";
    os << "# config: " << r.config.dump() << "\n";
    if (!r.timestamp.empty())
        os << "# timestamp: " << r.timestamp << "\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-20s %-28s %s\n", "No.", "Test name", "p-value(s)", "Result");
    os << line;
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& t = r.results[i];
        std::string ps;
        for (double p : t.p_values)
            ps += (ps.empty() ? "" : " ") + detail::format_p(p);
        if (t.p_values.size() > 3)
            ps = std::to_string(t.p_values.size()) + " values, min " +
                 detail::format_p(*std::min_element(t.p_values.begin(), t.p_values.end()));
        if (t.verdict == Verdict::InsufficientData)
            ps = "-";
        std::snprintf(line, sizeof line, "%-4d %-20s %-28s %s\n", r.numbers[i], t.name.c_str(),
                      ps.c_str(), to_string(t.verdict));
        os << line;
        if (!t.message.empty())
            os << "     " << t.message << "\n";
    }
    os << "Number of tests passed: " << r.passed() << "/" << r.results.size() << "\n";
}

inline void render_csv(std::ostream& os, const TestReport& r)
{
    os << "test,name,p_value,verdict,samples\n";
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& t = r.results[i];
        if (t.p_values.empty())
            os << r.numbers[i] << ',' << t.name << ",," << to_string(t.verdict) << ',' << t.samples << '\n';
        for (double p : t.p_values)
            os << r.numbers[i] << ',' << t.name << ',' << detail::format_p(p) << ','
               << to_string(t.verdict) << ',' << t.samples << '\n';
    }
}

inline nlohmann::ordered_json report_to_json(const TestReport& r)
{
    nlohmann::ordered_json j;
    j["generator"] = r.generator;
    j["timestamp"] = r.timestamp;
    j["config"] = r.config;
    auto& rows = j["results"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.results.size(); ++i) {
        const auto& t = r.results[i];
        nlohmann::ordered_json row;
        row["test"] = r.numbers[i];
        row["name"] = t.name;
        row["p_value"] = t.p_values;
        row["verdict"] = to_string(t.verdict);
        row["samples"] = t.samples;
        if (!t.message.empty())
            row["message"] = t.message;
        rows.push_back(std::move(row));
    }
    j["passed"] = r.passed();
    return j;
}

} // namespace cirng::stats
