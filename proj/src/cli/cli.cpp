#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cirng/cirng.hpp>

namespace cirng::cli {
namespace {

using nlohmann::ordered_json;

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::uint32_t parse_hex32(const std::string& text, const char* what)
{
    std::string_view s = text;
    if (s.starts_with("0x") || s.starts_with("0X"))
        s.remove_prefix(2);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, 16);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size() || v > 0xFFFFFFFFull)
        throw std::invalid_argument(std::string(what) + ": expected a 32-bit hex value, got '" + text + "'");
    return static_cast<std::uint32_t>(v);
}

std::string hex32(std::uint32_t v)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

std::string utc_timestamp()
{
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_binary(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes to `path`, or to `out` when the path is empty or "-".
void write_output(const std::string& path, const std::string& data, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot write " + path);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f)
        throw IoError("write failed: " + path);
}

imaging::GrayImage load_gray(const std::string& path)
{
    return imaging::decode_pgm(read_binary(path));
}

imaging::BinaryImage load_binary(const std::string& path)
{
    return imaging::decode_pbm(read_binary(path));
}

// Options shared by the generator-facing subcommands.
struct GeneratorOptions
{
    std::string seed1 = "1";
    std::string seed2 = "2";
    std::size_t n = 32;
    std::size_t c = 96;
    std::uint64_t x0 = 0;
    bool raw_xorshift = false;
    bool emit_seed_first = false;
    bool seed_from_time = false;

    void add_to(CLI::App* app)
    {
        app->add_option("--seed1", seed1, "hex seed of the length generator")->capture_default_str();
        app->add_option("--seed2", seed2, "hex seed of the strategy generator")->capture_default_str();
        app->add_option("--n", n, "number of cells")->capture_default_str()->check(CLI::Range(2, 1 << 20));
        app->add_option("--c", c, "minimum inner iterations per round")->capture_default_str()->check(
            CLI::PositiveNumber);
        app->add_option("--x0", x0, "initial state, rendered as an N-bit binary number")->capture_default_str();
        app->add_flag("--raw-xorshift", raw_xorshift, "use the plain XORshift generator seeded with --seed1");
        app->add_flag("--emit-seed-first", emit_seed_first, "emit the initial state before the first round");
        app->add_flag("--seed-from-time", seed_from_time, "take seeds and x0 from the clock and print them");
    }

    CiConfig resolve(std::ostream& err) const
    {
        CiConfig cfg{parse_hex32(seed1, "--seed1"), parse_hex32(seed2, "--seed2"), n, c, x0, emit_seed_first};
        if (seed_from_time) {
            const auto now = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::microseconds>(
                    std::chrono::system_clock::now().time_since_epoch())
                    .count());
            cfg.x0 = now;
            cfg.seed1 = static_cast<std::uint32_t>(now);
            cfg.seed2 = watermark::avalanche(static_cast<std::uint32_t>(now >> 20) ^ 0x5bd1e995u);
            err << "seed-from-time: --seed1 " << hex32(cfg.seed1) << " --seed2 " << hex32(cfg.seed2) << " --x0 "
                << cfg.x0 << "\n";
        }
        return cfg;
    }

    ordered_json to_json(const CiConfig& cfg) const
    {
        ordered_json j;
        j["generator"] = raw_xorshift ? "xorshift" : "ci";
        j["seed1"] = hex32(cfg.seed1);
        if (!raw_xorshift) {
            j["seed2"] = hex32(cfg.seed2);
            j["n"] = cfg.n_cells;
            j["c"] = cfg.c;
            j["x0"] = cfg.x0;
            j["emit_seed_first"] = cfg.emit_seed_first;
        }
        return j;
    }
};

std::string describe(const CiConfig& cfg, bool raw)
{
    if (raw)
        return "xorshift seed1=" + hex32(cfg.seed1);
    return "ci seed1=" + hex32(cfg.seed1) + " seed2=" + hex32(cfg.seed2) + " n=" + std::to_string(cfg.n_cells) +
           " c=" + std::to_string(cfg.c);
}

// ---------------------------------------------------------------------------
// gen

std::string example_trace()
{
    const std::vector<std::size_t> m = {4, 5, 4};
    const std::size_t s[] = {2, 4, 2, 2, 5, 1, 1, 5, 5, 3, 2, 3, 3};
    const BitVector x0 = seed_from_time(484084, 5);
    const auto trace = trace_rounds(x0, SequenceLengths(m), SequenceIndices::from_one_based(s), 3);
    ChaoticGenerator gen(x0, SequenceLengths(m), SequenceIndices::from_one_based(s), true);

    std::ostringstream os;
    os << "t = 484084, N = 5\n";
    os << "m =";
    for (auto v : trace.m_seq)
        os << ' ' << v;
    os << "\nS =";
    for (auto v : trace.s_seq)
        os << ' ' << v;
    os << "\n";
    std::size_t step = 0;
    for (std::size_t r = 0; r < trace.states.size(); ++r) {
        if (r > 0)
            step += trace.m_seq[r - 1];
        os << "x^" << step << " = " << trace.states[r].to_string() << "\n";
    }
    std::string bits;
    for (int i = 0; i < 20; ++i)
        bits += gen.next_bit() ? '1' : '0';
    os << "output = " << bits << "\n";
    return os.str();
}

struct GenCommand
{
    GeneratorOptions g;
    std::optional<std::size_t> bits, bytes;
    std::string out_path;
    bool example = false;

    void add_to(CLI::App* app)
    {
        g.add_to(app);
        auto* ob = app->add_option("--bits", bits, "emit this many bits as ASCII 0/1");
        auto* oB = app->add_option("--bytes", bytes, "emit this many raw bytes");
        ob->excludes(oB);
        app->add_option("--out", out_path, "output file (default stdout)");
        app->add_flag("--example-trace", example, "print the five-cell worked example");
    }

    int run(std::ostream& out, std::ostream& err)
    {
        if (example) {
            write_output(out_path, example_trace(), out);
            return kOk;
        }
        if (!bits && !bytes)
            throw std::invalid_argument("gen: one of --bits or --bytes is required");
        const CiConfig cfg = g.resolve(err);
        const std::size_t n_bits = bits ? *bits : 8 * *bytes;

        std::vector<std::uint8_t> stream(n_bits);
        if (g.raw_xorshift) {
            XorShift32 x = seed_xorshift(cfg.seed1);
            std::uint32_t w = 0;
            for (std::size_t i = 0; i < n_bits; ++i) {
                if (i % 32 == 0)
                    w = x();
                stream[i] = (w >> (31 - i % 32)) & 1u;
            }
        } else {
            auto gen = make_ci_generator(cfg);
            stream = gen.bits(n_bits);
        }

        std::string data;
        if (bits) {
            data.reserve(n_bits + 1);
            for (auto b : stream)
                data += b ? '1' : '0';
            if (n_bits > 0)
                data += '\n';
        } else {
            data.assign(*bytes, '\0');
            for (std::size_t i = 0; i < n_bits; ++i)
                data[i / 8] = static_cast<char>(static_cast<std::uint8_t>(data[i / 8]) | (stream[i] << (7 - i % 8)));
        }
        write_output(out_path, data, out);
        return kOk;
    }
};

// ---------------------------------------------------------------------------
// test

struct TestCommand
{
    GeneratorOptions g;
    std::string in_path, out_path, format = "table";
    double epsilon = stats::kDefaultEpsilon;
    double scale = 0.25;
    std::vector<std::string> only;

    void add_to(CLI::App* app)
    {
        g.add_to(app);
        app->add_option("--in", in_path, "test a file of raw bytes instead of a generator");
        app->add_option("--out", out_path, "report file (default stdout)");
        app->add_option("--format", format, "table, csv or json")
            ->capture_default_str()
            ->check(CLI::IsMember({"table", "csv", "json"}));
        app->add_option("--epsilon", epsilon, "two-sided p-value threshold")
            ->capture_default_str()
            ->check(CLI::Range(0.0, 0.5));
        app->add_option("--scale", scale, "fraction of the canonical sample sizes")
            ->capture_default_str()
            ->check(CLI::Range(0.001, 10.0));
        app->add_option("--tests", only, "subset of tests to run (e.g. rank-32x32 runs)");
    }

    int run(std::ostream& out, std::ostream& err)
    {
        stats::BatteryConfig bc;
        bc.epsilon = epsilon;
        bc.scale = scale;
        if (!only.empty()) {
            bc.enabled.clear();
            for (const auto& name : only) {
                bool found = false;
                for (auto t : stats::all_battery_tests())
                    if (name == stats::battery_test_key(t)) {
                        bc.enabled.push_back(t);
                        found = true;
                    }
                if (!found)
                    throw std::invalid_argument("unknown test '" + name + "'");
            }
        }

        ordered_json source;
        std::optional<stats::WordSource> src;
        if (!in_path.empty()) {
            const std::string data = read_binary(in_path);
            src = stats::WordSource::from_bytes(std::vector<std::uint8_t>(data.begin(), data.end()),
                                                "file " + in_path);
            source["file"] = in_path;
            source["bytes"] = data.size();
        } else {
            const CiConfig cfg = g.resolve(err);
            source = g.to_json(cfg);
            if (g.raw_xorshift)
                src = stats::WordSource::from_generator(seed_xorshift(cfg.seed1), describe(cfg, true));
            else
                src = stats::WordSource::from_generator(make_ci_generator(cfg), describe(cfg, false));
        }

        auto report = stats::run_battery(*src, bc, utc_timestamp());
        report.config["source"] = source;

        std::ostringstream os;
        if (format == "csv")
            stats::render_csv(os, report);
        else if (format == "json")
            os << stats::report_to_json(report).dump(2) << "\n";
        else
            stats::render_table(os, report);
        write_output(out_path, os.str(), out);

        if (report.any_insufficient()) {
            for (const auto& r : report.results)
                if (r.verdict == stats::Verdict::InsufficientData)
                    err << "insufficient data: " << r.name << (r.message.empty() ? "" : ": " + r.message) << "\n";
            return kInsufficientData;
        }
        return report.all_passed() ? kOk : kTestFailed;
    }
};

// ---------------------------------------------------------------------------
// watermarking

struct KeyOptions
{
    std::string seed1 = "1", seed2 = "2", mode = "unauth", mixing = "ci";
    std::size_t c = 0, rounds = 0, repeat = 1;

    void add_to(CLI::App* app)
    {
        app->add_option("--seed1", seed1, "hex key seed for the chunk lengths")->capture_default_str();
        app->add_option("--seed2", seed2, "hex key seed for the strategy")->capture_default_str();
        app->add_option("--mode", mode, "unauth or auth")
            ->capture_default_str()
            ->check(CLI::IsMember({"unauth", "auth"}));
        app->add_option("--c", c, "mixing iterations per round (0 = three times the watermark size)")
            ->capture_default_str();
        app->add_option("--rounds", rounds, "mixing rounds (0 = automatic)")->capture_default_str();
        app->add_option("--mixing", mixing, "ci or xor")->capture_default_str()->check(CLI::IsMember({"ci", "xor"}));
        app->add_option("--repeat", repeat, "embed the watermark this many times")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    }

    watermark::EmbeddingKey key() const
    {
        return {parse_hex32(seed1, "--seed1"), parse_hex32(seed2, "--seed2"),
                mode == "auth" ? watermark::Mode::Authenticated : watermark::Mode::Unauthenticated, c, rounds};
    }

    watermark::EmbedOptions options() const
    {
        watermark::EmbedOptions o;
        o.mixing = mixing == "xor" ? watermark::Mixing::Xor : watermark::Mixing::ChaoticIterations;
        o.repetitions = repeat;
        return o;
    }

    ordered_json to_json() const
    {
        const auto k = key();
        ordered_json j;
        j["seed1"] = hex32(k.seed1);
        j["seed2"] = hex32(k.seed2);
        j["mode"] = mode;
        j["c"] = c;
        j["rounds"] = rounds;
        j["mixing"] = mixing;
        j["repeat"] = repeat;
        return j;
    }
};

struct EmbedCommand
{
    KeyOptions k;
    std::string carrier, wm_path, out_path;

    void add_to(CLI::App* app)
    {
        k.add_to(app);
        app->add_option("--carrier", carrier, "carrier image (P5 PGM)")->required();
        app->add_option("--watermark", wm_path, "watermark image (P4 PBM)")->required();
        app->add_option("--out", out_path, "watermarked image (P5 PGM)")->required();
    }

    int run(std::ostream& out, std::ostream&)
    {
        const auto img = load_gray(carrier);
        const auto wm = load_binary(wm_path);
        const auto marked = watermark::embed(img, wm, k.key(), k.options());
        write_output(out_path, imaging::encode_pgm(marked), out);
        ordered_json j;
        j["command"] = "embed";
        j["key"] = k.to_json();
        j["carrier"] = carrier;
        j["watermark"] = wm_path;
        j["watermark_size"] = {wm.width, wm.height};
        j["psnr_db"] = imaging::psnr(img, marked);
        out << j.dump(2) << "\n";
        return kOk;
    }
};

struct ExtractCommand
{
    KeyOptions k;
    std::string in_path, out_path, reference;
    std::size_t width = 64, height = 64;

    void add_to(CLI::App* app)
    {
        k.add_to(app);
        app->add_option("--in", in_path, "watermarked image (P5 PGM)")->required();
        app->add_option("--out", out_path, "extracted watermark (P4 PBM)")->required();
        app->add_option("--wm-width", width, "watermark width")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--wm-height", height, "watermark height")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_option("--watermark", reference, "original watermark, for a similarity score");
    }

    int run(std::ostream& out, std::ostream&)
    {
        const auto img = load_gray(in_path);
        const auto wm = watermark::extract(img, k.key(), width, height, k.options());
        write_output(out_path, imaging::encode_pbm(wm), out);
        ordered_json j;
        j["command"] = "extract";
        j["key"] = k.to_json();
        j["input"] = in_path;
        j["watermark_size"] = {width, height};
        if (!reference.empty()) {
            const auto ref = load_binary(reference);
            j["similarity"] = watermark::similarity(ref, wm);
        }
        out << j.dump(2) << "\n";
        return kOk;
    }
};

struct AttackOptions
{
    std::string attack, interp = "nearest", noise_seed;
    double param = 0.0;

    imaging::AttackSpec spec() const
    {
        imaging::AttackSpec s;
        s.kind = imaging::parse_attack_kind(attack);
        s.parameter = param;
        s.interpolation = interp == "bilinear" ? imaging::Interpolation::Bilinear : imaging::Interpolation::Nearest;
        if (s.kind == imaging::AttackKind::Noise) {
            if (noise_seed.empty())
                throw std::invalid_argument("noise attacks require --noise-seed");
            s.noise_seed = parse_hex32(noise_seed, "--noise-seed");
        }
        return s;
    }
};

struct AttackCommand
{
    AttackOptions a;
    std::string in_path, out_path;

    void add_to(CLI::App* app)
    {
        app->add_option("--in", in_path, "input image (P5 PGM)")->required();
        app->add_option("--out", out_path, "attacked image (P5 PGM); a .json sidecar is written next to it")
            ->required();
        app->add_option("--attack", a.attack, "crop, rotate, jpeg or noise")
            ->required()
            ->check(CLI::IsMember({"crop", "rotate", "jpeg", "noise"}));
        app->add_option("--param", a.param, "crop side, angle in degrees, JPEG level or noise std. dev.")
            ->required();
        app->add_option("--noise-seed", a.noise_seed, "hex seed of the noise (required for noise)");
        app->add_option("--interp", a.interp, "rotation resampling: nearest or bilinear")
            ->capture_default_str()
            ->check(CLI::IsMember({"nearest", "bilinear"}));
    }

    int run(std::ostream& out, std::ostream&)
    {
        if (out_path == "-")
            throw std::invalid_argument("attack: --out must be a file path");
        const auto spec = a.spec();
        const auto img = load_gray(in_path);
        const auto attacked = imaging::apply_attack(img, spec);
        write_output(out_path, imaging::encode_pgm(attacked), out);
        ordered_json side;
        side["input"] = in_path;
        side["attack"] = spec.to_json();
        side["psnr_db"] = imaging::psnr(img, attacked);
        write_output(out_path + ".json", side.dump(2) + "\n", out);
        return kOk;
    }
};

struct BenchCommand
{
    KeyOptions k;
    std::string carrier, wm_path, out_path, format = "table", noise_seed, interp = "nearest";

    void add_to(CLI::App* app)
    {
        k.add_to(app);
        app->add_option("--carrier", carrier, "carrier image (default: built-in synthetic 256x256)");
        app->add_option("--watermark", wm_path, "watermark image (default: built-in 64x64 logo)");
        app->add_option("--out", out_path, "report file (default stdout)");
        app->add_option("--format", format, "table, csv or json")
            ->capture_default_str()
            ->check(CLI::IsMember({"table", "csv", "json"}));
        app->add_option("--noise-seed", noise_seed, "hex seed of the noise attacks")->required();
        app->add_option("--interp", interp, "rotation resampling: nearest or bilinear")
            ->capture_default_str()
            ->check(CLI::IsMember({"nearest", "bilinear"}));
    }

    int run(std::ostream& out, std::ostream&)
    {
        const auto img = carrier.empty() ? imaging::make_test_carrier() : load_gray(carrier);
        const auto wm = wm_path.empty() ? imaging::make_test_watermark() : load_binary(wm_path);
        auto grid = watermark::default_attack_grid(parse_hex32(noise_seed, "--noise-seed"));
        for (auto& a : grid)
            a.interpolation = interp == "bilinear" ? imaging::Interpolation::Bilinear : imaging::Interpolation::Nearest;
        const auto rows = watermark::robustness_sweep(img, wm, k.key(), k.options(), grid);

        ordered_json cfg;
        cfg["command"] = "bench";
        cfg["key"] = k.to_json();
        cfg["key"].erase("mode");
        cfg["carrier"] = carrier.empty() ? "synthetic" : carrier;
        cfg["watermark"] = wm_path.empty() ? "synthetic" : wm_path;
        cfg["noise_seed"] = hex32(parse_hex32(noise_seed, "--noise-seed"));
        cfg["interpolation"] = interp;

        std::string text;
        if (format == "json") {
            ordered_json j;
            j["config"] = cfg;
            j["rows"] = watermark::sweep_to_json(rows);
            text = j.dump(2) + "\n";
        } else if (format == "csv") {
            text = watermark::render_sweep_csv(rows);
        } else {
            text = "# config: " + cfg.dump() + "\n" + watermark::render_sweep_table(rows);
        }
        write_output(out_path, text, out);
        return kOk;
    }
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Chaotic-iterations generator, randomness battery and watermarking toolkit", "cirng"};
    app.require_subcommand(1);

    GenCommand gen;
    TestCommand test;
    EmbedCommand emb;
    ExtractCommand ext;
    AttackCommand att;
    BenchCommand bench;
    gen.add_to(app.add_subcommand("gen", "emit generator output"));
    test.add_to(app.add_subcommand("test", "run the statistical battery"));
    emb.add_to(app.add_subcommand("embed", "embed a watermark into a carrier"));
    ext.add_to(app.add_subcommand("extract", "extract a watermark"));
    att.add_to(app.add_subcommand("attack", "apply an attack to an image"));
    bench.add_to(app.add_subcommand("bench", "robustness table over all attack families"));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "gen")
            return gen.run(out, err);
        if (name == "test")
            return test.run(out, err);
        if (name == "embed")
            return emb.run(out, err);
        if (name == "extract")
            return ext.run(out, err);
        if (name == "attack")
            return att.run(out, err);
        return bench.run(out, err);
    } catch (const imaging::NetpbmError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIoError;
    }
}

} // namespace cirng::cli
