#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../imaging/attacks.hpp"
#include "watermark.hpp"

namespace cirng::watermark {

struct SweepRow
{
    imaging::AttackSpec attack;
    Mode mode;
    double similarity;
};

// Embeds once per mode, then attacks and extracts for every spec.
inline std::vector<SweepRow> robustness_sweep(const GrayImage& carrier, const BinaryImage& wm,
                                              const EmbeddingKey& key, const EmbedOptions& opt,
                                              const std::vector<imaging::AttackSpec>& attacks,
                                              const std::vector<Mode>& modes = {Mode::Unauthenticated,
                                                                                Mode::Authenticated})
{
    std::vector<SweepRow> rows;
    if (attacks.empty())
        return rows;
    for (const Mode mode : modes) {
        EmbeddingKey k = key;
        k.mode = mode;
        const GrayImage marked = embed(carrier, wm, k, opt);
        for (const auto& spec : attacks) {
            const GrayImage attacked = imaging::apply_attack(marked, spec);
            rows.push_back({spec, mode, similarity(wm, extract(attacked, k, wm.width, wm.height, opt))});
        }
    }
    return rows;
}

// The attack grid of the reference experiment.
inline std::vector<imaging::AttackSpec> default_attack_grid(std::uint64_t noise_seed = 1)
{
    using imaging::AttackKind;
    std::vector<imaging::AttackSpec> grid;
    for (double s : {10, 50, 100, 200})
        grid.push_back({AttackKind::Crop, s});
    for (double a : {2, 5, 10, 25})
        grid.push_back({AttackKind::Rotate, a});
    for (double l : {2, 5, 10, 20})
        grid.push_back({AttackKind::Jpeg, l});
    for (double sd : {1, 2, 3})
        grid.push_back({AttackKind::Noise, sd, noise_seed});
    return grid;
}

namespace detail {

inline const char* attack_header(imaging::AttackKind k)
{
    switch (k) {
    case imaging::AttackKind::Crop: return "Cropping (size, pixels)";
    case imaging::AttackKind::Rotate: return "Rotation (angle, degrees)";
    case imaging::AttackKind::Jpeg: return "JPEG compression (level)";
    case imaging::AttackKind::Noise: return "Gaussian noise (std. dev.)";
    }
    return "?";
}

inline std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

} // namespace detail

// Side-by-side table: one block per attack family, one column pair per mode.
inline std::string render_sweep_table(const std::vector<SweepRow>& rows)
{
    // (kind, parameter) -> mode -> similarity, in first-seen order.
    std::vector<std::pair<imaging::AttackKind, double>> order;
    std::map<std::pair<int, double>, std::map<Mode, double>> cells;
    for (const auto& r : rows) {
        const auto key = std::make_pair(static_cast<int>(r.attack.kind), r.attack.parameter);
        if (!cells.contains(key))
            order.emplace_back(r.attack.kind, r.attack.parameter);
        cells[key][r.mode] = r.similarity;
    }
    auto cell = [&](imaging::AttackKind k, double p, Mode m) -> std::string {
        const auto& c = cells[{static_cast<int>(k), p}];
        const auto it = c.find(m);
        return it == c.end() ? "-" : detail::fmt("%.2f%%", it->second);
    };
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-28s %10s %16s %16s\n", "Attack", "Parameter", "UNAUTHENTICATION",
                  "AUTHENTICATION");
    out += line;
    bool first = true;
    imaging::AttackKind prev{};
    for (const auto& [k, p] : order) {
        const bool new_block = first || k != prev;
        if (new_block)
            out += std::string(73, '-') + "\n";
        std::snprintf(line, sizeof line, "%-28s %10s %16s %16s\n", new_block ? detail::attack_header(k) : "",
                      detail::fmt("%g", p).c_str(), cell(k, p, Mode::Unauthenticated).c_str(),
                      cell(k, p, Mode::Authenticated).c_str());
        out += line;
        first = false;
        prev = k;
    }
    return out;
}

inline std::string render_sweep_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "attack,parameter,mode,similarity\n";
    for (const auto& r : rows)
        out += std::string(imaging::to_string(r.attack.kind)) + "," + detail::fmt("%g", r.attack.parameter) + "," +
               to_string(r.mode) + "," + detail::fmt("%.6f", r.similarity) + "\n";
    return out;
}

inline nlohmann::ordered_json sweep_to_json(const std::vector<SweepRow>& rows)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j;
        j["attack"] = r.attack.to_json();
        j["mode"] = to_string(r.mode);
        j["similarity"] = r.similarity;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace cirng::watermark
