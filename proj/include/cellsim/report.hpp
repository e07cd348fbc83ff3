#pragma once

#include "scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

namespace detail {

inline std::string zero_pad(std::uint64_t frac, int decimals) {
    std::string s = std::to_string(frac);
    return std::string(static_cast<std::size_t>(decimals) - s.size(), '0') + s;
}

} // namespace detail

/// Exact decimal rendering of scaled integers: nanojoules as joules
/// (9 decimals), microseconds as seconds (6 decimals), micro-units as
/// plain values (6 decimals). No floating point on the way out.
inline std::string format_scaled(std::int64_t value, int decimals) {
    bool neg = value < 0;
    auto v = static_cast<std::uint64_t>(neg ? -value : value);
    std::uint64_t pow10 = 1;
    for (int i = 0; i < decimals; ++i) pow10 *= 10;
    std::string out = neg ? "-" : "";
    out += std::to_string(v / pow10) + "." + detail::zero_pad(v % pow10, decimals);
    return out;
}

inline std::string format_energy_j(std::int64_t nj) { return format_scaled(nj, 9); }
inline std::string format_dwell_s(std::int64_t us) { return format_scaled(us, 6); }

/// Time-weighted average rounded to micro-units, rendered exactly.
inline std::string format_avg(std::int64_t integral_us, std::int64_t duration_us) {
    std::int64_t micro = (integral_us * 1'000'000 + duration_us / 2) / duration_us;
    return format_scaled(micro, 6);
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

} // namespace detail

inline std::string per_bs_csv(const RunReport& rep) {
    std::string out =
        "bs_id,total_energy_j,idle_s,rx_ctrl_s,rx_data_s,tx_s,deep_sleep_s,off_s,"
        "avg_connected_ues\n";
    for (const auto& b : rep.bss) {
        out += std::to_string(b.id);
        out += "," + format_energy_j(b.total_energy_nj);
        for (PhyState s : {PhyState::IDLE, PhyState::RX_CTRL, PhyState::RX_DATA, PhyState::TX,
                           PhyState::DEEP_SLEEP, PhyState::OFF}) {
            out += "," + format_dwell_s(b.dwell_us[static_cast<std::size_t>(s)]);
        }
        out += "," + format_avg(b.conn_integral_us, rep.duration.us());
        out += "\n";
    }
    return out;
}

inline std::string per_ue_csv(const RunReport& rep) {
    std::string out = "ue_id,total_energy_j,idle_s,rx_ctrl_s,rx_data_s,tx_s,handover_count\n";
    for (const auto& u : rep.ues) {
        out += std::to_string(u.id);
        out += "," + format_energy_j(u.total_energy_nj);
        for (PhyState s : {PhyState::IDLE, PhyState::RX_CTRL, PhyState::RX_DATA, PhyState::TX}) {
            out += "," + format_dwell_s(u.dwell_us[static_cast<std::size_t>(s)]);
        }
        out += "," + std::to_string(u.handover_count);
        out += "\n";
    }
    return out;
}

inline std::string totals_csv(const RunReport& rep) {
    std::string out = "policy,seed,bs_total_j,ue_total_j,handovers,drops\n";
    out += std::string(policy_name(rep.policy)) + "," + std::to_string(rep.seed) + "," +
           format_energy_j(rep.bs_total_nj) + "," + format_energy_j(rep.ue_total_nj) + "," +
           std::to_string(rep.handovers) + "," + std::to_string(rep.drops) + "\n";
    return out;
}

/// JSON mirror of the three CSV tables; numeric values are parsed from
/// the same exact decimal strings the CSVs carry, so the two formats
/// agree to the digit.
inline nlohmann::json report_json(const RunReport& rep) {
    nlohmann::json j;
    j["policy"] = policy_name(rep.policy);
    j["seed"] = rep.seed;
    j["duration_s"] = std::stod(format_dwell_s(rep.duration.us()));
    j["bs"] = nlohmann::json::array();
    for (const auto& b : rep.bss) {
        nlohmann::json e;
        e["bs_id"] = b.id;
        e["total_energy_j"] = std::stod(format_energy_j(b.total_energy_nj));
        e["idle_s"] = std::stod(format_dwell_s(b.dwell_us[0]));
        e["rx_ctrl_s"] = std::stod(format_dwell_s(b.dwell_us[1]));
        e["rx_data_s"] = std::stod(format_dwell_s(b.dwell_us[2]));
        e["tx_s"] = std::stod(format_dwell_s(b.dwell_us[3]));
        e["deep_sleep_s"] = std::stod(format_dwell_s(b.dwell_us[4]));
        e["off_s"] = std::stod(format_dwell_s(b.dwell_us[5]));
        e["avg_connected_ues"] = std::stod(format_avg(b.conn_integral_us, rep.duration.us()));
        j["bs"].push_back(e);
    }
    j["ue"] = nlohmann::json::array();
    for (const auto& u : rep.ues) {
        nlohmann::json e;
        e["ue_id"] = u.id;
        e["total_energy_j"] = std::stod(format_energy_j(u.total_energy_nj));
        e["idle_s"] = std::stod(format_dwell_s(u.dwell_us[0]));
        e["rx_ctrl_s"] = std::stod(format_dwell_s(u.dwell_us[1]));
        e["rx_data_s"] = std::stod(format_dwell_s(u.dwell_us[2]));
        e["tx_s"] = std::stod(format_dwell_s(u.dwell_us[3]));
        e["handover_count"] = u.handover_count;
        j["ue"].push_back(e);
    }
    j["totals"] = {{"policy", policy_name(rep.policy)},
                   {"seed", rep.seed},
                   {"bs_total_j", std::stod(format_energy_j(rep.bs_total_nj))},
                   {"ue_total_j", std::stod(format_energy_j(rep.ue_total_nj))},
                   {"handovers", rep.handovers},
                   {"drops", rep.drops}};
    return j;
}

enum class ReportFormat { Csv, Json };

/// Writes the report tables under `dir` (per_bs.csv / per_ue.csv /
/// totals.csv, or report.json). Re-emission overwrites deterministically.
inline void emit_report(const RunReport& rep, ReportFormat format,
                        const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    if (format == ReportFormat::Csv) {
        detail::write_file(dir / "per_bs.csv", per_bs_csv(rep));
        detail::write_file(dir / "per_ue.csv", per_ue_csv(rep));
        detail::write_file(dir / "totals.csv", totals_csv(rep));
    } else {
        detail::write_file(dir / "report.json", report_json(rep).dump(2) + "\n");
    }
}

/// State-change traces (`node_id,t_us,from,to`; node ids are `bs<N>` /
/// `ue<N>`), the decision log and, when captured, the event log.
inline void emit_traces(const RunReport& rep, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::string trace = "node_id,t_us,from,to\n";
    for (const auto& b : rep.bss) {
        for (const auto& r : b.trace) {
            trace += "bs" + std::to_string(b.id) + "," + std::to_string(r.at.us()) + "," +
                     to_string(r.from) + "," + to_string(r.to) + "\n";
        }
    }
    for (const auto& u : rep.ues) {
        for (const auto& r : u.trace) {
            trace += "ue" + std::to_string(u.id) + "," + std::to_string(r.at.us()) + "," +
                     to_string(r.from) + "," + to_string(r.to) + "\n";
        }
    }
    detail::write_file(dir / "trace.csv", trace);

    std::string decisions = "t_us,command,args\n";
    for (const auto& d : rep.decisions) {
        decisions += std::to_string(d.t_us) + "," + d.command + "," + d.args + "\n";
    }
    detail::write_file(dir / "decisions.csv", decisions);

    if (!rep.events.empty()) {
        std::string events;
        for (const auto& e : rep.events) {
            events += std::to_string(e.t_us) + "," + to_string(e.kind) + "," + e.payload + "\n";
        }
        detail::write_file(dir / "events.log", events);
    }
}

/// BS-side energy actually spent in handover signaling (RX_CTRL dwell
/// tagged as signaling, priced at each BS's RX_CTRL draw).
inline std::int64_t bs_signaling_energy_nj(const RunReport& rep) {
    std::int64_t total = 0;
    for (const auto& b : rep.bss) {
        total += rep.bs_profile.mw(PhyState::RX_CTRL) * b.signaling_dwell_us;
    }
    return total;
}

/// BS energy spent in the non-serving states (IDLE + DEEP_SLEEP + OFF):
/// the sleep-state side of the energy balance, where off-window savings
/// and re-warm intervals show up.
inline std::int64_t bs_sleep_state_energy_nj(const RunReport& rep) {
    std::int64_t total = 0;
    for (const auto& b : rep.bss) {
        total += b.energy_nj[static_cast<std::size_t>(PhyState::IDLE)] +
                 b.energy_nj[static_cast<std::size_t>(PhyState::DEEP_SLEEP)] +
                 b.energy_nj[static_cast<std::size_t>(PhyState::OFF)];
    }
    return total;
}

/// Decomposition of the total-BS-energy gap between two runs into the
/// handover-signaling delta and the sleep-state (re-warm / off-window)
/// delta; whatever remains is data-path movement.
struct GapDecomposition {
    std::int64_t gap_nj = 0;
    std::int64_t signaling_delta_nj = 0;
    std::int64_t sleep_delta_nj = 0;

    std::int64_t explained_nj() const { return signaling_delta_nj + sleep_delta_nj; }
    double explained_fraction() const {
        if (gap_nj == 0) return 1.0;
        return static_cast<double>(explained_nj()) / static_cast<double>(gap_nj);
    }
};

inline GapDecomposition decompose_gap(const RunReport& base, const RunReport& other) {
    GapDecomposition d;
    d.gap_nj = other.bs_total_nj - base.bs_total_nj;
    d.signaling_delta_nj = bs_signaling_energy_nj(other) - bs_signaling_energy_nj(base);
    d.sleep_delta_nj = bs_sleep_state_energy_nj(other) - bs_sleep_state_energy_nj(base);
    return d;
}

/// Matched-seed comparison of the four presets.
struct ScenarioComparison {
    struct Row {
        std::string preset;
        PolicyKind policy;
        std::uint64_t seed;
        std::int64_t bs_total_nj;
        std::int64_t ue_total_nj;
        std::int64_t handovers;
        std::int64_t drops;
    };
    struct SeedSummary {
        std::uint64_t seed;
        std::int64_t data_aware_nj;
        std::int64_t ue_aware_nj;
        std::int64_t default_nj;
        std::int64_t random_nj;
        bool ordering_ok;
        GapDecomposition random_vs_default;
    };
    std::vector<Row> rows;
    std::vector<SeedSummary> seeds;

    bool all_ok() const {
        for (const auto& s : seeds) {
            if (!s.ordering_ok) return false;
        }
        return true;
    }
};

/// Runs the four presets for every seed (the three shared-topology
/// presets see identical placements and flows per seed), tabulates total
/// mmWave-BS energy and checks data_aware <= ue_aware <= default < random.
inline ScenarioComparison compare_scenarios(const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("compare_scenarios needs at least one seed");
    ScenarioComparison cmp;
    for (std::uint64_t seed : seeds) {
        RunReport def = run(preset("default", seed));
        RunReport rnd = run(preset("random", seed));
        RunReport uea = run(preset("ue_aware", seed));
        RunReport dat = run(preset("data_aware", seed));
        for (const RunReport* r : {&dat, &uea, &def, &rnd}) {
            std::string name = r == &dat   ? "data_aware"
                               : r == &uea ? "ue_aware"
                               : r == &def ? "default"
                                           : "random";
            cmp.rows.push_back({name, r->policy, seed, r->bs_total_nj, r->ue_total_nj,
                                r->handovers, r->drops});
        }
        ScenarioComparison::SeedSummary s;
        s.seed = seed;
        s.data_aware_nj = dat.bs_total_nj;
        s.ue_aware_nj = uea.bs_total_nj;
        s.default_nj = def.bs_total_nj;
        s.random_nj = rnd.bs_total_nj;
        s.ordering_ok = dat.bs_total_nj <= uea.bs_total_nj &&
                        uea.bs_total_nj <= def.bs_total_nj && def.bs_total_nj < rnd.bs_total_nj;
        s.random_vs_default = decompose_gap(def, rnd);
        cmp.seeds.push_back(s);
    }
    return cmp;
}

inline void emit_comparison(const ScenarioComparison& cmp, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::string rows = "policy,seed,bs_total_j,ue_total_j,handovers,drops\n";
    for (const auto& r : cmp.rows) {
        rows += std::string(policy_name(r.policy)) + "," + std::to_string(r.seed) + "," +
                format_energy_j(r.bs_total_nj) + "," + format_energy_j(r.ue_total_nj) + "," +
                std::to_string(r.handovers) + "," + std::to_string(r.drops) + "\n";
    }
    detail::write_file(dir / "compare.csv", rows);

    std::string ord =
        "seed,data_aware_j,ue_aware_j,default_j,random_j,ordering_ok,gap_j,"
        "gap_explained_fraction\n";
    for (const auto& s : cmp.seeds) {
        ord += std::to_string(s.seed) + "," + format_energy_j(s.data_aware_nj) + "," +
               format_energy_j(s.ue_aware_nj) + "," + format_energy_j(s.default_nj) + "," +
               format_energy_j(s.random_nj) + "," + (s.ordering_ok ? "1" : "0") + "," +
               format_energy_j(s.random_vs_default.gap_nj) + "," +
               std::to_string(s.random_vs_default.explained_fraction()) + "\n";
    }
    detail::write_file(dir / "ordering.csv", ord);
}

} // namespace cellsim
