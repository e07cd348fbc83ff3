// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <cellsim/cellsim.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace cellsim;

namespace {

const std::vector<std::uint64_t> kSeeds{1, 2, 3, 4, 5};

struct Harness {
    int failures = 0;
    int selected = 0; // 0 = all

    void criterion(int n, const std::string& name, const std::function<bool(std::string&)>& fn) {
        if (selected != 0 && selected != n) return;
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", n, name.c_str(),
                    detail.empty() ? "" : " -- ", detail.c_str());
        if (!ok) ++failures;
    }
};

double wall_seconds(const std::function<void()>& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    Harness h;
    if (argc > 1) h.selected = std::atoi(argv[1]);
    auto suite_start = std::chrono::steady_clock::now();

    // 1. A BS with no traffic for the full 11.24 s run under AlwaysOn
    //    accrues exactly 86.3*1 + 6.2*10.24 = 149.788 J.
    h.criterion(1, "analytic idle-BS energy is exactly 149.788 J", [](std::string& detail) {
        ScenarioConfig cfg;
        cfg.policy = PolicyKind::AlwaysOn;
        cfg.bss.push_back({0, Position{500.0, 500.0}});
        RunReport rep;
        double secs = wall_seconds([&] { rep = run(cfg); });
        const auto& b = rep.bss[0];
        auto oracle =
            recompute_from_trace(PhyState::IDLE, SimTime{}, b.trace, rep.bs_profile, rep.duration);
        detail = format_energy_j(b.total_energy_nj) + " J, " + std::to_string(secs) + " s";
        return b.total_energy_nj == 149'788'000'000 && oracle == b.total_energy_nj &&
               b.dwell_us[static_cast<std::size_t>(PhyState::IDLE)] == 1'000'000 &&
               b.dwell_us[static_cast<std::size_t>(PhyState::DEEP_SLEEP)] == 10'240'000 &&
               secs < 1.0;
    });

    // 2. Incremental ledger equals trace recomputation, exactly, for
    //    every node in every preset across the seed set.
    h.criterion(2, "ledger equals trace oracle for every node", [](std::string& detail) {
        long nodes = 0;
        for (const char* name : {"default", "random", "ue_aware", "data_aware"}) {
            for (auto seed : kSeeds) {
                auto rep = run(preset(name, seed));
                for (const auto& b : rep.bss) {
                    ++nodes;
                    if (recompute_from_trace(PhyState::IDLE, SimTime{}, b.trace, rep.bs_profile,
                                             rep.duration) != b.total_energy_nj) {
                        detail = "bs mismatch in " + std::string(name);
                        return false;
                    }
                }
                for (const auto& u : rep.ues) {
                    ++nodes;
                    if (recompute_from_trace(PhyState::IDLE, SimTime{}, u.trace, rep.ue_profile,
                                             rep.duration) != u.total_energy_nj) {
                        detail = "ue mismatch in " + std::string(name);
                        return false;
                    }
                }
            }
        }
        detail = std::to_string(nodes) + " nodes exact";
        return true;
    });

    // 3. Per-state dwell sums to the run duration for every node.
    h.criterion(3, "dwell conservation for every node", [](std::string& detail) {
        long nodes = 0;
        for (const char* name : {"default", "random", "ue_aware", "data_aware"}) {
            for (auto seed : kSeeds) {
                auto rep = run(preset(name, seed));
                auto total = [](const auto& r) {
                    std::int64_t d = 0;
                    for (auto v : r.dwell_us) d += v;
                    return d;
                };
                for (const auto& b : rep.bss) {
                    ++nodes;
                    if (total(b) != rep.duration.us()) return false;
                }
                for (const auto& u : rep.ues) {
                    ++nodes;
                    if (total(u) != rep.duration.us()) return false;
                }
            }
        }
        detail = std::to_string(nodes) + " nodes exact";
        return true;
    });

    // 4. Energy ordering data_aware <= ue_aware <= default < random for
    //    every seed, with the random-default gap >= 90% explained by
    //    handover signaling plus sleep-state (re-warm / off-window)
    //    deltas from the decision log and ledgers.
    h.criterion(4, "scenario ordering and gap decomposition", [](std::string& detail) {
        auto cmp = compare_scenarios(kSeeds);
        std::ostringstream ss;
        for (const auto& s : cmp.seeds) {
            if (!s.ordering_ok) {
                detail = "ordering violated at seed " + std::to_string(s.seed);
                return false;
            }
            double frac = s.random_vs_default.explained_fraction();
            ss << "seed " << s.seed << ": gap "
               << format_energy_j(s.random_vs_default.gap_nj) << " J, " << frac * 100.0
               << "% explained; ";
            if (s.random_vs_default.gap_nj <= 0 || frac < 0.9) {
                detail = "gap decomposition failed at seed " + std::to_string(s.seed);
                return false;
            }
        }
        detail = ss.str();
        return true;
    });

    // 5. data_aware: BS0 off within 1 s + one tick, and its energy below
    //    10% of the mean of the app-serving BSs.
    h.criterion(5, "data_aware switches BS0 off and keeps it cheapest", [](std::string& detail) {
        auto cfg = preset("data_aware", 1);
        auto rep = run(cfg);
        std::int64_t off_at = -1;
        for (const auto& r : rep.bss[0].trace) {
            if (r.to == PhyState::OFF) {
                off_at = r.at.us();
                break;
            }
        }
        std::int64_t limit = cfg.thresholds.idle_off.us() + cfg.thresholds.tick.us();
        if (off_at < 0 || off_at > limit) {
            detail = "BS0 not off by " + std::to_string(limit) + " us";
            return false;
        }
        std::int64_t serving_sum = 0;
        int serving_n = 0;
        for (const auto& b : rep.bss) {
            if (b.dwell_us[static_cast<std::size_t>(PhyState::TX)] > 0) {
                serving_sum += b.total_energy_nj;
                ++serving_n;
            }
        }
        if (serving_n == 0) return false;
        double mean = static_cast<double>(serving_sum) / serving_n;
        double ratio = static_cast<double>(rep.bss[0].total_energy_nj) / mean;
        detail = "off at " + std::to_string(off_at) + " us, BS0/mean = " +
                 std::to_string(ratio * 100.0) + "%";
        return ratio < 0.10;
    });

    // 6. Spearman correlation between per-BS time-averaged connected UEs
    //    and per-BS energy, pooled over the seeds, >= 0.6.
    h.criterion(6, "energy rank-correlates with connected UEs", [](std::string& detail) {
        std::vector<double> conn, energy;
        for (auto seed : kSeeds) {
            auto rep = run(preset("default", seed));
            for (const auto& b : rep.bss) {
                conn.push_back(rep.avg_connected(b));
                energy.push_back(static_cast<double>(b.total_energy_nj));
            }
        }
        double rho = oracles::spearman(conn, energy);
        detail = "rho = " + std::to_string(rho);
        return rho >= 0.6;
    });

    // 7. Zero-traffic fixed point: with all flows removed under
    //    UeDataAware every BS is off by 1 s + tick and the remaining BS
    //    energy is exactly zero.
    h.criterion(7, "zero-traffic fixed point", [](std::string& detail) {
        for (const char* base : {"default", "data_aware"}) {
            auto cfg = preset(base, 3);
            cfg.policy = PolicyKind::UeDataAware;
            cfg.flows.clear();
            auto rep = run(cfg);
            SimTime cutoff = cfg.thresholds.idle_off + cfg.thresholds.tick;
            for (const auto& b : rep.bss) {
                std::int64_t off_at = -1;
                for (const auto& r : b.trace) {
                    if (r.to == PhyState::OFF) {
                        off_at = r.at.us();
                        break;
                    }
                    if (r.from == PhyState::OFF) return false;
                }
                if (off_at < 0 || off_at > cutoff.us()) {
                    detail = "bs " + std::to_string(b.id) + " not off in time (" + base + ")";
                    return false;
                }
                auto tail = oracles::interval_energy_nj(PhyState::IDLE, SimTime{}, b.trace,
                                                        rep.bs_profile, rep.duration, cutoff,
                                                        rep.duration);
                if (tail != 0) {
                    detail = "bs " + std::to_string(b.id) + " burned energy after cutoff";
                    return false;
                }
            }
        }
        detail = "all BSs off by 1.1 s, 0 J afterwards";
        return true;
    });

    // 8. Determinism: identical config + seed give byte-identical CSVs.
    h.criterion(8, "byte-identical CSVs across repeated runs", [](std::string& detail) {
        auto dir = std::filesystem::temp_directory_path() / "cellsim_acceptance_det";
        for (const char* name : {"default", "random"}) {
            auto cfg = preset(name, 2);
            std::filesystem::remove_all(dir);
            emit_report(run(cfg), ReportFormat::Csv, dir);
            auto a_bs = slurp(dir / "per_bs.csv");
            auto a_ue = slurp(dir / "per_ue.csv");
            auto a_tot = slurp(dir / "totals.csv");
            std::filesystem::remove_all(dir);
            emit_report(run(cfg), ReportFormat::Csv, dir);
            if (slurp(dir / "per_bs.csv") != a_bs || slurp(dir / "per_ue.csv") != a_ue ||
                slurp(dir / "totals.csv") != a_tot) {
                detail = std::string("divergence in ") + name;
                return false;
            }
        }
        std::filesystem::remove_all(dir);
        return true;
    });

    // 9. Desk scale: every preset under a second, whole suite under 60 s.
    h.criterion(9, "desk-scale runtime", [&](std::string& detail) {
        double worst = 0.0;
        for (const char* name : {"default", "random", "ue_aware", "data_aware"}) {
            double secs = wall_seconds([&] { (void)run(preset(name, 1)); });
            if (secs > worst) worst = secs;
            if (secs >= 1.0) {
                detail = std::string(name) + " took " + std::to_string(secs) + " s";
                return false;
            }
        }
        double so_far = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                      suite_start)
                            .count();
        detail = "slowest preset " + std::to_string(worst) + " s, suite " +
                 std::to_string(so_far) + " s";
        return so_far < 60.0;
    });

    if (h.failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", h.failures);
    return 1;
}
