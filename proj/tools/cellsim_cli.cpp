#include <cellsim/cellsim.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

int run_simulate(const std::string& preset_name, const std::string& config_path,
                 std::uint64_t seed, bool seed_given, double duration_s, bool duration_given,
                 const std::string& out_dir, bool emit_trace, const std::string& format) {
    cellsim::ScenarioConfig cfg;
    if (!config_path.empty()) {
        cfg = cellsim::load_config(config_path);
        if (seed_given) cfg.seed = seed;
    } else {
        cfg = cellsim::preset(preset_name, seed);
    }
    if (duration_given) {
        cellsim::SimTime d = cellsim::SimTime::from_seconds(duration_s);
        for (auto& f : cfg.flows) {
            if (f.stop == cfg.duration) f.stop = d; // flows tied to run end follow it
        }
        cfg.duration = d;
    }
    if (emit_trace) cfg.capture_event_log = true;

    cellsim::RunReport rep = cellsim::run(cfg);
    cellsim::emit_report(rep, format == "json" ? cellsim::ReportFormat::Json
                                               : cellsim::ReportFormat::Csv,
                         out_dir);
    if (emit_trace) cellsim::emit_traces(rep, out_dir);

    std::cout << "policy=" << cellsim::policy_name(rep.policy) << " seed=" << rep.seed
              << " bs_total_j=" << cellsim::format_energy_j(rep.bs_total_nj)
              << " ue_total_j=" << cellsim::format_energy_j(rep.ue_total_nj)
              << " handovers=" << rep.handovers << " drops=" << rep.drops << "\n";
    return 0;
}

int run_compare(const std::vector<std::uint64_t>& seeds, const std::string& out_dir) {
    cellsim::ScenarioComparison cmp = cellsim::compare_scenarios(seeds);
    cellsim::emit_comparison(cmp, out_dir);
    for (const auto& s : cmp.seeds) {
        std::cout << "seed=" << s.seed
                  << " data_aware=" << cellsim::format_energy_j(s.data_aware_nj)
                  << " ue_aware=" << cellsim::format_energy_j(s.ue_aware_nj)
                  << " default=" << cellsim::format_energy_j(s.default_nj)
                  << " random=" << cellsim::format_energy_j(s.random_nj)
                  << " ordering_ok=" << (s.ordering_ok ? "yes" : "NO") << "\n";
    }
    std::cout << (cmp.all_ok() ? "ordering holds for all seeds"
                               : "ordering VIOLATED for at least one seed")
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-tier cellular network energy simulator"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run one scenario and emit its report");
    std::string preset_name = "default";
    std::string config_path;
    std::uint64_t seed = 1;
    double duration_s = 0.0;
    std::string out_dir = ".";
    bool emit_trace = false;
    std::string format = "csv";
    auto* preset_opt =
        sim->add_option("--preset", preset_name, "default | random | ue_aware | data_aware");
    auto* config_opt = sim->add_option("--config", config_path, "Scenario config file (JSON)");
    preset_opt->excludes(config_opt);
    auto* seed_opt = sim->add_option("--seed", seed, "Root random seed");
    auto* duration_opt = sim->add_option("--duration", duration_s, "Run length in seconds");
    sim->add_option("--out", out_dir, "Output directory");
    sim->add_flag("--emit-trace", emit_trace, "Also write state traces, decisions, event log");
    sim->add_option("--format", format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* cmp = app.add_subcommand("compare", "Run all four presets over a seed list");
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    cmp->add_option("--seeds", seeds, "Seed list")->delimiter(',');
    std::string cmp_out = ".";
    cmp->add_option("--out", cmp_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            return run_simulate(preset_name, config_path, seed, seed_opt->count() > 0, duration_s,
                                duration_opt->count() > 0, out_dir, emit_trace, format);
        }
        return run_compare(seeds, cmp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
