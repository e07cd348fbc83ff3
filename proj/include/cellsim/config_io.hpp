#pragma once

#include "scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace cellsim {

/// JSON mirror of ScenarioConfig. Every key is optional and falls back
/// to the built-in default, so a config file only needs to state what it
/// changes.

inline nlohmann::json config_to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["policy"] = policy_name(cfg.policy);
    j["duration_s"] = cfg.duration.seconds();
    j["seed"] = cfg.seed;
    j["area"] = {{"x_min", cfg.area.x_min},
                 {"y_min", cfg.area.y_min},
                 {"x_max", cfg.area.x_max},
                 {"y_max", cfg.area.y_max}};
    j["bss"] = nlohmann::json::array();
    for (const auto& b : cfg.bss) {
        nlohmann::json e{{"id", b.id}};
        if (b.position) e["position"] = {{"x", b.position->x}, {"y", b.position->y}};
        j["bss"].push_back(e);
    }
    j["ues"] = nlohmann::json::array();
    for (const auto& u : cfg.ues) {
        nlohmann::json e{{"id", u.id}};
        if (u.position) e["position"] = {{"x", u.position->x}, {"y", u.position->y}};
        e["mobility"] = {
            {"kind",
             u.mobility == MobilityKind::RandomWalk2D ? "random_walk_2d" : "constant_position"},
            {"speed_mps", u.speed},
            {"heading_change_period_s", u.heading_change_period.seconds()}};
        j["ues"].push_back(e);
    }
    j["flows"] = nlohmann::json::array();
    for (const auto& f : cfg.flows) {
        j["flows"].push_back({{"ue", f.ue},
                              {"packet_bytes", f.packet_bytes},
                              {"interval_s", f.interval.seconds()},
                              {"start_s", f.start.seconds()},
                              {"stop_s", f.stop.seconds()}});
    }
    nlohmann::json ue_prof, bs_prof;
    for (std::size_t s = 0; s < kPhyStateCount; ++s) {
        auto st = static_cast<PhyState>(s);
        ue_prof[to_string(st)] = cfg.ue_profile.watts(st);
        bs_prof[to_string(st)] = cfg.bs_profile.watts(st);
    }
    j["power_profiles"] = {{"ue", ue_prof}, {"bs", bs_prof}};
    j["service_model"] = {{"data_rate_bps", cfg.service.data_rate_bps},
                          {"ctrl_overhead_s", cfg.service.ctrl_overhead.seconds()}};
    j["thresholds"] = {{"deep_sleep_s", cfg.thresholds.deep_sleep.seconds()},
                       {"idle_off_s", cfg.thresholds.idle_off.seconds()},
                       {"tick_s", cfg.thresholds.tick.seconds()},
                       {"ho_ctrl_s", cfg.thresholds.ho_ctrl.seconds()}};
    return j;
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    ScenarioConfig cfg;
    if (j.contains("policy")) cfg.policy = policy_from_string(j.at("policy").get<std::string>());
    if (j.contains("duration_s")) cfg.duration = SimTime::from_seconds(j.at("duration_s"));
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("area")) {
        const auto& a = j.at("area");
        cfg.area = {a.at("x_min"), a.at("y_min"), a.at("x_max"), a.at("y_max")};
    }
    if (j.contains("bss")) {
        for (const auto& e : j.at("bss")) {
            BsConfig b;
            b.id = e.at("id").get<BsId>();
            if (e.contains("position")) {
                b.position = Position{e.at("position").at("x"), e.at("position").at("y")};
            }
            cfg.bss.push_back(b);
        }
    }
    if (j.contains("ues")) {
        for (const auto& e : j.at("ues")) {
            UeConfig u;
            u.id = e.at("id").get<UeId>();
            if (e.contains("position")) {
                u.position = Position{e.at("position").at("x"), e.at("position").at("y")};
            }
            if (e.contains("mobility")) {
                const auto& m = e.at("mobility");
                std::string kind = m.value("kind", "constant_position");
                if (kind == "random_walk_2d") {
                    u.mobility = MobilityKind::RandomWalk2D;
                } else if (kind == "constant_position") {
                    u.mobility = MobilityKind::ConstantPosition;
                } else {
                    throw std::invalid_argument("unknown mobility kind: " + kind);
                }
                u.speed = m.value("speed_mps", 0.0);
                if (m.contains("heading_change_period_s")) {
                    u.heading_change_period =
                        SimTime::from_seconds(m.at("heading_change_period_s"));
                }
            }
            cfg.ues.push_back(u);
        }
    }
    if (j.contains("flows")) {
        for (const auto& e : j.at("flows")) {
            FlowSpec f;
            f.ue = e.at("ue").get<UeId>();
            f.packet_bytes = e.at("packet_bytes").get<std::int64_t>();
            f.interval = SimTime::from_seconds(e.at("interval_s"));
            f.start = SimTime::from_seconds(e.at("start_s"));
            f.stop = SimTime::from_seconds(e.at("stop_s"));
            cfg.flows.push_back(f);
        }
    }
    if (j.contains("power_profiles")) {
        const auto& p = j.at("power_profiles");
        if (p.contains("ue")) {
            for (const auto& [key, val] : p.at("ue").items()) {
                cfg.ue_profile.set_watts(phy_state_from_string(key), val.get<double>());
            }
        }
        if (p.contains("bs")) {
            for (const auto& [key, val] : p.at("bs").items()) {
                cfg.bs_profile.set_watts(phy_state_from_string(key), val.get<double>());
            }
        }
    }
    if (j.contains("service_model")) {
        const auto& s = j.at("service_model");
        if (s.contains("data_rate_bps")) {
            cfg.service.data_rate_bps = s.at("data_rate_bps").get<std::int64_t>();
        }
        if (s.contains("ctrl_overhead_s")) {
            cfg.service.ctrl_overhead = SimTime::from_seconds(s.at("ctrl_overhead_s"));
        }
    }
    if (j.contains("thresholds")) {
        const auto& t = j.at("thresholds");
        if (t.contains("deep_sleep_s")) {
            cfg.thresholds.deep_sleep = SimTime::from_seconds(t.at("deep_sleep_s"));
        }
        if (t.contains("idle_off_s")) {
            cfg.thresholds.idle_off = SimTime::from_seconds(t.at("idle_off_s"));
        }
        if (t.contains("tick_s")) cfg.thresholds.tick = SimTime::from_seconds(t.at("tick_s"));
        if (t.contains("ho_ctrl_s")) {
            cfg.thresholds.ho_ctrl = SimTime::from_seconds(t.at("ho_ctrl_s"));
        }
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    nlohmann::json j;
    in >> j;
    return config_from_json(j);
}

inline void save_config(const ScenarioConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << config_to_json(cfg).dump(2) << "\n";
}

} // namespace cellsim
