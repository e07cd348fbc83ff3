#pragma once

#include "connection.hpp"
#include "mme.hpp"
#include "traffic.hpp"
#include "world.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

struct Thresholds {
    SimTime deep_sleep = SimTime::from_us(1'000'000); // IDLE -> DEEP_SLEEP after 1 s
    SimTime idle_off = SimTime::from_us(1'000'000);   // switch-off idle threshold
    SimTime tick = SimTime::from_us(100'000);         // policy evaluation period
    SimTime ho_ctrl = SimTime::from_us(5'000);        // handover signaling unit
};

struct BsConfig {
    BsId id = 0;
    std::optional<Position> position; // empty: drawn from the topology stream
};

struct UeConfig {
    UeId id = 0;
    std::optional<Position> position;
    MobilityKind mobility = MobilityKind::ConstantPosition;
    double speed = 0.0;
    SimTime heading_change_period = SimTime::from_us(1'000'000);
};

/// Full declarative description of one run.
struct ScenarioConfig {
    PolicyKind policy = PolicyKind::AlwaysOn;
    SimTime duration = SimTime::from_us(11'240'000);
    Rect area{0.0, 0.0, 1000.0, 1000.0};
    std::uint64_t seed = 1;
    std::vector<BsConfig> bss;
    std::vector<UeConfig> ues;
    std::vector<FlowSpec> flows;
    PowerProfile ue_profile = ue_default_profile();
    PowerProfile bs_profile = bs_default_profile();
    ServiceModel service;
    Thresholds thresholds;
    bool capture_event_log = false;

    void validate() const {
        if (duration.us() <= 0) throw std::invalid_argument("duration must be > 0");
        if (area.width() <= 0 || area.height() <= 0) {
            throw std::invalid_argument("area must have positive extent");
        }
        for (std::size_t i = 0; i < bss.size(); ++i) {
            if (bss[i].id != i) throw std::invalid_argument("bs ids must be dense, 0..n-1");
            if (bss[i].position && !area.contains(*bss[i].position)) {
                throw std::invalid_argument("bs position outside area");
            }
        }
        for (std::size_t i = 0; i < ues.size(); ++i) {
            if (ues[i].id != i) throw std::invalid_argument("ue ids must be dense, 0..n-1");
            if (ues[i].position && !area.contains(*ues[i].position)) {
                throw std::invalid_argument("ue position outside area");
            }
            if (ues[i].speed < 0) throw std::invalid_argument("ue speed must be >= 0");
            if (ues[i].heading_change_period.us() <= 0) {
                throw std::invalid_argument("heading change period must be > 0");
            }
        }
        for (const auto& f : flows) f.validate(ues.size());
        if (thresholds.tick.us() <= 0) throw std::invalid_argument("tick must be > 0");
        if (thresholds.deep_sleep.us() <= 0) {
            throw std::invalid_argument("deep sleep threshold must be > 0");
        }
        if (service.data_rate_bps <= 0) throw std::invalid_argument("data rate must be > 0");
    }
};

/// The four evaluation scenarios.
///
/// default/random/ue_aware share one topology per seed: ten BSs and ten
/// walking UEs placed uniformly in the kilometre square, every UE with a
/// sparse downlink flow; only the switching policy differs. data_aware is
/// the clustered static layout: BS 0 with four application-less UEs close
/// by, nine BSs in a far 3x3 grid with the six app-carrying UEs around
/// the grid centre.
inline ScenarioConfig preset(const std::string& name, std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    if (name == "data_aware") {
        cfg.policy = PolicyKind::UeDataAware;
        cfg.bss.push_back({0, Position{100.0, 100.0}});
        BsId next = 1;
        for (double y : {600.0, 750.0, 900.0}) {
            for (double x : {600.0, 750.0, 900.0}) {
                cfg.bss.push_back({next++, Position{x, y}});
            }
        }
        // Four silent UEs next to BS 0.
        cfg.ues.push_back({0, Position{80.0, 100.0}});
        cfg.ues.push_back({1, Position{120.0, 100.0}});
        cfg.ues.push_back({2, Position{100.0, 80.0}});
        cfg.ues.push_back({3, Position{100.0, 120.0}});
        // Six app-carrying UEs ringing the grid centre (bs 5).
        for (int k = 0; k < 6; ++k) {
            double ang = k * std::numbers::pi / 3.0;
            cfg.ues.push_back(
                {static_cast<UeId>(4 + k),
                 Position{750.0 + 25.0 * std::cos(ang), 750.0 + 25.0 * std::sin(ang)}});
        }
        for (int k = 0; k < 6; ++k) {
            FlowSpec f;
            f.ue = static_cast<UeId>(4 + k);
            f.packet_bytes = 1000;
            f.interval = SimTime::from_us(900'000);
            f.start = SimTime::from_us(k * 150'000);
            f.stop = cfg.duration;
            cfg.flows.push_back(f);
        }
        return cfg;
    }

    if (name == "default") {
        cfg.policy = PolicyKind::AlwaysOn;
    } else if (name == "random") {
        cfg.policy = PolicyKind::RandomOff;
    } else if (name == "ue_aware") {
        cfg.policy = PolicyKind::UeAware;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    for (BsId b = 0; b < 10; ++b) cfg.bss.push_back({b, std::nullopt});
    for (UeId u = 0; u < 10; ++u) {
        UeConfig uc;
        uc.id = u;
        uc.mobility = MobilityKind::RandomWalk2D;
        uc.speed = 5.0;
        cfg.ues.push_back(uc);
    }
    // Sparse staggered downlink: one 1000-byte packet every 4 s per UE,
    // first packet within the first two seconds. Identical flows across
    // the three shared presets for a given seed.
    RandomSource traffic_stream = make_stream(seed, StreamId::Traffic);
    for (UeId u = 0; u < 10; ++u) {
        FlowSpec f;
        f.ue = u;
        f.packet_bytes = 1000;
        f.interval = SimTime::from_us(4'000'000);
        f.start = SimTime::from_seconds(traffic_stream.uniform(0.0, 2.0));
        f.stop = cfg.duration;
        cfg.flows.push_back(f);
    }
    return cfg;
}

/// Everything a finished run reports for one BS.
struct BsReport {
    BsId id = 0;
    Position pos;
    std::int64_t total_energy_nj = 0;
    std::array<std::int64_t, kPhyStateCount> dwell_us{};
    std::array<std::int64_t, kPhyStateCount> energy_nj{};
    std::int64_t conn_integral_us = 0;
    std::int64_t signaling_dwell_us = 0;
    std::vector<StateChangeRecord> trace;
};

struct UeReport {
    UeId id = 0;
    std::int64_t total_energy_nj = 0;
    std::array<std::int64_t, kPhyStateCount> dwell_us{};
    std::array<std::int64_t, kPhyStateCount> energy_nj{};
    std::int64_t handover_count = 0;
    std::vector<StateChangeRecord> trace;
};

struct RunReport {
    PolicyKind policy = PolicyKind::AlwaysOn;
    std::uint64_t seed = 0;
    SimTime duration;
    std::vector<BsReport> bss;
    std::vector<UeReport> ues;
    std::int64_t bs_total_nj = 0;
    std::int64_t ue_total_nj = 0;
    std::int64_t handovers = 0;
    std::int64_t drops = 0;
    std::int64_t packets_served = 0;
    PowerProfile ue_profile;
    PowerProfile bs_profile;
    std::vector<DecisionRecord> decisions;
    std::vector<EventLogLine> events;

    double avg_connected(const BsReport& b) const {
        return static_cast<double>(b.conn_integral_us) / static_cast<double>(duration.us());
    }
};

/// Builds the world from `cfg`, runs it to the configured duration and
/// assembles the report. Two calls with the same config produce
/// identical reports.
inline RunReport run(const ScenarioConfig& cfg) {
    cfg.validate();
    World world(cfg.seed);

    // Topology stream order: auto BS positions in id order, then auto UE
    // positions in id order.
    for (const auto& bc : cfg.bss) {
        Position p = bc.position ? *bc.position
                                 : place_uniform(1, cfg.area, world.topology_rng()).front();
        world.add_bs(p, cfg.bs_profile, cfg.thresholds.deep_sleep);
    }
    for (const auto& uc : cfg.ues) {
        Position p = uc.position ? *uc.position
                                 : place_uniform(1, cfg.area, world.topology_rng()).front();
        MobilitySpec spec;
        spec.kind = uc.mobility;
        spec.speed = uc.speed;
        spec.heading_change_period = uc.heading_change_period;
        spec.bounds = cfg.area;
        UeId id = world.add_ue(p, spec, cfg.ue_profile);
        if (uc.mobility == MobilityKind::RandomWalk2D) {
            world.ue(id).mob.heading = world.mobility_rng().uniform(0.0, 2.0 * std::numbers::pi);
        }
    }

    ConnectionTable table(world.bs_count(), world.ue_count(), SimTime{});
    TrafficModel traffic(world, table, cfg.service);
    SmartMme mme(world, table, traffic, cfg.policy, cfg.thresholds.idle_off,
                 cfg.thresholds.ho_ctrl);

    std::vector<EventLogLine> events;
    if (cfg.capture_event_log) world.engine().set_event_log(&events);

    // Random off-windows first: a window at t=0 must precede initial
    // association so UEs boot onto the nearest live cell.
    if (cfg.policy == PolicyKind::RandomOff) {
        mme.apply_random_schedule(mme.draw_random_schedule(world.policy_rng()));
    }

    // Initial association: every UE to its nearest live BS, signaling-free.
    {
        auto live = world.on_bs_candidates();
        for (UeId u = 0; u < world.ue_count(); ++u) {
            if (live.empty()) break;
            mme.on_connection_established(u, nearest_bs(world.ue(u).mob.pos, live), SimTime{});
        }
    }

    // Mobility advances on a fixed cadence so handover checks see fresh
    // positions; scheduled before the tick chain at every shared instant.
    if (world.ue_count() > 0) {
        struct MobilityChain {
            World* w;
            SimTime period;
            SimTime end;
            void operator()() const {
                w->advance_mobility(w->engine().now());
                SimTime next = w->engine().now() + period;
                if (next <= end) {
                    w->engine().schedule(next, EventKind::MobilityStep, MobilityChain{*this});
                }
            }
        };
        SimTime first = cfg.thresholds.tick;
        if (first <= cfg.duration) {
            world.engine().schedule(first, EventKind::MobilityStep,
                                    MobilityChain{&world, cfg.thresholds.tick, cfg.duration});
        }
    }

    // Policy tick chain, starting at t=0.
    {
        struct TickChain {
            SmartMme* mme;
            World* w;
            SimTime period;
            SimTime end;
            void operator()() const {
                mme->tick(w->engine().now());
                SimTime next = w->engine().now() + period;
                if (next <= end) {
                    w->engine().schedule(next, EventKind::PolicyTick, TickChain{*this});
                }
            }
        };
        world.engine().schedule(SimTime{}, EventKind::PolicyTick,
                                TickChain{&mme, &world, cfg.thresholds.tick, cfg.duration});
    }

    for (const auto& f : cfg.flows) traffic.emit_packets(f);

    world.engine().schedule(cfg.duration, EventKind::SimEnd, [] {}, "");

    world.engine().run_until(cfg.duration);
    world.finalize_nodes(cfg.duration);
    table.finalize(cfg.duration);

    RunReport rep;
    rep.policy = cfg.policy;
    rep.seed = cfg.seed;
    rep.duration = cfg.duration;
    rep.ue_profile = cfg.ue_profile;
    rep.bs_profile = cfg.bs_profile;
    for (BsId b = 0; b < world.bs_count(); ++b) {
        const BsNode& n = world.bs(b);
        BsReport r;
        r.id = b;
        r.pos = n.pos;
        r.total_energy_nj = n.dev.ledger().total_energy_nj();
        for (std::size_t s = 0; s < kPhyStateCount; ++s) {
            r.dwell_us[s] = n.dev.ledger().dwell_us(static_cast<PhyState>(s));
            r.energy_nj[s] = n.dev.ledger().energy_nj(static_cast<PhyState>(s));
        }
        r.conn_integral_us = table.conn_integral_us(b);
        r.signaling_dwell_us = n.dev.signaling_dwell_us();
        r.trace = n.dev.ledger().trace();
        rep.bs_total_nj += r.total_energy_nj;
        rep.bss.push_back(std::move(r));
    }
    for (UeId u = 0; u < world.ue_count(); ++u) {
        const UeNode& n = world.ue(u);
        UeReport r;
        r.id = u;
        r.total_energy_nj = n.dev.ledger().total_energy_nj();
        for (std::size_t s = 0; s < kPhyStateCount; ++s) {
            r.dwell_us[s] = n.dev.ledger().dwell_us(static_cast<PhyState>(s));
            r.energy_nj[s] = n.dev.ledger().energy_nj(static_cast<PhyState>(s));
        }
        r.handover_count = n.handover_count;
        r.trace = n.dev.ledger().trace();
        rep.ue_total_nj += r.total_energy_nj;
        rep.ues.push_back(std::move(r));
    }
    rep.handovers = mme.handover_count();
    rep.drops = traffic.drops();
    rep.packets_served = traffic.packets_served();
    rep.decisions = mme.decision_log();
    rep.events = std::move(events);
    return rep;
}

} // namespace cellsim
