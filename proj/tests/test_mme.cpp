#include <cellsim/mme.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

using namespace cellsim;

namespace {

SimTime sec(double s) { return SimTime::from_seconds(s); }

struct Net {
    World world;
    ConnectionTable table;
    TrafficModel traffic;
    SmartMme mme;

    Net(std::vector<Position> bs_pos, std::vector<Position> ue_pos, PolicyKind policy,
        ServiceModel service = {})
        : world(1),
          table(bs_pos.size(), ue_pos.size(), SimTime{}),
          traffic(world, table, service),
          mme(world, table, traffic, policy, sec(1.0), sec(0.005)) {
        for (auto p : bs_pos) world.add_bs(p, bs_default_profile(), sec(1.0));
        MobilitySpec spec;
        spec.bounds = {0, 0, 1000, 1000};
        for (auto p : ue_pos) world.add_ue(p, spec, ue_default_profile());
    }

    void associate_nearest() {
        auto live = world.on_bs_candidates();
        for (UeId u = 0; u < world.ue_count(); ++u) {
            mme.on_connection_established(u, nearest_bs(world.ue(u).mob.pos, live), SimTime{});
        }
    }

    int count(const std::vector<PolicyCommand>& cmds, PolicyCommand::Kind k) const {
        return static_cast<int>(
            std::count_if(cmds.begin(), cmds.end(), [&](const auto& c) { return c.kind == k; }));
    }
};

} // namespace

TEST_CASE("connection callbacks keep both maps consistent") {
    Net net({{0, 0}, {100, 0}}, {{10, 0}}, PolicyKind::AlwaysOn);
    net.mme.on_connection_established(0, 0, SimTime{});
    CHECK(net.table.serving(0) == BsId{0});
    CHECK(net.table.connected(0).count(0) == 1);

    SECTION("re-connecting moves the UE") {
        net.mme.on_connection_established(0, 1, sec(1.0));
        CHECK(net.table.serving(0) == BsId{1});
        CHECK(net.table.connected(0).count(0) == 0);
        CHECK(net.table.connected(1).count(0) == 1);
        net.table.verify();
    }
    SECTION("connecting to an OFF BS is a policy bug") {
        net.world.bs(1).dev.switch_off(sec(1.0));
        CHECK_THROWS_AS(net.mme.on_connection_established(0, 1, sec(1.0)), std::logic_error);
    }
}

TEST_CASE("evaluate switches off a BS with no connected UEs") {
    Net net({{0, 0}, {500, 0}}, {{10, 0}}, PolicyKind::UeDataAware);
    net.associate_nearest(); // ue 0 -> bs 0; bs 1 empty
    net.world.bs(0).dev.note_data_activity(SimTime{}); // keep bs 0 fresh
    auto cmds = net.mme.evaluate(SimTime{});
    REQUIRE(cmds.size() == 1);
    CHECK(cmds[0].kind == PolicyCommand::Kind::SwitchOff);
    CHECK(cmds[0].bs == 1);
}

TEST_CASE("evaluate evicts idle UEs when switching their BS off") {
    // Two UEs idle for 1.5 s on bs 0; bs 1 stays on (it has a fresh UE).
    Net net({{0, 0}, {300, 0}}, {{10, 0}, {20, 0}, {310, 0}}, PolicyKind::UeDataAware);
    net.associate_nearest();
    net.world.bs(1).dev.note_data_activity(sec(1.4));
    net.world.ue(2).dev.note_data_activity(sec(1.4));
    auto cmds = net.mme.evaluate(sec(1.5));
    REQUIRE(net.count(cmds, PolicyCommand::Kind::SwitchOff) == 1);
    REQUIRE(net.count(cmds, PolicyCommand::Kind::Handover) == 2);
    for (const auto& c : cmds) {
        if (c.kind == PolicyCommand::Kind::Handover) {
            CHECK(c.from == BsId{0});
            CHECK(c.to == 1); // next-nearest surviving BS
        }
    }
    net.mme.apply(cmds, sec(1.5));
    CHECK(net.world.bs(0).dev.is_off());
}

TEST_CASE("AlwaysOn with everyone on their nearest BS is a fixed point") {
    Net net({{0, 0}, {500, 500}}, {{10, 0}, {490, 500}}, PolicyKind::AlwaysOn);
    net.associate_nearest();
    CHECK(net.mme.evaluate(sec(0.5)).empty());
}

TEST_CASE("AlwaysOn reaches a fixed point after one handover per UE") {
    Net net({{0, 0}, {500, 500}}, {{10, 0}, {490, 500}}, PolicyKind::AlwaysOn);
    // Rig both UEs onto the wrong BS.
    net.mme.on_connection_established(0, 1, SimTime{});
    net.mme.on_connection_established(1, 0, SimTime{});
    auto cmds = net.mme.evaluate(sec(0.1));
    CHECK(net.count(cmds, PolicyCommand::Kind::Handover) == 2);
    net.mme.apply(cmds, sec(0.1));
    net.world.engine().run_until(sec(0.2)); // let the signaling complete
    CHECK(net.table.serving(0) == BsId{0});
    CHECK(net.table.serving(1) == BsId{1});
    CHECK(net.mme.evaluate(sec(0.2)).empty());
    CHECK(net.world.ue(0).handover_count == 1);
    CHECK(net.world.ue(1).handover_count == 1);
}

TEST_CASE("handover applies the signaling intervals to every party") {
    Net net({{0, 0}, {300, 0}}, {{10, 0}}, PolicyKind::AlwaysOn);
    net.associate_nearest();
    SimTime done = net.mme.handover(0, BsId{0}, 1, sec(1.0));
    CHECK(done == sec(1.01));
    net.world.engine().run_until(sec(2.0));
    net.world.finalize_nodes(sec(2.0));
    CHECK(net.table.serving(0) == BsId{1});

    const auto& ue = net.world.ue(0).dev.ledger();
    CHECK(ue.dwell_us(PhyState::RX_CTRL) == 5'000);
    CHECK(ue.dwell_us(PhyState::TX) == 5'000);
    // 0.175 W * 5 ms + 0.350 W * 5 ms = 2.625 mJ of signaling
    CHECK(ue.energy_nj(PhyState::RX_CTRL) + ue.energy_nj(PhyState::TX) == 2'625'000);

    CHECK(net.world.bs(1).dev.ledger().dwell_us(PhyState::RX_CTRL) == 10'000);
    CHECK(net.world.bs(0).dev.ledger().dwell_us(PhyState::RX_CTRL) == 5'000);
    CHECK(net.world.bs(1).dev.signaling_dwell_us() == 10'000);
}

TEST_CASE("handover to the current BS is a no-op with zero cost") {
    Net net({{0, 0}}, {{10, 0}}, PolicyKind::AlwaysOn);
    net.associate_nearest();
    SimTime done = net.mme.handover(0, BsId{0}, 0, sec(1.0));
    CHECK(done == sec(1.0));
    CHECK(net.mme.handover_count() == 0);
    net.world.engine().run_until(sec(2.0));
    net.world.finalize_nodes(sec(2.0));
    CHECK(net.world.ue(0).dev.ledger().dwell_us(PhyState::RX_CTRL) == 0);
}

TEST_CASE("ten handovers accumulate 10 * 2 * ho_ctrl of target RX_CTRL dwell") {
    std::vector<Position> ues;
    for (int i = 0; i < 10; ++i) ues.push_back({10.0 + i, 0.0});
    Net net({{0, 0}, {300, 0}}, ues, PolicyKind::AlwaysOn);
    net.associate_nearest();
    for (UeId u = 0; u < 10; ++u) net.mme.handover(u, BsId{0}, 1, sec(1.0));
    net.world.engine().run_until(sec(2.0));
    net.world.finalize_nodes(sec(2.0));
    CHECK(net.world.bs(1).dev.ledger().dwell_us(PhyState::RX_CTRL) == 10 * 10'000);
    CHECK(net.mme.handover_count() == 10);
}

TEST_CASE("handover to an OFF target is deferred") {
    Net net({{0, 0}, {300, 0}}, {{10, 0}}, PolicyKind::UeAware);
    net.associate_nearest();
    net.world.bs(1).dev.switch_off(sec(0.5));
    SimTime done = net.mme.handover(0, BsId{0}, 1, sec(1.0));
    CHECK(done == sec(1.0));
    CHECK(net.table.serving(0) == BsId{0});
    CHECK(net.mme.handover_count() == 0);
}

TEST_CASE("a random off-schedule keeps every window at exactly two seconds") {
    std::vector<Position> bss;
    for (int i = 0; i < 10; ++i) bss.push_back({i * 100.0, 0.0});
    Net net(bss, {}, PolicyKind::RandomOff);
    RandomSource rng(424242, 17);
    auto sched = net.mme.draw_random_schedule(rng);
    REQUIRE(sched.windows.size() == 10);
    for (const auto& w : sched.windows) {
        CHECK(w.off_at.us() % 1'000'000 == 0);
        CHECK(w.off_at.us() / 1'000'000 <= 8);
        CHECK((w.on_at - w.off_at) == sec(2.0));
        CHECK(w.on_at <= sec(10.0)); // fits an 11.24 s run
    }
}

TEST_CASE("an off-window turns the BS off for [X, X+2)") {
    Net net({{0, 0}, {300, 0}}, {{10, 0}}, PolicyKind::RandomOff);
    net.associate_nearest();
    RandomOffSchedule sched;
    sched.windows.push_back({0, sec(3.0), sec(5.0)});
    net.mme.apply_random_schedule(sched);
    net.world.engine().run_until(sec(11.24));
    net.world.finalize_nodes(sec(11.24));
    const auto& trace = net.world.bs(0).dev.ledger().trace();
    bool off_at_3 = false, on_at_5 = false;
    for (const auto& r : trace) {
        if (r.to == PhyState::OFF && r.at == sec(3.0)) off_at_3 = true;
        if (r.from == PhyState::OFF && r.at == sec(5.0)) on_at_5 = true;
    }
    CHECK(off_at_3);
    CHECK(on_at_5);
    CHECK(net.world.bs(0).dev.ledger().dwell_us(PhyState::OFF) == 2'000'000);
    // The attached UE was relocated at the window edge.
    CHECK(net.world.ue(0).handover_count == 1);
}

TEST_CASE("a window starting at t=0 precedes initial association") {
    Net net({{0, 0}, {300, 0}}, {{10, 0}}, PolicyKind::RandomOff);
    RandomOffSchedule sched;
    sched.windows.push_back({0, SimTime{}, sec(2.0)});
    net.mme.apply_random_schedule(sched); // applied immediately at t=0
    CHECK(net.world.bs(0).dev.is_off());
    net.associate_nearest(); // boots onto the live BS, no signaling
    CHECK(net.table.serving(0) == BsId{1});
    CHECK(net.mme.handover_count() == 0);
}

TEST_CASE("zero traffic drives every BS off within a tick of the threshold") {
    Net net({{0, 0}, {300, 0}}, {{10, 0}, {310, 0}}, PolicyKind::UeDataAware);
    net.associate_nearest();
    for (std::int64_t t_us = 0; t_us <= 2'000'000; t_us += 100'000) {
        net.world.engine().run_until(SimTime::from_us(t_us));
        net.mme.tick(SimTime::from_us(t_us));
    }
    CHECK(net.world.bs(0).dev.is_off());
    CHECK(net.world.bs(1).dev.is_off());
    CHECK(!net.table.serving(0).has_value()); // detached, nothing live
    CHECK(!net.table.serving(1).has_value());
    // Fixed point: no commands once everything sleeps.
    CHECK(net.mme.evaluate(sec(2.0)).empty());
    // Both went off exactly at the 1 s tick.
    for (const auto& d : net.mme.decision_log()) {
        if (d.command == "switch_off") CHECK(d.t_us == 1'000'000);
    }
}

TEST_CASE("tie-broken equidistant BSs do not flap") {
    Net net({{400, 500}, {600, 500}}, {{500, 500}}, PolicyKind::UeDataAware);
    net.associate_nearest();
    CHECK(net.table.serving(0) == BsId{0}); // lower id wins the tie
    for (int i = 1; i <= 20; ++i) {
        SimTime t = SimTime::from_us(i * 100'000);
        net.world.engine().run_until(t);
        net.world.ue(0).dev.note_data_activity(t); // stays active
        net.world.bs(0).dev.note_data_activity(t);
        net.mme.tick(t);
        REQUIRE(net.table.serving(0) == BsId{0});
    }
    CHECK(net.world.ue(0).handover_count == 0);
}

TEST_CASE("no UE stays associated with an OFF BS once a batch settles") {
    // Random windows plus a live tick chain; probe shortly after each
    // tick, past the handover completion horizon.
    Net net({{0, 0}, {300, 0}, {600, 0}}, {{10, 0}, {290, 0}, {610, 0}},
            PolicyKind::RandomOff);
    net.associate_nearest();
    RandomOffSchedule sched;
    sched.windows.push_back({0, sec(1.0), sec(3.0)});
    sched.windows.push_back({1, sec(2.0), sec(4.0)});
    sched.windows.push_back({2, sec(6.0), sec(8.0)});
    net.mme.apply_random_schedule(sched);
    auto& eng = net.world.engine();
    struct Tick {
        Net* net;
        void operator()() const {
            net->mme.tick(net->world.engine().now());
            SimTime next = net->world.engine().now() + SimTime::from_us(100'000);
            if (next <= sec(10.0)) {
                net->world.engine().schedule(next, EventKind::PolicyTick, Tick{*this});
            }
        }
    };
    struct Probe {
        Net* net;
        int* checks;
        void operator()() const {
            for (UeId u = 0; u < net->world.ue_count(); ++u) {
                auto s = net->table.serving(u);
                if (s) {
                    REQUIRE_FALSE(net->world.bs(*s).dev.is_off());
                    ++*checks;
                }
            }
            SimTime next = net->world.engine().now() + SimTime::from_us(100'000);
            if (next <= sec(10.0)) {
                net->world.engine().schedule(next, EventKind::SimEnd, Probe{*this});
            }
        }
    };
    int checks = 0;
    eng.schedule(SimTime{}, EventKind::PolicyTick, Tick{&net});
    // Probes at tick + 11 ms: past the 10 ms signaling completion.
    eng.schedule(SimTime::from_us(11'000), EventKind::SimEnd, Probe{&net, &checks});
    eng.run_until(sec(10.0));
    CHECK(checks > 50);
}

TEST_CASE("an untouched BS reaches deep sleep for exactly T minus the threshold") {
    RandomSource rng(8, 8);
    for (int round = 0; round < 20; ++round) {
        Engine eng;
        BsDevice bs(0, eng, bs_default_profile(), SimTime{}, sec(1.0));
        auto t = SimTime::from_us(
            1'000'001 + static_cast<std::int64_t>(rng.uniform_int(0, 20'000'000)));
        eng.run_until(t);
        bs.finalize(t);
        REQUIRE(bs.ledger().dwell_us(PhyState::IDLE) == 1'000'000);
        REQUIRE(bs.ledger().dwell_us(PhyState::DEEP_SLEEP) == t.us() - 1'000'000);
    }
}

TEST_CASE("a needy UE wakes its nearest OFF BS") {
    Net net({{0, 0}, {300, 0}}, {{10, 0}}, PolicyKind::UeDataAware);
    net.associate_nearest();
    // Let bs 1 switch off (empty) and bs 0 go idle-off, evicting the UE.
    for (std::int64_t t_us = 0; t_us <= 1'000'000; t_us += 100'000) {
        net.world.engine().run_until(SimTime::from_us(t_us));
        net.mme.tick(SimTime::from_us(t_us));
    }
    CHECK(net.world.bs(0).dev.is_off());
    CHECK(net.world.bs(1).dev.is_off());
    // Fresh data need at the UE: next tick switches bs 0 back on and
    // re-associates the UE in the same batch.
    net.world.engine().run_until(sec(1.1));
    net.world.ue(0).dev.note_data_activity(sec(1.1));
    auto cmds = net.mme.evaluate(sec(1.1));
    REQUIRE(net.count(cmds, PolicyCommand::Kind::SwitchOn) == 1);
    REQUIRE(net.count(cmds, PolicyCommand::Kind::Handover) == 1);
    net.mme.apply(cmds, sec(1.1));
    CHECK_FALSE(net.world.bs(0).dev.is_off());
    net.world.engine().run_until(sec(1.2));
    CHECK(net.table.serving(0) == BsId{0});
}
