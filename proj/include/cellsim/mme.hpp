#pragma once

#include "connection.hpp"
#include "traffic.hpp"
#include "world.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

enum class PolicyKind { AlwaysOn, RandomOff, UeAware, UeDataAware };

inline const char* policy_name(PolicyKind p) {
    switch (p) {
        case PolicyKind::AlwaysOn: return "always_on";
        case PolicyKind::RandomOff: return "random_off";
        case PolicyKind::UeAware: return "ue_aware";
        case PolicyKind::UeDataAware: return "ue_data_aware";
    }
    return "?";
}

inline PolicyKind policy_from_string(const std::string& s) {
    if (s == "always_on") return PolicyKind::AlwaysOn;
    if (s == "random_off") return PolicyKind::RandomOff;
    if (s == "ue_aware") return PolicyKind::UeAware;
    if (s == "ue_data_aware") return PolicyKind::UeDataAware;
    throw std::invalid_argument("unknown policy: " + s);
}

/// One switching decision produced by an evaluation pass.
struct PolicyCommand {
    enum class Kind { SwitchOff, SwitchOn, Handover };
    Kind kind = Kind::SwitchOff;
    BsId bs = 0;                 // SwitchOff / SwitchOn
    UeId ue = 0;                 // Handover
    std::optional<BsId> from;    // Handover; empty = re-association
    BsId to = 0;                 // Handover

    static PolicyCommand switch_off(BsId bs) { return {Kind::SwitchOff, bs, 0, {}, 0}; }
    static PolicyCommand switch_on(BsId bs) { return {Kind::SwitchOn, bs, 0, {}, 0}; }
    static PolicyCommand handover(UeId ue, std::optional<BsId> from, BsId to) {
        return {Kind::Handover, 0, ue, from, to};
    }
};

/// Per-BS sleep window of the random switching policy: off at X seconds
/// for exactly two seconds, X drawn once per BS as an integer in [0, 8].
struct RandomOffSchedule {
    struct Window {
        BsId bs;
        SimTime off_at;
        SimTime on_at;
    };
    std::vector<Window> windows;
};

inline constexpr std::int64_t kOffWindowSeconds = 2;
inline constexpr std::int64_t kOffStartMaxSeconds = 8;

/// Audit record: `t_us,command,args`.
struct DecisionRecord {
    std::int64_t t_us;
    std::string command;
    std::string args;
};

/// The policy-augmented mobility management entity, hosted at the (always
/// on, control-plane only) LTE anchor. Tracks attachments through the
/// connection callbacks, runs the switching logic on every policy tick
/// and executes the resulting commands, including the handover signaling
/// bursts.
class SmartMme {
  public:
    SmartMme(World& world, ConnectionTable& table, TrafficModel& traffic, PolicyKind policy,
             SimTime idle_off_threshold, SimTime ho_ctrl_time)
        : world_(world),
          table_(table),
          traffic_(traffic),
          policy_(policy),
          idle_off_(idle_off_threshold),
          ho_ctrl_(ho_ctrl_time) {}

    PolicyKind policy() const { return policy_; }
    const std::vector<DecisionRecord>& decision_log() const { return log_; }
    std::int64_t handover_count() const { return handovers_; }

    /// Connection-established callback. Attaching to an OFF BS is a
    /// policy bug and throws.
    void on_connection_established(UeId ue, BsId bs, SimTime at) {
        if (world_.bs(bs).dev.is_off()) {
            throw std::logic_error("connect to OFF bs " + std::to_string(bs));
        }
        table_.connect(ue, bs, at);
    }

    /// One pass of the switching logic over the registry. Returns the
    /// command batch; commands are ordered switch-on, switch-off,
    /// handover, which is also the application order.
    std::vector<PolicyCommand> evaluate(SimTime now) {
        std::vector<PolicyCommand> ons, offs, hos;
        std::vector<char> planned_on(world_.bs_count(), 0);
        std::vector<char> planned_off(world_.bs_count(), 0);
        const bool aware = policy_ == PolicyKind::UeAware || policy_ == PolicyKind::UeDataAware;

        if (aware) {
            // Wake an OFF BS that has become the nearest one for a UE
            // with pending need. Computed before the switch-off rules so
            // a BS that is both wanted and idle resolves to staying on.
            for (BsId b = 0; b < world_.bs_count(); ++b) {
                if (!world_.bs(b).dev.is_off()) continue;
                for (UeId u = 0; u < world_.ue_count(); ++u) {
                    if (!needy(u, now)) continue;
                    if (nearest_bs(world_.ue(u).mob.pos, world_.all_bs_candidates()) == b) {
                        planned_on[b] = 1;
                        ons.push_back(PolicyCommand::switch_on(b));
                        break;
                    }
                }
            }
            for (BsId b = 0; b < world_.bs_count(); ++b) {
                BsNode& bs = world_.bs(b);
                if (bs.dev.is_off() || planned_on[b] || bs.dev.busy()) continue;
                if (table_.count(b) == 0) {
                    planned_off[b] = 1;
                    offs.push_back(PolicyCommand::switch_off(b));
                } else if (policy_ == PolicyKind::UeDataAware && bs.dev.idle_time(now) >= idle_off_) {
                    planned_off[b] = 1;
                    offs.push_back(PolicyCommand::switch_off(b));
                }
            }
        }

        // Serving set this batch leaves on: handover targets come from it.
        std::vector<std::pair<BsId, Position>> live;
        for (BsId b = 0; b < world_.bs_count(); ++b) {
            bool on = (!world_.bs(b).dev.is_off() || planned_on[b]) && !planned_off[b];
            if (on) live.push_back({b, world_.bs(b).pos});
        }

        for (UeId uid = 0; uid < world_.ue_count(); ++uid) {
            UeNode& u = world_.ue(uid);
            if (u.busy()) continue;
            auto serving = table_.serving(uid);
            if (serving) {
                BsId target;
                if (planned_off[*serving]) {
                    // Evicted by a switch-off: relocate to the nearest
                    // surviving BS, or detach at application when none.
                    if (live.empty()) continue;
                    target = nearest_bs(u.mob.pos, live);
                } else {
                    BsId want = nearest_bs(u.mob.pos, world_.all_bs_candidates());
                    if (want == *serving) continue;
                    if (live.empty()) continue;
                    target = nearest_bs(u.mob.pos, live);
                    if (target == *serving) continue;
                }
                hos.push_back(PolicyCommand::handover(uid, serving, target));
            } else if (!live.empty()) {
                // Detached UE with a live cell available: re-associate.
                hos.push_back(PolicyCommand::handover(uid, std::nullopt, nearest_bs(u.mob.pos, live)));
            }
        }

        std::vector<PolicyCommand> batch = std::move(ons);
        batch.insert(batch.end(), offs.begin(), offs.end());
        batch.insert(batch.end(), hos.begin(), hos.end());
        return batch;
    }

    /// Applies a command batch; stale commands are re-validated here.
    void apply(const std::vector<PolicyCommand>& batch, SimTime now) {
        std::set<UeId> relocating;
        for (const auto& c : batch) {
            if (c.kind == PolicyCommand::Kind::Handover) relocating.insert(c.ue);
        }
        for (const auto& c : batch) {
            switch (c.kind) {
                case PolicyCommand::Kind::SwitchOn:
                    if (!world_.bs(c.bs).dev.is_off()) break;
                    world_.bs(c.bs).dev.switch_on(now);
                    log(now, "switch_on", "bs=" + std::to_string(c.bs));
                    break;
                case PolicyCommand::Kind::SwitchOff: {
                    BsNode& b = world_.bs(c.bs);
                    if (b.dev.is_off()) break;
                    b.dev.switch_off(now);
                    log(now, "switch_off", "bs=" + std::to_string(c.bs));
                    // UEs with no relocation command detach now; nobody
                    // stays associated with an OFF BS.
                    auto attached = table_.connected(c.bs);
                    for (UeId u : attached) {
                        if (relocating.count(u) || world_.ue(u).handover_target) continue;
                        table_.disconnect(u, now);
                    }
                    break;
                }
                case PolicyCommand::Kind::Handover:
                    handover(c.ue, c.from, c.to, now);
                    break;
            }
        }
        table_.verify();
    }

    /// Runs evaluate-and-apply; scheduled on every policy tick.
    void tick(SimTime now) { apply(evaluate(now), now); }

    /// Transfers `ue` to `to_bs` with the control signaling applied to
    /// every involved party: the UE receives control then transmits (one
    /// ho_ctrl each), the target listens for the full exchange, the
    /// source (when still on) for the first half. The registry flips at
    /// completion; packets arriving meanwhile are held and resume via
    /// the target.
    SimTime handover(UeId ue, std::optional<BsId> from, BsId to, SimTime at) {
        if (from && *from == to) return at; // no-op, zero cost
        BsNode& target = world_.bs(to);
        if (target.dev.is_off()) {
            log(at, "handover_deferred", "ue=" + std::to_string(ue) + " to=" + std::to_string(to));
            return at;
        }
        UeNode& u = world_.ue(ue);
        if (u.busy()) return at; // stale command; next tick retries
        SimTime completion = at + ho_ctrl_ + ho_ctrl_;
        u.handover_target = to;
        u.handover_completion = completion;
        ++u.handover_count;
        ++handovers_;
        log(at, "handover",
            "ue=" + std::to_string(ue) +
                " from=" + (from ? std::to_string(*from) : std::string("-")) +
                " to=" + std::to_string(to));

        std::string tag = "ue=" + std::to_string(ue);
        u.dev.set_state(PhyState::RX_CTRL, at);
        world_.engine().schedule(
            at + ho_ctrl_, EventKind::HandoverPhase,
            [&u, this] { u.dev.set_state(PhyState::TX, world_.engine().now()); }, tag);
        world_.engine().schedule(
            completion, EventKind::HandoverPhase, [&u, this] { complete_handover(u); }, tag);

        RadioActivity to_sig;
        to_sig.signaling = true;
        to_sig.phases.push_back({PhyState::RX_CTRL, ho_ctrl_ + ho_ctrl_, nullptr});
        target.dev.enqueue(std::move(to_sig), at);

        if (from && !world_.bs(*from).dev.is_off()) {
            RadioActivity from_sig;
            from_sig.signaling = true;
            from_sig.phases.push_back({PhyState::RX_CTRL, ho_ctrl_, nullptr});
            world_.bs(*from).dev.enqueue(std::move(from_sig), at);
        }
        return completion;
    }

    /// Draws one off-window per BS from the policy stream.
    RandomOffSchedule draw_random_schedule(RandomSource& rng) const {
        RandomOffSchedule sched;
        for (BsId b = 0; b < world_.bs_count(); ++b) {
            auto x = static_cast<std::int64_t>(rng.uniform_int(0, kOffStartMaxSeconds));
            sched.windows.push_back({b, SimTime::from_us(x * 1'000'000),
                                     SimTime::from_us((x + kOffWindowSeconds) * 1'000'000)});
        }
        return sched;
    }

    /// Schedules the window edges. A window starting at t=0 is applied
    /// immediately so initial association already sees that BS as off.
    void apply_random_schedule(const RandomOffSchedule& schedule) {
        if (policy_ != PolicyKind::RandomOff) {
            throw std::logic_error("random schedule requires the random_off policy");
        }
        for (const auto& w : schedule.windows) {
            std::string tag = "bs=" + std::to_string(w.bs);
            if (w.off_at == world_.engine().now()) {
                window_start(w.bs, w.off_at);
            } else {
                world_.engine().schedule(
                    w.off_at, EventKind::OffWindowStart,
                    [this, bs = w.bs] { window_start(bs, world_.engine().now()); }, tag);
            }
            world_.engine().schedule(
                w.on_at, EventKind::OffWindowEnd,
                [this, bs = w.bs] { window_end(bs, world_.engine().now()); }, tag);
        }
    }

  private:
    void window_start(BsId bs, SimTime at) {
        BsNode& b = world_.bs(bs);
        if (b.dev.is_off()) return;
        auto live = world_.on_bs_candidates(bs);
        std::vector<UeId> attached(table_.connected(bs).begin(), table_.connected(bs).end());
        b.dev.switch_off(at); // aborts in-flight service; drops are counted
        log(at, "switch_off", "bs=" + std::to_string(bs));
        for (UeId uid : attached) {
            UeNode& u = world_.ue(uid);
            if (u.handover_target) continue; // completion re-validates
            if (live.empty()) {
                table_.disconnect(uid, at);
            } else {
                handover(uid, bs, nearest_bs(u.mob.pos, live), at);
            }
        }
        table_.verify();
    }

    void window_end(BsId bs, SimTime at) {
        world_.bs(bs).dev.switch_on(at);
        log(at, "switch_on", "bs=" + std::to_string(bs));
    }

    /// Registry flip at handover completion; the target may have gone
    /// off meanwhile, in which case the UE is left detached for the next
    /// tick to re-home.
    void complete_handover(UeNode& u) {
        SimTime now = world_.engine().now();
        BsId to = *u.handover_target;
        u.handover_target.reset();
        u.dev.set_state(PhyState::IDLE, now);
        table_.disconnect(u.id, now);
        if (!world_.bs(to).dev.is_off()) {
            table_.connect(u.id, to, now);
        }
        auto held = std::move(u.pending);
        u.pending.clear();
        for (const auto& p : held) traffic_.deliver(u.id, p.bytes, now);
    }

    bool needy(UeId ue, SimTime now) const {
        const UeNode& u = world_.ue(ue);
        return !u.pending.empty() || u.dev.idle_time(now) < idle_off_;
    }

    void log(SimTime at, std::string command, std::string args) {
        log_.push_back({at.us(), std::move(command), std::move(args)});
    }

    World& world_;
    ConnectionTable& table_;
    TrafficModel& traffic_;
    PolicyKind policy_;
    SimTime idle_off_;
    SimTime ho_ctrl_;
    std::vector<DecisionRecord> log_;
    std::int64_t handovers_ = 0;
};

} // namespace cellsim
