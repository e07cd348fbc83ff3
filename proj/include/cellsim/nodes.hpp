#pragma once

#include "energy.hpp"
#include "engine.hpp"
#include "geometry.hpp"
#include "power.hpp"
#include "time.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

/// Radio-bearing node: PHY state machine plus energy ledger plus the
/// data-activity clock consumed by the switching policy.
class RadioDevice {
  public:
    RadioDevice(NodeId id, Engine& engine, PowerProfile profile, SimTime birth)
        : id_(id), engine_(&engine), ledger_(profile, PhyState::IDLE, birth) {}

    NodeId id() const { return id_; }
    PhyState state() const { return ledger_.current_state(); }
    const EnergyLedger& ledger() const { return ledger_; }
    Engine& engine() { return *engine_; }

    void note_data_activity(SimTime at) { last_data_activity_ = at; }

    /// Time since the last data activity; nodes that never saw data are
    /// idle since birth.
    SimTime idle_time(SimTime now) const {
        return now - last_data_activity_.value_or(ledger_.birth());
    }

    virtual void set_state(PhyState to, SimTime at) { ledger_.notify_state_change(to, at); }

    void finalize(SimTime at) { ledger_.finalize(at); }

    virtual ~RadioDevice() = default;

  protected:
    EnergyLedger& mutable_ledger() { return ledger_; }

  private:
    NodeId id_;
    Engine* engine_;
    EnergyLedger ledger_;
    std::optional<SimTime> last_data_activity_;
};

class UeDevice final : public RadioDevice {
  public:
    UeDevice(UeId id, Engine& engine, PowerProfile profile, SimTime birth)
        : RadioDevice(id, engine, profile, birth) {}

    void set_state(PhyState to, SimTime at) override {
        if (to == PhyState::DEEP_SLEEP || to == PhyState::OFF) {
            throw std::logic_error("UE has no " + std::string(to_string(to)) + " state");
        }
        RadioDevice::set_state(to, at);
    }
};

/// One phase of a radio activity: hold `state` for `duration`.
struct RadioPhase {
    PhyState state;
    SimTime duration;
    std::function<void(SimTime)> on_start; // optional peer-side coupling
};

/// A multi-phase radio activity executed by a BS (a packet service or a
/// handover signaling burst). Activities on one BS run FIFO.
struct RadioActivity {
    std::vector<RadioPhase> phases;
    bool signaling = false;
    std::function<void(SimTime)> on_complete;
    std::function<void(SimTime)> on_abort;
};

/// Base-station device.
///
/// Automatically drops into DEEP_SLEEP after `deep_sleep_threshold` of
/// uninterrupted IDLE, serializes radio activities FIFO, and honors
/// explicit switch-off/switch-on commands. While OFF it performs no
/// radio activity and draws the OFF profile power (0 W by default).
class BsDevice final : public RadioDevice {
  public:
    BsDevice(BsId id, Engine& engine, PowerProfile profile, SimTime birth,
             SimTime deep_sleep_threshold)
        : RadioDevice(id, engine, profile, birth), ds_threshold_(deep_sleep_threshold) {
        arm_deep_sleep_timer(birth);
    }

    bool is_off() const { return state() == PhyState::OFF; }
    bool busy() const { return active_.has_value() || !queue_.empty(); }

    /// Dwell spent in handover signaling (RX_CTRL), kept apart from data
    /// control time so reports can attribute RX_CTRL energy.
    std::int64_t signaling_dwell_us() const { return signaling_dwell_us_; }

    /// Earliest instant a new activity could start if enqueued at `at`.
    SimTime earliest_free(SimTime at) const { return std::max(at, busy_until_); }

    void set_state(PhyState to, SimTime at) override {
        PhyState from = state();
        if (from == PhyState::IDLE) cancel_deep_sleep_timer();
        RadioDevice::set_state(to, at);
        if (to == PhyState::IDLE) arm_deep_sleep_timer(at);
    }

    /// Queues a radio activity; starts immediately if the radio is free.
    void enqueue(RadioActivity activity, SimTime at) {
        if (is_off()) throw std::logic_error("radio activity on OFF BS " + std::to_string(id()));
        SimTime start = earliest_free(at);
        busy_until_ = start;
        for (const auto& ph : activity.phases) busy_until_ += ph.duration;
        queue_.push_back(std::move(activity));
        if (!active_) start_next(at);
    }

    /// OFF via the normal state-change path; pending deep-sleep timer is
    /// cancelled and any in-flight or queued activity is aborted.
    /// Idempotent: switching off an OFF BS is a no-op.
    void switch_off(SimTime at) {
        if (is_off()) return;
        abort_all(at);
        set_state(PhyState::OFF, at);
        busy_until_ = at;
    }

    /// OFF -> IDLE; re-enters the deep-sleep countdown. No-op on a BS
    /// that is not OFF.
    void switch_on(SimTime at) {
        if (!is_off()) return;
        set_state(PhyState::IDLE, at);
        busy_until_ = at;
    }

  private:
    void arm_deep_sleep_timer(SimTime at) {
        ds_timer_ = engine().schedule(
            at + ds_threshold_, EventKind::DeepSleepTimer,
            [this] {
                ds_timer_.reset();
                set_state(PhyState::DEEP_SLEEP, engine().now());
            },
            "bs=" + std::to_string(id()));
    }

    void cancel_deep_sleep_timer() {
        if (ds_timer_) {
            engine().cancel(*ds_timer_);
            ds_timer_.reset();
        }
    }

    void start_next(SimTime at) {
        active_ = std::move(queue_.front());
        queue_.pop_front();
        phase_idx_ = 0;
        begin_phase(at);
    }

    void begin_phase(SimTime at) {
        RadioPhase& ph = active_->phases[phase_idx_];
        set_state(ph.state, at);
        phase_started_at_ = at;
        if (ph.on_start) ph.on_start(at);
        phase_event_ = engine().schedule(
            at + ph.duration, EventKind::ServicePhase, [this] { end_phase(engine().now()); },
            "bs=" + std::to_string(id()));
    }

    void end_phase(SimTime at) {
        phase_event_.reset();
        if (active_->signaling) signaling_dwell_us_ += (at - phase_started_at_).us();
        ++phase_idx_;
        if (phase_idx_ < active_->phases.size()) {
            begin_phase(at);
            return;
        }
        RadioActivity done = std::move(*active_);
        active_.reset();
        if (done.on_complete) done.on_complete(at);
        if (!active_) { // the callback may have enqueued and started work
            if (!queue_.empty()) {
                start_next(at);
            } else if (!is_off()) {
                set_state(PhyState::IDLE, at);
            }
        }
    }

    void abort_all(SimTime at) {
        if (phase_event_) {
            engine().cancel(*phase_event_);
            phase_event_.reset();
        }
        if (active_) {
            if (active_->signaling) signaling_dwell_us_ += (at - phase_started_at_).us();
            RadioActivity cut = std::move(*active_);
            active_.reset();
            if (cut.on_abort) cut.on_abort(at);
        }
        std::deque<RadioActivity> dropped;
        dropped.swap(queue_);
        for (auto& a : dropped) {
            if (a.on_abort) a.on_abort(at);
        }
    }

    SimTime ds_threshold_;
    std::optional<EventHandle> ds_timer_;
    std::optional<RadioActivity> active_;
    std::size_t phase_idx_ = 0;
    SimTime phase_started_at_;
    std::optional<EventHandle> phase_event_;
    std::deque<RadioActivity> queue_;
    SimTime busy_until_;
    std::int64_t signaling_dwell_us_ = 0;
};

} // namespace cellsim
