#pragma once

#include "time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cellsim {

enum class EventKind {
    PacketArrival,
    PolicyTick,
    MobilityStep,
    DeepSleepTimer,
    OffWindowStart,
    OffWindowEnd,
    FlowStart,
    FlowStop,
    ServicePhase,
    HandoverPhase,
    SimEnd,
};

inline const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::PacketArrival: return "PacketArrival";
        case EventKind::PolicyTick: return "PolicyTick";
        case EventKind::MobilityStep: return "MobilityStep";
        case EventKind::DeepSleepTimer: return "DeepSleepTimer";
        case EventKind::OffWindowStart: return "OffWindowStart";
        case EventKind::OffWindowEnd: return "OffWindowEnd";
        case EventKind::FlowStart: return "FlowStart";
        case EventKind::FlowStop: return "FlowStop";
        case EventKind::ServicePhase: return "ServicePhase";
        case EventKind::HandoverPhase: return "HandoverPhase";
        case EventKind::SimEnd: return "SimEnd";
    }
    return "?";
}

/// Handle returned by Engine::schedule; pass to Engine::cancel.
struct EventHandle {
    std::uint64_t id = 0;
};

/// One line of the optional dispatch log: `t_us,kind,payload_summary`.
struct EventLogLine {
    std::int64_t t_us;
    EventKind kind;
    std::string payload;
};

/// Deterministic discrete-event kernel.
///
/// Events are dispatched in (fire_at, insertion seq) order, so two events
/// at the same instant fire in the order they were scheduled. A run owns
/// the engine and everything it touches; there is no shared state between
/// runs.
class Engine {
  public:
    using Callback = std::function<void()>;

    SimTime now() const { return clock_; }

    /// Schedules `fn` at `at`. Scheduling in the past is a programming
    /// error and throws.
    EventHandle schedule(SimTime at, EventKind kind, Callback fn, std::string payload = {}) {
        if (at < clock_) {
            throw std::logic_error("schedule: fire_at " + at.str() + " is before clock " +
                                   clock_.str());
        }
        std::uint64_t id = next_id_++;
        std::uint64_t seq = next_seq_++;
        pending_.emplace(id, Pending{at, kind, std::move(fn), std::move(payload)});
        queue_.push(QueueEntry{at, seq, id});
        return EventHandle{id};
    }

    /// True iff the event had not fired (or been cancelled) and now never
    /// will. Idempotent.
    bool cancel(EventHandle h) { return pending_.erase(h.id) > 0; }

    /// Dispatches every pending event with fire_at <= end, in order, and
    /// leaves the clock at `end`. Returns the number dispatched. An
    /// exception from a handler aborts the run with the event context
    /// attached.
    std::int64_t run_until(SimTime end) {
        if (running_) throw std::logic_error("run_until: engine already running");
        running_ = true;
        std::int64_t dispatched = 0;
        while (!queue_.empty() && queue_.top().at <= end) {
            QueueEntry entry = queue_.top();
            queue_.pop();
            auto it = pending_.find(entry.id);
            if (it == pending_.end()) continue; // cancelled
            Pending ev = std::move(it->second);
            pending_.erase(it);
            clock_ = entry.at;
            if (log_) log_->push_back({clock_.us(), ev.kind, ev.payload});
            try {
                ev.fn();
            } catch (const std::exception& e) {
                running_ = false;
                throw std::runtime_error("event " + std::string(to_string(ev.kind)) + " at " +
                                         clock_.str() + " failed: " + e.what());
            }
            ++dispatched;
        }
        clock_ = end;
        running_ = false;
        return dispatched;
    }

    /// Enables dispatch logging into `sink` (used by the determinism
    /// checks and `--emit-trace`).
    void set_event_log(std::vector<EventLogLine>* sink) { log_ = sink; }

  private:
    struct Pending {
        SimTime at;
        EventKind kind;
        Callback fn;
        std::string payload;
    };
    struct QueueEntry {
        SimTime at;
        std::uint64_t seq;
        std::uint64_t id;
        bool operator>(const QueueEntry& o) const {
            if (at != o.at) return at > o.at;
            return seq > o.seq;
        }
    };

    SimTime clock_;
    std::uint64_t next_id_ = 1;
    std::uint64_t next_seq_ = 0;
    bool running_ = false;
    std::unordered_map<std::uint64_t, Pending> pending_;
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue_;
    std::vector<EventLogLine>* log_ = nullptr;
};

} // namespace cellsim
