#pragma once

#include "power.hpp"
#include "time.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

/// One PHY state transition, as reported by the state-change trace sink.
/// Records are time-ordered (equal timestamps mark zero-length dwells)
/// and chain: the `to` of one record is the `from` of the next.
struct StateChangeRecord {
    SimTime at;
    PhyState from;
    PhyState to;
};

/// Per-node dwell-time and energy accounting.
///
/// The ledger is fed by notify_state_change and closes the final dwell
/// interval at finalize. Energy per state is accumulated incrementally,
/// interval by interval; recompute_from_trace() below reproduces the
/// same totals from the transition trace alone and serves as the
/// independent check on this path.
class EnergyLedger {
  public:
    EnergyLedger() = default;
    EnergyLedger(PowerProfile profile, PhyState initial, SimTime birth)
        : profile_(profile), birth_(birth), current_(initial), entered_at_(birth) {}

    PhyState current_state() const { return current_; }
    SimTime state_entered_at() const { return entered_at_; }
    SimTime birth() const { return birth_; }
    bool finalized() const { return finalized_; }
    const PowerProfile& profile() const { return profile_; }
    const std::vector<StateChangeRecord>& trace() const { return trace_; }

    std::int64_t dwell_us(PhyState s) const { return dwell_us_[static_cast<std::size_t>(s)]; }
    std::int64_t energy_nj(PhyState s) const { return energy_nj_[static_cast<std::size_t>(s)]; }

    std::int64_t total_dwell_us() const {
        std::int64_t sum = 0;
        for (auto v : dwell_us_) sum += v;
        return sum;
    }
    std::int64_t total_energy_nj() const {
        std::int64_t sum = 0;
        for (auto v : energy_nj_) sum += v;
        return sum;
    }

    /// Closes the dwell interval open since the last change and enters
    /// `to`. Self-transitions are allowed and leave totals unchanged.
    void notify_state_change(PhyState to, SimTime at) {
        if (finalized_) throw std::logic_error("state change after finalize");
        if (at < entered_at_) {
            throw std::logic_error("state change at " + at.str() + " precedes interval start " +
                                   entered_at_.str());
        }
        close_interval(at);
        trace_.push_back({at, current_, to});
        current_ = to;
        entered_at_ = at;
    }

    /// Closes the open interval at `at` and freezes the totals.
    void finalize(SimTime at) {
        if (finalized_) throw std::logic_error("ledger finalized twice");
        if (at < entered_at_) throw std::logic_error("finalize before last state change");
        close_interval(at);
        entered_at_ = at;
        finalized_ = true;
    }

  private:
    void close_interval(SimTime at) {
        std::int64_t us = (at - entered_at_).us();
        dwell_us_[static_cast<std::size_t>(current_)] += us;
        energy_nj_[static_cast<std::size_t>(current_)] += profile_.mw(current_) * us;
    }

    PowerProfile profile_;
    SimTime birth_;
    PhyState current_ = PhyState::IDLE;
    SimTime entered_at_;
    bool finalized_ = false;
    std::array<std::int64_t, kPhyStateCount> dwell_us_{};
    std::array<std::int64_t, kPhyStateCount> energy_nj_{};
    std::vector<StateChangeRecord> trace_;
};

/// Total energy in nanojoules recomputed by direct interval summation
/// over a transition trace, independent of the incremental ledger path.
///
/// `initial` is the state held from `birth` until the first record (or
/// until `end` for an empty trace). Malformed traces are rejected with
/// the offending record index.
inline std::int64_t recompute_from_trace(PhyState initial, SimTime birth,
                                         const std::vector<StateChangeRecord>& trace,
                                         const PowerProfile& profile, SimTime end) {
    std::int64_t total = 0;
    PhyState state = initial;
    SimTime from = birth;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& rec = trace[i];
        if (rec.at < from) {
            throw std::invalid_argument("trace record " + std::to_string(i) +
                                        ": time regression at " + rec.at.str());
        }
        if (rec.from != state) {
            throw std::invalid_argument("trace record " + std::to_string(i) +
                                        ": from-state does not chain");
        }
        total += profile.mw(state) * (rec.at - from).us();
        state = rec.to;
        from = rec.at;
    }
    if (end < from) throw std::invalid_argument("trace extends past recompute end");
    total += profile.mw(state) * (end - from).us();
    return total;
}

} // namespace cellsim
