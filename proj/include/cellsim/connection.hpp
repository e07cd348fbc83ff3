#pragma once

#include "geometry.hpp"
#include "time.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsim {

/// SmartMME's registry of UE attachments, updated from the
/// connection-oriented callbacks. Keeps the BS->UEs and UE->BS views
/// mutually consistent and integrates per-BS connected-UE counts over
/// time for the report's time-weighted averages.
class ConnectionTable {
  public:
    ConnectionTable(std::size_t bs_count, std::size_t ue_count, SimTime start)
        : ues_of_(bs_count),
          serving_(ue_count),
          conn_integral_us_(bs_count, 0),
          last_change_(bs_count, start) {}

    std::optional<BsId> serving(UeId ue) const { return serving_.at(ue); }
    const std::set<UeId>& connected(BsId bs) const { return ues_of_.at(bs); }
    std::size_t count(BsId bs) const { return ues_of_.at(bs).size(); }

    void connect(UeId ue, BsId bs, SimTime at) {
        disconnect(ue, at);
        integrate(bs, at);
        ues_of_.at(bs).insert(ue);
        serving_.at(ue) = bs;
    }

    void disconnect(UeId ue, SimTime at) {
        auto& s = serving_.at(ue);
        if (!s) return;
        integrate(*s, at);
        ues_of_.at(*s).erase(ue);
        s.reset();
    }

    /// Bidirectional-consistency check, run after every command batch.
    void verify() const {
        for (BsId b = 0; b < ues_of_.size(); ++b) {
            for (UeId u : ues_of_[b]) {
                if (!serving_.at(u) || *serving_.at(u) != b) {
                    throw std::logic_error("connection table inconsistent: ue " +
                                           std::to_string(u) + " listed under bs " +
                                           std::to_string(b));
                }
            }
        }
        for (UeId u = 0; u < serving_.size(); ++u) {
            if (serving_[u] && ues_of_.at(*serving_[u]).count(u) == 0) {
                throw std::logic_error("connection table inconsistent: ue " + std::to_string(u) +
                                       " not listed under its serving bs");
            }
        }
    }

    void finalize(SimTime at) {
        for (BsId b = 0; b < ues_of_.size(); ++b) integrate(b, at);
    }

    /// Integral of |connected UEs| over time, in UE-microseconds.
    std::int64_t conn_integral_us(BsId bs) const { return conn_integral_us_.at(bs); }

  private:
    void integrate(BsId bs, SimTime at) {
        conn_integral_us_[bs] +=
            static_cast<std::int64_t>(ues_of_[bs].size()) * (at - last_change_[bs]).us();
        last_change_[bs] = at;
    }

    std::vector<std::set<UeId>> ues_of_;
    std::vector<std::optional<BsId>> serving_;
    std::vector<std::int64_t> conn_integral_us_;
    std::vector<SimTime> last_change_;
};

} // namespace cellsim
