#pragma once

#include "engine.hpp"
#include "geometry.hpp"
#include "mobility.hpp"
#include "nodes.hpp"
#include "rng.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cellsim {

struct PendingPacket {
    std::int64_t bytes;
    SimTime arrived_at;
};

struct BsNode {
    BsId id;
    Position pos;
    BsDevice dev;

    BsNode(BsId id_, Position pos_, Engine& eng, const PowerProfile& prof, SimTime birth,
           SimTime ds_threshold)
        : id(id_), pos(pos_), dev(id_, eng, prof, birth, ds_threshold) {}
};

struct UeNode {
    UeId id;
    MobilitySpec mspec;
    MobilityState mob;
    UeDevice dev;

    bool in_service = false;        // a packet is on the air for this UE
    int service_refs = 0;           // queued + active services touching it
    std::optional<BsId> handover_target;
    SimTime handover_completion;
    std::vector<PendingPacket> pending; // held while the handover finishes
    std::int64_t handover_count = 0;

    UeNode(UeId id_, MobilitySpec spec, Position start, Engine& eng, const PowerProfile& prof,
           SimTime birth)
        : id(id_), mspec(spec), dev(id_, eng, prof, birth) {
        mob.pos = start;
        mob.t = birth;
        mob.next_heading_change = birth + spec.heading_change_period;
    }

    /// Mid-handover or with data service pending: not eligible for new
    /// policy commands this tick.
    bool busy() const { return handover_target.has_value() || service_refs > 0; }
};

/// Owns every mutable object of one simulation run: the event engine,
/// the per-concern random streams and the node population. Nodes live
/// behind stable pointers; ids are dense and double as indices.
class World {
  public:
    explicit World(std::uint64_t seed)
        : topology_rng_(make_stream(seed, StreamId::Topology)),
          mobility_rng_(make_stream(seed, StreamId::Mobility)),
          traffic_rng_(make_stream(seed, StreamId::Traffic)),
          policy_rng_(make_stream(seed, StreamId::Policy)) {}

    Engine& engine() { return engine_; }
    RandomSource& topology_rng() { return topology_rng_; }
    RandomSource& mobility_rng() { return mobility_rng_; }
    RandomSource& traffic_rng() { return traffic_rng_; }
    RandomSource& policy_rng() { return policy_rng_; }

    BsId add_bs(Position pos, const PowerProfile& prof, SimTime ds_threshold) {
        BsId id = static_cast<BsId>(bss_.size());
        bss_.push_back(
            std::make_unique<BsNode>(id, pos, engine_, prof, SimTime{}, ds_threshold));
        all_candidates_.push_back({id, pos});
        return id;
    }

    UeId add_ue(Position pos, const MobilitySpec& spec, const PowerProfile& prof) {
        UeId id = static_cast<UeId>(ues_.size());
        ues_.push_back(std::make_unique<UeNode>(id, spec, pos, engine_, prof, SimTime{}));
        return id;
    }

    std::size_t bs_count() const { return bss_.size(); }
    std::size_t ue_count() const { return ues_.size(); }

    BsNode& bs(BsId id) { return *bss_.at(id); }
    UeNode& ue(UeId id) { return *ues_.at(id); }
    const BsNode& bs(BsId id) const { return *bss_.at(id); }
    const UeNode& ue(UeId id) const { return *ues_.at(id); }

    /// All base stations regardless of power state (NearestBS of the
    /// switching logic ranges over every deployed BS).
    std::span<const std::pair<BsId, Position>> all_bs_candidates() const {
        return all_candidates_;
    }

    /// Base stations currently able to serve, optionally excluding one.
    std::vector<std::pair<BsId, Position>> on_bs_candidates(
        std::optional<BsId> exclude = std::nullopt) const {
        std::vector<std::pair<BsId, Position>> out;
        for (const auto& b : bss_) {
            if (b->dev.is_off()) continue;
            if (exclude && *exclude == b->id) continue;
            out.push_back({b->id, b->pos});
        }
        return out;
    }

    /// Advances every UE's walk to `to` (called from MobilityStep).
    void advance_mobility(SimTime to) {
        for (auto& u : ues_) {
            if (to > u->mob.t) {
                u->mob = step(u->mob, u->mspec, to - u->mob.t, mobility_rng_);
            }
        }
    }

    void finalize_nodes(SimTime at) {
        for (auto& b : bss_) b->dev.finalize(at);
        for (auto& u : ues_) u->dev.finalize(at);
    }

  private:
    Engine engine_;
    RandomSource topology_rng_;
    RandomSource mobility_rng_;
    RandomSource traffic_rng_;
    RandomSource policy_rng_;
    std::vector<std::unique_ptr<BsNode>> bss_;
    std::vector<std::unique_ptr<UeNode>> ues_;
    std::vector<std::pair<BsId, Position>> all_candidates_;
};

} // namespace cellsim
