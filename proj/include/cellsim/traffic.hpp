#pragma once

#include "connection.hpp"
#include "world.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cellsim {

/// One downlink constant-bitrate application flow.
struct FlowSpec {
    UeId ue = 0;
    std::int64_t packet_bytes = 1000;
    SimTime interval = SimTime::from_us(20'000);
    SimTime start;
    SimTime stop;

    void validate(std::size_t ue_count) const {
        if (ue >= ue_count) throw std::invalid_argument("flow references unknown ue");
        if (packet_bytes <= 0) throw std::invalid_argument("flow packet_bytes must be > 0");
        if (interval.us() <= 0) throw std::invalid_argument("flow interval must be > 0");
        if (start.us() < 0) throw std::invalid_argument("flow start must be >= 0");
        if (stop < start) throw std::invalid_argument("flow stop precedes start");
    }
};

/// Abstract radio service: an effective air rate plus a fixed per-packet
/// control exchange preceding the data, spent in RX_CTRL on both ends.
struct ServiceModel {
    std::int64_t data_rate_bps = 100'000'000;
    SimTime ctrl_overhead = SimTime::from_us(200);

    /// Air time for `bytes`, rounded up to the microsecond tick.
    SimTime airtime(std::int64_t bytes) const {
        if (data_rate_bps <= 0) throw std::invalid_argument("data rate must be > 0");
        std::int64_t numerator = bytes * 8 * 1'000'000;
        return SimTime::from_us((numerator + data_rate_bps - 1) / data_rate_bps);
    }
};

/// Downlink packet pipeline: flow emission, the packet -> PHY-interval
/// mapping on both ends of the link, and the drop accounting.
class TrafficModel {
  public:
    TrafficModel(World& world, ConnectionTable& table, ServiceModel service)
        : world_(world), table_(table), service_(service) {}

    const ServiceModel& service() const { return service_; }
    std::int64_t drops() const { return drops_; }
    std::int64_t packets_served() const { return served_; }

    /// Schedules the flow's packet arrivals: start, start + i*interval,
    /// for every instant <= stop.
    void emit_packets(const FlowSpec& flow) {
        flow.validate(world_.ue_count());
        world_.engine().schedule(
            flow.start, EventKind::PacketArrival,
            [this, flow] { on_arrival(flow, flow.start); },
            "ue=" + std::to_string(flow.ue));
    }

    /// Routes one packet for `ue`: held while a handover is in flight,
    /// dropped when no live serving BS exists, otherwise served.
    void deliver(UeId ue, std::int64_t bytes, SimTime at) {
        UeNode& u = world_.ue(ue);
        if (u.handover_target) {
            u.pending.push_back({bytes, at});
            return;
        }
        auto serving = table_.serving(ue);
        if (!serving) {
            ++drops_;
            return;
        }
        if (world_.bs(*serving).dev.is_off()) {
            // Association to an OFF BS should never survive a tick; the
            // packet is rejected and counted rather than silently lost.
            ++drops_;
            ++unreachable_reports_;
            return;
        }
        serve_packet(*serving, ue, bytes, at);
    }

    /// Maps one packet onto PHY intervals: RX_CTRL on both ends for the
    /// control overhead, then BS TX / UE RX_DATA for the air time.
    /// Returns the completion instant (services on one BS run FIFO).
    SimTime serve_packet(BsId bs, UeId ue, std::int64_t bytes, SimTime at) {
        BsNode& b = world_.bs(bs);
        UeNode& u = world_.ue(ue);
        if (b.dev.is_off()) {
            throw std::logic_error("serve_packet through OFF bs " + std::to_string(bs));
        }
        SimTime start = b.dev.earliest_free(at);
        SimTime completion = start + service_.ctrl_overhead + service_.airtime(bytes);
        ++u.service_refs;

        RadioActivity act;
        act.phases.push_back({PhyState::RX_CTRL, service_.ctrl_overhead, [&u](SimTime t) {
                                  u.in_service = true;
                                  u.dev.set_state(PhyState::RX_CTRL, t);
                              }});
        act.phases.push_back({PhyState::TX, service_.airtime(bytes),
                              [&u](SimTime t) { u.dev.set_state(PhyState::RX_DATA, t); }});
        act.on_complete = [this, &b, &u](SimTime t) {
            u.in_service = false;
            --u.service_refs;
            u.dev.set_state(PhyState::IDLE, t);
            b.dev.note_data_activity(t);
            u.dev.note_data_activity(t);
            ++served_;
        };
        act.on_abort = [this, &u](SimTime t) {
            ++drops_;
            --u.service_refs;
            if (u.in_service) {
                u.in_service = false;
                u.dev.set_state(PhyState::IDLE, t);
            }
        };
        b.dev.enqueue(std::move(act), at);
        return completion;
    }

  private:
    void on_arrival(const FlowSpec& flow, SimTime at) {
        deliver(flow.ue, flow.packet_bytes, at);
        SimTime next = at + flow.interval;
        if (next <= flow.stop) {
            world_.engine().schedule(
                next, EventKind::PacketArrival, [this, flow, next] { on_arrival(flow, next); },
                "ue=" + std::to_string(flow.ue));
        }
    }

    World& world_;
    ConnectionTable& table_;
    ServiceModel service_;
    std::int64_t drops_ = 0;
    std::int64_t served_ = 0;
    std::int64_t unreachable_reports_ = 0;
};

} // namespace cellsim
