#pragma once

#include "geometry.hpp"
#include "rng.hpp"
#include "time.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace cellsim {

enum class MobilityKind { ConstantPosition, RandomWalk2D };

struct MobilitySpec {
    MobilityKind kind = MobilityKind::ConstantPosition;
    double speed = 0.0;                                // m/s, RandomWalk2D only
    SimTime heading_change_period = SimTime::from_us(1'000'000); // RandomWalk2D only
    Rect bounds;
};

struct MobilityState {
    Position pos;
    double heading = 0.0; // radians
    SimTime t;            // walk time this state is valid at
    SimTime next_heading_change;
};

namespace detail {

/// Advances `pos` by `dist` meters along `heading`, folding the path back
/// into `bounds` at each wall crossing. Returns the heading of the final
/// segment.
inline double move_reflecting(Position& pos, double heading, double dist, const Rect& bounds) {
    double dx = std::cos(heading);
    double dy = std::sin(heading);
    while (dist > 0.0) {
        double tx = dx > 0.0   ? (bounds.x_max - pos.x) / dx
                    : dx < 0.0 ? (bounds.x_min - pos.x) / dx
                               : std::numeric_limits<double>::infinity();
        double ty = dy > 0.0   ? (bounds.y_max - pos.y) / dy
                    : dy < 0.0 ? (bounds.y_min - pos.y) / dy
                               : std::numeric_limits<double>::infinity();
        if (tx < 0.0) tx = 0.0;
        if (ty < 0.0) ty = 0.0;
        double t = std::min({tx, ty, dist});
        pos.x += dx * t;
        pos.y += dy * t;
        dist -= t;
        if (dist <= 0.0) break;
        if (t == tx) dx = -dx;
        if (t == ty) dy = -dy;
    }
    return std::atan2(dy, dx);
}

} // namespace detail

/// Advances a mobility state by `dt`.
///
/// ConstantPosition nodes only accumulate walk time. RandomWalk2D nodes
/// move speed*dt along the current heading, rebounding off the area
/// bounds, and resample the heading uniformly in [0, 2pi) whenever the
/// heading-change instant is reached inside the step.
inline MobilityState step(MobilityState state, const MobilitySpec& spec, SimTime dt,
                          RandomSource& rng) {
    SimTime end = state.t + dt;
    if (spec.kind == MobilityKind::ConstantPosition) {
        state.t = end;
        return state;
    }
    while (state.t < end) {
        SimTime seg_end = std::min(end, state.next_heading_change);
        if (seg_end > state.t) {
            double seg_s = (seg_end - state.t).seconds();
            state.heading =
                detail::move_reflecting(state.pos, state.heading, spec.speed * seg_s, spec.bounds);
            state.t = seg_end;
        }
        if (state.t == state.next_heading_change) {
            state.heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
            state.next_heading_change += spec.heading_change_period;
        }
    }
    return state;
}

/// `n` independent uniform placements over `bounds`, drawn x-then-y from
/// the topology stream.
inline std::vector<Position> place_uniform(std::size_t n, const Rect& bounds, RandomSource& rng) {
    std::vector<Position> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = rng.uniform(bounds.x_min, bounds.x_max);
        double y = rng.uniform(bounds.y_min, bounds.y_max);
        out.push_back({x, y});
    }
    return out;
}

} // namespace cellsim
