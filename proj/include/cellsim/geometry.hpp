#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

namespace cellsim {

using NodeId = std::uint32_t;
using BsId = NodeId;
using UeId = NodeId;

struct Position {
    double x = 0.0;
    double y = 0.0;
};

inline double distance_sq(Position a, Position b) {
    double dx = a.x - b.x;
    double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    bool contains(Position p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

/// BS minimizing Euclidean distance to `ue_pos`; equidistant candidates
/// resolve to the smallest id, so the result does not depend on the
/// order of `candidates`.
inline BsId nearest_bs(Position ue_pos, std::span<const std::pair<BsId, Position>> candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("nearest_bs: empty candidate set");
    }
    BsId best_id = candidates[0].first;
    double best_d2 = distance_sq(ue_pos, candidates[0].second);
    for (const auto& [id, pos] : candidates.subspan(1)) {
        double d2 = distance_sq(ue_pos, pos);
        if (d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
            best_id = id;
            best_d2 = d2;
        }
    }
    return best_id;
}

} // namespace cellsim
