#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cellsim {

/// PHY activity states. UEs use the first four; base stations use all
/// six. DEEP_SLEEP is entered automatically after a sustained idle
/// period, OFF only through an explicit switch-off command.
enum class PhyState : std::uint8_t {
    IDLE = 0,
    RX_CTRL = 1,
    RX_DATA = 2,
    TX = 3,
    DEEP_SLEEP = 4,
    OFF = 5,
};

inline constexpr std::size_t kPhyStateCount = 6;

inline const char* to_string(PhyState s) {
    switch (s) {
        case PhyState::IDLE: return "IDLE";
        case PhyState::RX_CTRL: return "RX_CTRL";
        case PhyState::RX_DATA: return "RX_DATA";
        case PhyState::TX: return "TX";
        case PhyState::DEEP_SLEEP: return "DEEP_SLEEP";
        case PhyState::OFF: return "OFF";
    }
    return "?";
}

inline PhyState phy_state_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kPhyStateCount; ++i) {
        auto st = static_cast<PhyState>(i);
        if (s == to_string(st)) return st;
    }
    throw std::invalid_argument("unknown PHY state: " + s);
}

/// Per-state power draw in integer milliwatts.
///
/// Energy is accounted as milliwatts x microseconds = nanojoules, all in
/// 64-bit integers, so ledger totals and trace recomputations compare
/// with == rather than a tolerance. Profile resolution is 1 mW.
struct PowerProfile {
    std::array<std::int64_t, kPhyStateCount> milliwatts{};

    std::int64_t mw(PhyState s) const { return milliwatts[static_cast<std::size_t>(s)]; }

    void set_watts(PhyState s, double watts) {
        if (watts < 0.0) throw std::invalid_argument("power must be nonnegative");
        milliwatts[static_cast<std::size_t>(s)] = std::llround(watts * 1e3);
    }
    double watts(PhyState s) const { return static_cast<double>(mw(s)) * 1e-3; }
};

/// UE draw: IDLE 45 mW, RX_CTRL 175 mW, RX_DATA 350 mW, TX 350 mW.
inline PowerProfile ue_default_profile() {
    PowerProfile p;
    p.milliwatts = {45, 175, 350, 350, 0, 0};
    return p;
}

/// BS draw: IDLE 86.3 W, RX_CTRL/RX_DATA 138.9 W, TX 742.2 W,
/// DEEP_SLEEP 6.2 W, OFF 0 W.
inline PowerProfile bs_default_profile() {
    PowerProfile p;
    p.milliwatts = {86'300, 138'900, 138'900, 742'200, 6'200, 0};
    return p;
}

} // namespace cellsim
