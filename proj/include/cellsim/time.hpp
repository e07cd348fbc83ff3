#pragma once

#include <cstdint>
#include <cmath>
#include <compare>
#include <string>

namespace cellsim {

/// Simulation time as integer microseconds.
///
/// All schedule arithmetic is exact: summing microsecond steps over an
/// arbitrarily long run never drifts, and equality between computed
/// instants is meaningful. Convert to/from seconds only at the edges
/// (config parsing, report emission).
class SimTime {
  public:
    constexpr SimTime() = default;

    static constexpr SimTime from_us(std::int64_t us) { return SimTime(us); }

    /// Rounds to the nearest microsecond.
    static SimTime from_seconds(double s) {
        return SimTime(static_cast<std::int64_t>(std::llround(s * 1e6)));
    }

    constexpr std::int64_t us() const { return us_; }
    double seconds() const { return static_cast<double>(us_) * 1e-6; }

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(SimTime o) const { return SimTime(us_ + o.us_); }
    constexpr SimTime operator-(SimTime o) const { return SimTime(us_ - o.us_); }
    SimTime& operator+=(SimTime o) { us_ += o.us_; return *this; }

    std::string str() const { return std::to_string(us_) + "us"; }

  private:
    constexpr explicit SimTime(std::int64_t us) : us_(us) {}
    std::int64_t us_ = 0;
};

constexpr SimTime operator""_us(unsigned long long v) {
    return SimTime::from_us(static_cast<std::int64_t>(v));
}

} // namespace cellsim
