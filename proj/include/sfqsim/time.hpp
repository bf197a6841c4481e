#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace sfqsim {

// Simulation time in integer femtoseconds. All scheduling arithmetic stays in
// integers so traces are bit-reproducible.
struct SimTime {
  std::int64_t fs = 0;

  static constexpr SimTime from_fs(std::int64_t v) { return SimTime{v}; }
  static constexpr SimTime from_ps(std::int64_t v) { return SimTime{v * 1000}; }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime& operator+=(SimTime o) {
    fs += o.fs;
    return *this;
  }
  constexpr SimTime& operator-=(SimTime o) {
    fs -= o.fs;
    return *this;
  }
  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.fs + b.fs}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.fs - b.fs}; }
  friend constexpr SimTime operator*(SimTime a, std::int64_t k) { return SimTime{a.fs * k}; }
  friend constexpr SimTime operator*(std::int64_t k, SimTime a) { return SimTime{a.fs * k}; }
  friend constexpr SimTime operator/(SimTime a, std::int64_t k) { return SimTime{a.fs / k}; }
};

namespace literals {
constexpr SimTime operator""_fs(unsigned long long v) {
  return SimTime::from_fs(static_cast<std::int64_t>(v));
}
constexpr SimTime operator""_ps(unsigned long long v) {
  return SimTime::from_ps(static_cast<std::int64_t>(v));
}
}  // namespace literals

// Scales by (100 + percent) / 100, rounding half away from zero.
SimTime scale_percent(SimTime t, int percent);

// Multiplies by num/den and rounds up to the next whole femtosecond.
SimTime scale_ceil(SimTime t, std::int64_t num, std::int64_t den);

// Parses a decimal picosecond literal ("10", "333.333", "0.5") exactly into
// femtoseconds. More than three fractional digits is an error since it cannot
// be represented. Throws std::invalid_argument.
SimTime parse_ps(std::string_view text);

// Renders femtoseconds as picoseconds without trailing zeros ("333.333").
std::string format_ps(SimTime t);

}  // namespace sfqsim
