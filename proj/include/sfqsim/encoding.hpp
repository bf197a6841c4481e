#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sfqsim/time.hpp"

namespace sfqsim {

// Per-input pulse times produced by encode_input.
struct PulseSchedule {
  std::vector<std::vector<SimTime>> per_input;

  std::size_t total() const;
  // Smallest gap between any two pulses once all inputs are merged onto one
  // wire; nullopt with fewer than two pulses.
  std::optional<SimTime> min_merged_spacing() const;
};

// Rate coding with time-division lanes: the window is split into one lane per
// input and a value v on input k becomes v pulses evenly spaced inside lane k,
// starting at the lane's left edge. Throws TimingError when a value exceeds
// max_rate (rate overflow) or is negative.
PulseSchedule encode_input(std::span<const int> x, SimTime window_start, SimTime window, int max_rate);

}  // namespace sfqsim
