#include "sfqsim/encoding.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "sfqsim/errors.hpp"

namespace sfqsim {

std::size_t PulseSchedule::total() const {
  std::size_t n = 0;
  for (const auto& p : per_input) n += p.size();
  return n;
}

std::optional<SimTime> PulseSchedule::min_merged_spacing() const {
  std::vector<SimTime> all;
  for (const auto& p : per_input) all.insert(all.end(), p.begin(), p.end());
  if (all.size() < 2) return std::nullopt;
  std::sort(all.begin(), all.end());
  SimTime best = all[1] - all[0];
  for (std::size_t i = 2; i < all.size(); ++i) best = std::min(best, all[i] - all[i - 1]);
  return best;
}

PulseSchedule encode_input(std::span<const int> x, SimTime window_start, SimTime window, int max_rate) {
  PulseSchedule s;
  s.per_input.resize(x.size());
  if (x.empty()) return s;
  const SimTime lane = window / static_cast<std::int64_t>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const int v = x[k];
    if (v < 0) throw TimingError("negative rate on input " + std::to_string(k));
    if (v > max_rate) {
      throw TimingError("rate overflow on input " + std::to_string(k) + ": " + std::to_string(v) +
                        " pulses exceeds max rate " + std::to_string(max_rate));
    }
    const SimTime lane_start = window_start + lane * static_cast<std::int64_t>(k);
    for (int j = 0; j < v; ++j) s.per_input[k].push_back(lane_start + (lane / v) * j);
  }
  return s;
}

}  // namespace sfqsim
