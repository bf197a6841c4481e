#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "sfqsim/time.hpp"

namespace sfqsim {

// Behavioral cell timings shared by every builder. Defaults put one full
// capacity reload (M-NDRO readout -> arbiter -> TU) at 40 ps.
struct CellTiming {
  SimTime delay = SimTime::from_ps(5);
  SimTime splitter_delay = SimTime::from_ps(5);
  SimTime merger_delay = SimTime::from_ps(7);
  SimTime merger_dead_time = SimTime::from_ps(6);
  SimTime and_delay = SimTime::from_ps(7);
  SimTime and_window = SimTime::from_ps(6);
  SimTime rtff_delay = SimTime::from_ps(6);
  SimTime mndro_delay = SimTime::from_ps(1);
  SimTime mndro_interval = SimTime::from_ps(10);
  // Arbiter recovery delay; unset means and_window + merger_delay + 1 ps.
  std::optional<SimTime> comp_delay;

  SimTime arbiter_comp_delay() const {
    return comp_delay ? *comp_delay : and_window + merger_delay + SimTime::from_ps(1);
  }

  // Named access used by config files and the margin sweep. Returns nullptr
  // for unknown names. "comp_delay" materializes the derived default.
  SimTime* field(std::string_view name);

  static constexpr std::array<std::string_view, 10> kParameters = {
      "delay",        "splitter_delay", "merger_delay", "merger_dead_time", "and_delay",
      "and_window",   "rtff_delay",     "mndro_delay",  "mndro_interval",   "comp_delay"};
};

}  // namespace sfqsim
