#include "sfqsim/timing.hpp"

namespace sfqsim {

SimTime* CellTiming::field(std::string_view name) {
  if (name == "delay") return &delay;
  if (name == "splitter_delay") return &splitter_delay;
  if (name == "merger_delay") return &merger_delay;
  if (name == "merger_dead_time") return &merger_dead_time;
  if (name == "and_delay") return &and_delay;
  if (name == "and_window") return &and_window;
  if (name == "rtff_delay") return &rtff_delay;
  if (name == "mndro_delay") return &mndro_delay;
  if (name == "mndro_interval") return &mndro_interval;
  if (name == "comp_delay") {
    if (!comp_delay) comp_delay = arbiter_comp_delay();
    return &*comp_delay;
  }
  return nullptr;
}

}  // namespace sfqsim
