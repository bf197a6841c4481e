#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sfqsim/scenario.hpp"

namespace sfqsim {

inline constexpr std::string_view kSweepSchema = "sfqsim-sweep/1";

// One-at-a-time timing sweep over a set of scenarios.
struct SweepSpec {
  std::string name;
  std::vector<Scenario> scenarios;
  std::vector<std::string> parameters;  // defaults to every CellTiming field
  int range_percent = 30;
  int step_percent = 5;
  std::vector<int> flag_percents{25, 20};
  unsigned jobs = 1;

  void check() const;
};

// Scenario paths are resolved relative to the spec file.
SweepSpec parse_sweep_spec(const std::string& text, const std::string& file);
SweepSpec load_sweep_spec(const std::string& path);

struct SweepPoint {
  int percent = 0;
  bool passed = false;
  std::string reason;  // first failure, empty on pass
};

struct ParameterMargin {
  std::string name;
  std::vector<SweepPoint> points;
  // Widest symmetric range [-m, +m] on the grid where every point passes.
  int margin_percent = 0;
};

struct SweepReport {
  std::string name;
  std::vector<std::string> scenarios;
  int range_percent = 0;
  int step_percent = 0;
  std::vector<int> flag_percents;
  std::vector<ParameterMargin> parameters;

  // Parameters whose margin falls below `percent`.
  std::vector<std::string> below(int percent) const;
};

// A point passes when every scenario runs without a diagnostic, meets its own
// expectations and shows the nominal sequence of observed pulses in every
// step window. Neuron scenarios keep the nominal stimulus schedule. Throws
// SimulationError when a scenario fails at nominal timing.
SweepReport run_sweep(const SweepSpec& spec);

std::string sweep_report_json(const SweepReport& report);
void print_sweep_table(std::ostream& os, const SweepReport& report);

}  // namespace sfqsim
