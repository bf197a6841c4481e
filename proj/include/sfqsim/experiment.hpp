#pragma once

#include <string>
#include <vector>

#include "sfqsim/network.hpp"

namespace sfqsim {

inline constexpr std::string_view kExperimentSchema = "sfqsim-experiment/1";

struct ExperimentSpec {
  std::string name;
  SyntheticSpec dataset;
  NetworkConfig network;
  std::vector<std::vector<int>> candidates;
  unsigned jobs = 1;
};

ExperimentSpec parse_experiment(const std::string& text, const std::string& file);
ExperimentSpec load_experiment(const std::string& path);

struct ExperimentResult {
  std::string name;
  Dataset data;
  SearchResult search;
  // Every layer at its maximum threshold.
  std::vector<int> baseline_thresholds;
  NetworkRunReport baseline;
  // Dead at baseline, firing under the selected candidate.
  std::vector<NeuronRef> revived;

  const NetworkRunReport& best() const { return search.candidates[search.best]; }
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

std::string experiment_report_json(const ExperimentResult& result);

}  // namespace sfqsim
