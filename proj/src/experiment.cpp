#include "sfqsim/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sfqsim/errors.hpp"
#include "yaml_util.hpp"

namespace sfqsim {

namespace {

SyntheticSpec parse_dataset(const yaml::Doc& doc, const YAML::Node& n) {
  doc.expect_map(n, "dataset");
  doc.only_keys(n, {"seed", "inputs", "samples_per_class", "classes", "active", "idle"});
  SyntheticSpec s;
  s.seed = static_cast<std::uint64_t>(doc.integer(doc.require(n, "seed")));
  s.inputs = doc.int_in(doc.require(n, "inputs"), 1, 4096);
  s.samples_per_class = doc.int_in(doc.require(n, "samples_per_class"), 0, 1'000'000);
  const YAML::Node classes = doc.require(n, "classes");
  doc.expect_seq(classes, "classes");
  for (const auto& c : classes) s.active.push_back(doc.ints(c, 0, s.inputs - 1));
  auto range = [&](const char* key, int& lo, int& hi) {
    const YAML::Node r = doc.require(n, key);
    const auto v = doc.ints(r, 0, 1'000'000);
    if (v.size() != 2 || v[0] > v[1]) doc.fail(r, std::string(key) + " must be [lo, hi] with lo <= hi");
    lo = v[0];
    hi = v[1];
  };
  range("active", s.active_lo, s.active_hi);
  range("idle", s.idle_lo, s.idle_hi);
  return s;
}

CellTiming parse_timing(const yaml::Doc& doc, const YAML::Node& n, CellTiming t) {
  if (!n) return t;
  doc.expect_map(n, "timing");
  for (const auto& kv : n) {
    const std::string key = doc.str(kv.first);
    SimTime* f = t.field(key);
    if (f == nullptr) doc.fail(kv.first, "unknown timing parameter '" + key + "'");
    *f = doc.ps(kv.second);
    if (*f < SimTime{}) doc.fail(kv.second, "timing '" + key + "' is negative");
  }
  return t;
}

NetworkConfig parse_network(const yaml::Doc& doc, const YAML::Node& n, int inputs) {
  doc.expect_map(n, "network");
  doc.only_keys(n, {"max_rate", "clock_period", "timing", "layers"});
  NetworkConfig cfg;
  cfg.inputs = inputs;
  cfg.max_rate = doc.int_in(doc.require(n, "max_rate"), 1, 1'000'000);
  NeuronConfig base;
  if (const YAML::Node v = n["clock_period"]) base.clock_period = doc.ps(v);
  base.timing = parse_timing(doc, n["timing"], base.timing);
  const YAML::Node layers = doc.require(n, "layers");
  doc.expect_seq(layers, "layers");
  for (const auto& l : layers) {
    doc.expect_map(l, "layer");
    doc.only_keys(l, {"max_threshold", "tau_capacity", "reload_on_fire", "group_wired", "clock_period", "timing",
                      "weights"});
    LayerConfig lc;
    lc.neuron = base;
    if (const YAML::Node v = l["max_threshold"]) lc.neuron.max_threshold = doc.int_in(v, 1, 1000);
    if (const YAML::Node v = l["tau_capacity"]) lc.neuron.tau_capacity = doc.int_in(v, 1, 1000);
    if (const YAML::Node v = l["reload_on_fire"]) lc.neuron.reload_on_fire = doc.boolean(v);
    if (const YAML::Node v = l["group_wired"]) lc.group_wired = doc.boolean(v);
    if (const YAML::Node v = l["clock_period"]) lc.neuron.clock_period = doc.ps(v);
    lc.neuron.timing = parse_timing(doc, l["timing"], lc.neuron.timing);
    const YAML::Node w = doc.require(l, "weights");
    doc.expect_seq(w, "weights");
    for (const auto& row : w) lc.synapses.weights.push_back(doc.ints(row, 0, 1000));
    lc.neuron_count = static_cast<int>(lc.synapses.weights.size());
    cfg.layers.push_back(std::move(lc));
  }
  try {
    cfg.finalize();
  } catch (const ConfigError& e) {
    doc.fail(n, e.what());
  }
  return cfg;
}

nlohmann::ordered_json refs(const std::vector<NeuronRef>& v) {
  auto a = nlohmann::ordered_json::array();
  for (const auto& r : v) a.push_back({r.layer, r.neuron});
  return a;
}

nlohmann::ordered_json run_json(const NetworkRunReport& r) {
  nlohmann::ordered_json j;
  j["thresholds"] = r.thresholds;
  j["correct"] = r.correct;
  j["accuracy"] = r.accuracy;
  j["dead"] = refs(r.dead);
  j["always_fire"] = refs(r.always_fire);
  j["predictions"] = r.predictions;
  j["fire_counts"] = r.fire_counts;
  return j;
}

}  // namespace

ExperimentSpec parse_experiment(const std::string& text, const std::string& file) {
  const yaml::Doc doc{file};
  const YAML::Node root = doc.load(text);
  doc.check_schema(root, std::string(kExperimentSchema));
  doc.only_keys(root, {"schema", "name", "dataset", "network", "candidates", "jobs"});
  ExperimentSpec s;
  s.name = root["name"] ? doc.str(root["name"]) : file;
  s.dataset = parse_dataset(doc, doc.require(root, "dataset"));
  s.network = parse_network(doc, doc.require(root, "network"), s.dataset.inputs);
  const YAML::Node c = doc.require(root, "candidates");
  doc.expect_seq(c, "candidates");
  if (c.size() == 0) doc.fail(c, "at least one candidate is required");
  for (const auto& cand : c) {
    s.candidates.push_back(doc.ints(cand, 1, 1000));
    if (s.candidates.back().size() != s.network.layers.size()) {
      doc.fail(cand, "a candidate needs one threshold per layer (" + std::to_string(s.network.layers.size()) + ")");
    }
  }
  if (const YAML::Node v = root["jobs"]) s.jobs = static_cast<unsigned>(doc.int_in(v, 1, 256));
  if (s.dataset.active.size() > s.network.layers.back().synapses.neurons()) {
    doc.fail(root["dataset"], "more classes than output neurons");
  }
  return s;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), path);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult r;
  r.name = spec.name;
  r.data = synthetic_dataset(spec.dataset);
  r.search = threshold_search(spec.network, r.data, spec.candidates, spec.jobs);
  for (const auto& l : spec.network.layers) r.baseline_thresholds.push_back(l.neuron.max_threshold);
  const auto it = std::find(spec.candidates.begin(), spec.candidates.end(), r.baseline_thresholds);
  if (it != spec.candidates.end()) {
    r.baseline = r.search.candidates[static_cast<std::size_t>(it - spec.candidates.begin())];
  } else {
    r.baseline = threshold_search(spec.network, r.data, {r.baseline_thresholds}).candidates.front();
  }
  for (const auto& d : r.baseline.dead) {
    if (!std::binary_search(r.best().dead.begin(), r.best().dead.end(), d)) r.revived.push_back(d);
  }
  return r;
}

std::string experiment_report_json(const ExperimentResult& r) {
  nlohmann::ordered_json j;
  j["schema"] = "sfqsim-experiment-report/1";
  j["name"] = r.name;
  j["samples"] = r.data.samples.size();
  j["classes"] = r.data.classes;
  j["best"] = {{"index", r.search.best},
               {"thresholds", r.best().thresholds},
               {"accuracy", r.best().accuracy}};
  j["baseline"] = {{"thresholds", r.baseline_thresholds}, {"accuracy", r.baseline.accuracy}};
  j["improved"] = r.best().accuracy > r.baseline.accuracy;
  j["revived"] = refs(r.revived);
  auto cands = nlohmann::ordered_json::array();
  for (const auto& c : r.search.candidates) cands.push_back(run_json(c));
  j["candidates"] = std::move(cands);
  return j.dump(2) + "\n";
}

}  // namespace sfqsim
