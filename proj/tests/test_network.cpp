#include "doctest.h"

#include <random>

#include "sfqsim/errors.hpp"
#include "sfqsim/network.hpp"

using namespace sfqsim;
using namespace sfqsim::literals;

namespace {

LayerConfig layer_of(std::vector<std::vector<int>> weights, int max_rate, int t_max = 4) {
  LayerConfig cfg;
  cfg.neuron_count = static_cast<int>(weights.size());
  cfg.neuron.max_threshold = t_max;
  cfg.synapses.weights = std::move(weights);
  cfg.max_rate = max_rate;
  return cfg;
}

bool weighted_sum_fires(const std::vector<int>& w, const std::vector<int>& x, int threshold) {
  int sum = 0;
  for (std::size_t k = 0; k < w.size(); ++k) sum += w[k] * x[k];
  return sum >= threshold;
}

NetworkConfig two_layer_config() {
  NetworkConfig cfg;
  cfg.inputs = 4;
  cfg.max_rate = 3;
  LayerConfig l1 = layer_of({{1, 1, 0, 0}, {0, 0, 1, 1}}, 3);
  LayerConfig l2 = layer_of({{2, 0}, {0, 2}}, 1);
  l1.neuron.clock_period = l2.neuron.clock_period = 2000_ps;
  cfg.layers = {l1, l2};
  return cfg;
}

SyntheticSpec two_class_spec() {
  SyntheticSpec s;
  s.seed = 7;
  s.inputs = 4;
  s.samples_per_class = 10;
  s.active = {{0, 1}, {2, 3}};
  s.active_lo = 2;
  s.active_hi = 3;
  s.idle_lo = 0;
  s.idle_hi = 1;
  return s;
}

}  // namespace

TEST_CASE("layer fires exactly at the weighted-sum threshold") {
  Layer layer(layer_of({{1, 1, 1}}, 2));
  const std::vector<int> at{2, 1, 1};
  const std::vector<int> below{1, 1, 1};
  CHECK(layer.forward(at) == std::vector<int>{1});
  CHECK(layer.forward(below) == std::vector<int>{0});
}

TEST_CASE("weights replicate pulses") {
  Layer layer(layer_of({{3}, {2}, {1}, {0}}, 3));
  CHECK(layer.forward(std::vector<int>{3}) == std::vector<int>{2, 1, 0, 0});
  CHECK(layer.forward(std::vector<int>{2}) == std::vector<int>{1, 1, 0, 0});
  CHECK(layer.forward(std::vector<int>{0}) == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("rate overflow is a timing error") {
  Layer layer(layer_of({{1, 1}}, 2));
  CHECK_THROWS_AS(layer.forward(std::vector<int>{3, 0}), TimingError);
}

TEST_CASE("a period too short for the synapse load is a config error") {
  LayerConfig cfg = layer_of({{3, 3, 3}}, 3);
  cfg.neuron.clock_period = 300_ps;
  CHECK_THROWS_AS(build_layer(cfg), ConfigError);
}

TEST_CASE("fire indicators match weighted-sum arithmetic on small layers") {
  // Every weight row over 1..3 inputs with weights 0..3, packed four neurons
  // to a layer, at every reachable threshold, for every input with values 0..3.
  std::size_t mismatches = 0;
  for (int n = 1; n <= 3; ++n) {
    std::vector<std::vector<int>> rows;
    int combos = 1;
    for (int k = 0; k < n; ++k) combos *= 4;
    for (int c = 0; c < combos; ++c) {
      std::vector<int> row;
      for (int k = 0, v = c; k < n; ++k, v /= 4) row.push_back(v % 4);
      rows.push_back(row);
    }
    for (std::size_t start = 0; start < rows.size(); start += 4) {
      std::vector<std::vector<int>> w(rows.begin() + static_cast<std::ptrdiff_t>(start),
                                      rows.begin() + static_cast<std::ptrdiff_t>(std::min(start + 4, rows.size())));
      Layer layer(layer_of(w, 3));
      for (int threshold = 4; threshold >= 1; --threshold) {
        if (threshold < 4) layer.adjust_threshold(1);
        for (int xc = 0; xc < combos; ++xc) {
          std::vector<int> x;
          for (int k = 0, v = xc; k < n; ++k, v /= 4) x.push_back(v % 4);
          const auto out = layer.forward(x);
          for (std::size_t j = 0; j < w.size(); ++j) {
            if ((out[j] >= 1) != weighted_sum_fires(w[j], x, threshold)) ++mismatches;
          }
        }
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("adjust_threshold on a group-wired layer") {
  Layer layer(layer_of({{1, 1}, {2, 0}, {0, 3}}, 2));
  CHECK(layer.thresholds() == std::vector<int>{4, 4, 4});

  const std::size_t before = layer.trace().size();
  layer.adjust_threshold(0);
  CHECK(layer.trace().size() == before);

  layer.adjust_threshold(2);
  CHECK(layer.thresholds() == std::vector<int>{2, 2, 2});
  layer.adjust_threshold(1);
  CHECK(layer.thresholds() == std::vector<int>{1, 1, 1});

  const std::size_t events = layer.trace().size();
  CHECK_THROWS_AS(layer.adjust_threshold(1), ConfigError);
  CHECK(layer.trace().size() == events);
  CHECK_THROWS_AS(layer.adjust_threshold(-4), ConfigError);
  CHECK(layer.thresholds() == std::vector<int>{1, 1, 1});

  layer.adjust_threshold(-3);
  CHECK(layer.thresholds() == std::vector<int>{4, 4, 4});
}

TEST_CASE("per-neuron adjustment without group wiring") {
  LayerConfig cfg = layer_of({{1}, {1}}, 3);
  cfg.group_wired = false;
  Layer layer(cfg);
  CHECK_THROWS_AS(layer.adjust_threshold(1), ConfigError);
  layer.adjust_neuron_threshold(1, 2);
  CHECK(layer.thresholds() == std::vector<int>{4, 2});
  CHECK(layer.forward(std::vector<int>{2}) == std::vector<int>{0, 1});
}

TEST_CASE("property: lowering thresholds never reduces fire counts") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int m = 1 + static_cast<int>(rng() % 3);
    std::vector<std::vector<int>> w(static_cast<std::size_t>(m));
    for (auto& row : w) {
      for (int k = 0; k < n; ++k) row.push_back(static_cast<int>(rng() % 4));
    }
    Layer layer(layer_of(w, 3));
    std::vector<std::vector<int>> xs(6);
    for (auto& x : xs) {
      for (int k = 0; k < n; ++k) x.push_back(static_cast<int>(rng() % 4));
    }
    std::vector<std::vector<int>> prev;
    for (int step = 0; step < 4; ++step) {
      if (step > 0) layer.adjust_threshold(1);
      std::vector<std::vector<int>> cur;
      for (const auto& x : xs) cur.push_back(layer.forward(x));
      if (!prev.empty()) {
        for (std::size_t s = 0; s < xs.size(); ++s) {
          for (std::size_t j = 0; j < w.size(); ++j) CHECK(cur[s][j] >= prev[s][j]);
        }
      }
      prev = cur;
    }
  }
}

TEST_CASE("a dead neuron is revived by a reachable threshold decrease") {
  // Max weighted input 3 under threshold 4.
  Layer layer(layer_of({{1, 2}}, 1));
  const std::vector<std::vector<int>> xs{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  int fired = 0;
  for (const auto& x : xs) fired += layer.forward(x)[0];
  CHECK(fired == 0);
  layer.adjust_threshold(1);
  fired = 0;
  for (const auto& x : xs) fired += layer.forward(x)[0];
  CHECK(fired > 0);
}

TEST_CASE("predict breaks ties toward the lowest index") {
  CHECK(predict(std::vector<int>{0, 0}) == 0);
  CHECK(predict(std::vector<int>{1, 2, 2}) == 1);
  CHECK(predict(std::vector<int>{3, 1}) == 0);
}

TEST_CASE("synthetic dataset is seeded and in range") {
  const SyntheticSpec spec = two_class_spec();
  const Dataset a = synthetic_dataset(spec);
  const Dataset b = synthetic_dataset(spec);
  REQUIRE(a.samples.size() == 20);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].x == b.samples[i].x);
    const auto& s = a.samples[i];
    for (int k = 0; k < 4; ++k) {
      const bool active = (s.label == 0) == (k < 2);
      const int v = s.x[static_cast<std::size_t>(k)];
      CHECK(v >= (active ? 2 : 0));
      CHECK(v <= (active ? 3 : 1));
    }
  }
}

TEST_CASE("threshold search picks the lowered second layer") {
  const NetworkConfig cfg = two_layer_config();
  const Dataset data = synthetic_dataset(two_class_spec());
  const SearchResult r = threshold_search(cfg, data, {{4, 4}, {4, 2}});
  REQUIRE(r.candidates.size() == 2);
  CHECK(r.best == 1);
  CHECK(r.candidates[1].accuracy > r.candidates[0].accuracy);
  CHECK(r.candidates[1].accuracy == doctest::Approx(1.0));
  CHECK(r.candidates[0].accuracy == doctest::Approx(0.5));
  const std::vector<NeuronRef> dead_l2{{1, 0}, {1, 1}};
  CHECK(r.candidates[0].dead == dead_l2);
  CHECK(r.candidates[1].dead.empty());

  const SearchResult parallel = threshold_search(cfg, data, {{4, 4}, {4, 2}}, 4);
  CHECK(parallel.best == r.best);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(parallel.candidates[i].fire_counts == r.candidates[i].fire_counts);
    CHECK(parallel.candidates[i].correct == r.candidates[i].correct);
  }
}

TEST_CASE("threshold search edge cases") {
  const NetworkConfig cfg = two_layer_config();
  const Dataset data = synthetic_dataset(two_class_spec());
  const SearchResult single = threshold_search(cfg, data, {{4, 4}});
  CHECK(single.best == 0);
  CHECK(single.candidates.size() == 1);
  CHECK(single.candidates[0].thresholds == std::vector<int>{4, 4});

  // Equal accuracy keeps the first candidate.
  const SearchResult tie = threshold_search(cfg, data, {{4, 3}, {4, 4}});
  CHECK(tie.best == 0);

  SyntheticSpec one = two_class_spec();
  one.active = {{0, 1}};
  const Dataset one_class = synthetic_dataset(one);
  for (const auto& c : threshold_search(cfg, one_class, {{4, 4}, {3, 2}}).candidates) {
    CHECK(c.accuracy == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(threshold_search(cfg, data, {{4, 0}}), ConfigError);
  CHECK_THROWS_AS(threshold_search(cfg, data, {}), ConfigError);
}

TEST_CASE("network shape errors") {
  NetworkConfig cfg = two_layer_config();
  cfg.layers[1].synapses.weights = {{1, 1, 1}};
  cfg.layers[1].neuron_count = 1;
  CHECK_THROWS_AS(Network{cfg}, ConfigError);
  cfg = two_layer_config();
  cfg.layers[0].synapses.weights[0][0] = -1;
  CHECK_THROWS_AS(Network{cfg}, ConfigError);
}
