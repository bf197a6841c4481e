#pragma once

#include <cstdint>
#include <compare>
#include <span>
#include <vector>

#include "sfqsim/event_kernel.hpp"
#include "sfqsim/neuron.hpp"

namespace sfqsim {

// Non-negative integer weights, one row per postsynaptic neuron. Every
// presynaptic pulse reaches neuron j's input k as weights[j][k] pulses.
struct SynapseMatrix {
  std::vector<std::vector<int>> weights;

  std::size_t neurons() const { return weights.size(); }
  std::size_t inputs() const { return weights.empty() ? 0 : weights.front().size(); }
  int max_weight() const;
};

struct LayerConfig {
  int neuron_count = 0;
  // Shared by every member; `inputs` is taken from the synapse matrix.
  NeuronConfig neuron;
  SynapseMatrix synapses;
  // Shared increment/decrement pins. Without it each neuron gets its own.
  bool group_wired = true;
  // Largest value any input carries in one cycle.
  int max_rate = 1;

  // Throws ConfigError on shape or weight problems.
  void check() const;
};

// One persistent netlist holding every neuron of a layer plus its synapse
// circuitry. Ports: rst, inc, dec, clk (or inc{j}/dec{j} without group
// wiring), x0..x{N-1}; outputs y0..y{m-1}.
class Layer {
 public:
  explicit Layer(LayerConfig config, SimulatorOptions options = {});

  const LayerConfig& config() const { return config_; }
  const CycleProtocol& protocol() const { return protocol_; }
  std::size_t size() const { return static_cast<std::size_t>(config_.neuron_count); }

  // Runs one cycle with x[k] pulses on input k and returns each neuron's
  // output pulse count. Throws TimingError on rate overflow.
  std::vector<int> forward(std::span<const int> x);

  // Positive delta lowers every member threshold by delta (increments).
  // Rejected with ConfigError before any pulse when a member would leave its
  // reachable threshold set. The next cycle's clock performs the reload.
  void adjust_threshold(int delta);
  // Per-neuron adjustment; only for layers without group wiring.
  void adjust_neuron_threshold(std::size_t neuron, int delta);

  int load(std::size_t neuron) const;
  int threshold(std::size_t neuron) const;
  std::vector<int> thresholds() const;

  // Pulses one pass can put on each output, for sizing the next layer.
  int max_output_rate() const;

  const Trace& trace() const { return sim_.trace(); }

 private:
  void pulse_pins(std::span<const WireId> pins, int count);

  LayerConfig config_;
  CycleProtocol protocol_;
  Simulator sim_;
  SimTime cursor_;
  std::vector<WireId> x_wires_;
  std::vector<WireId> y_wires_;
};

// Builds the layer netlist without simulating it. Also reports the protocol
// that accounts for the synapse and fan-out circuitry.
struct LayerNetlist {
  Netlist netlist;
  CycleProtocol protocol;
};
LayerNetlist build_layer(const LayerConfig& config);

struct NetworkConfig {
  int inputs = 0;
  int max_rate = 1;
  std::vector<LayerConfig> layers;

  // Fills each layer's max_rate from the previous layer and checks shapes.
  // Throws ConfigError.
  void finalize();
};

// Layers run back to back on a shared clock: the pulse counts a layer emits in
// one cycle are re-encoded as the next layer's inputs.
class Network {
 public:
  explicit Network(NetworkConfig config, SimulatorOptions options = {});

  const NetworkConfig& config() const { return config_; }
  std::size_t layer_count() const { return layers_.size(); }
  Layer& layer(std::size_t i) { return layers_.at(i); }
  const Layer& layer(std::size_t i) const { return layers_.at(i); }

  // Output counts of every layer for one sample.
  std::vector<std::vector<int>> forward(std::span<const int> x);

  // Moves each group-wired layer to the given adjusted threshold. Throws
  // ConfigError when a value is unreachable, before any pulse is sent.
  void set_thresholds(std::span<const int> per_layer);

 private:
  NetworkConfig config_;
  std::vector<Layer> layers_;
};

// Index of the largest count; ties, including all zeros, go to the lowest
// index.
int predict(std::span<const int> output_counts);

struct Sample {
  std::vector<int> x;
  int label = 0;
};

struct Dataset {
  int classes = 0;
  std::vector<Sample> samples;
};

struct NeuronRef {
  int layer = 0;
  int neuron = 0;
  friend auto operator<=>(const NeuronRef&, const NeuronRef&) = default;
};

struct NetworkRunReport {
  std::vector<int> thresholds;
  // [sample][layer][neuron] output pulse counts.
  std::vector<std::vector<std::vector<int>>> fire_counts;
  std::vector<int> predictions;
  std::vector<NeuronRef> dead;         // never fired on the set
  std::vector<NeuronRef> always_fire;  // fired on every sample
  int correct = 0;
  double accuracy = 0.0;
};

NetworkRunReport evaluate(Network& network, const Dataset& data);

struct SearchResult {
  std::size_t best = 0;
  std::vector<NetworkRunReport> candidates;
};

// Exhaustive search over per-layer threshold vectors. Each candidate runs on a
// freshly built network; the first candidate wins ties. `jobs` > 1 evaluates
// candidates on worker threads with identical results.
SearchResult threshold_search(const NetworkConfig& config, const Dataset& data,
                              const std::vector<std::vector<int>>& candidates, unsigned jobs = 1);

// Class-prototype generator: class c marks a subset of inputs active; active
// inputs draw from [active_lo, active_hi], the rest from [idle_lo, idle_hi].
struct SyntheticSpec {
  std::uint64_t seed = 1;
  int inputs = 0;
  int samples_per_class = 0;
  std::vector<std::vector<int>> active;  // per class
  int active_lo = 0, active_hi = 0;
  int idle_lo = 0, idle_hi = 0;

  void check() const;
};

Dataset synthetic_dataset(const SyntheticSpec& spec);

}  // namespace sfqsim
