#include "sfqsim/network.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "sfqsim/encoding.hpp"
#include "sfqsim/errors.hpp"

namespace sfqsim {

namespace {

std::string idx(std::string_view base, std::size_t i) { return std::string(base) + std::to_string(i); }

// Output pulses one cycle can produce from `n` inputs at the given load.
int max_fires(const NeuronConfig& cfg, int load, int n) {
  const int t = cfg.max_threshold;
  if (!cfg.reload_on_fire) return (load + n) / t;
  int count = load;
  int fires = 0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) ++count;
    while (count >= t) {
      count -= t;
      ++fires;
      count += load;
    }
  }
  return fires;
}

int layer_max_output_rate(const LayerConfig& cfg) {
  int best = 0;
  for (const auto& row : cfg.synapses.weights) {
    int n = 0;
    for (int w : row) n += w * cfg.max_rate;
    best = std::max(best, max_fires(cfg.neuron, cfg.neuron.max_load(), n));
  }
  return best;
}

}  // namespace

int SynapseMatrix::max_weight() const {
  int best = 0;
  for (const auto& row : weights) {
    for (int w : row) best = std::max(best, w);
  }
  return best;
}

void LayerConfig::check() const {
  if (neuron_count < 1) throw ConfigError("a layer needs at least one neuron");
  if (synapses.neurons() != static_cast<std::size_t>(neuron_count)) {
    throw ConfigError("synapse matrix has " + std::to_string(synapses.neurons()) + " rows for " +
                      std::to_string(neuron_count) + " neurons");
  }
  const std::size_t n = synapses.inputs();
  if (n == 0) throw ConfigError("synapse matrix has no inputs");
  for (const auto& row : synapses.weights) {
    if (row.size() != n) throw ConfigError("synapse matrix rows differ in length");
    for (int w : row) {
      if (w < 0) throw ConfigError("negative weight " + std::to_string(w));
    }
  }
  if (max_rate < 1) throw ConfigError("layer max rate must be positive");
  neuron.check();
}

LayerNetlist build_layer(const LayerConfig& cfg) {
  cfg.check();
  const std::size_t m = static_cast<std::size_t>(cfg.neuron_count);
  const std::size_t n = cfg.synapses.inputs();
  NeuronConfig ncfg = cfg.neuron;
  ncfg.inputs = static_cast<int>(n);
  const CellTiming& t = ncfg.timing;
  const SimTime sd = t.splitter_delay;
  const SimTime md = t.merger_delay;
  const MergerCell merger{md, t.merger_dead_time, {}};

  // Replicas of one synaptic pulse leave a tapped delay line `rep` apart,
  // which must satisfy the neuron's own input spacing.
  const SimTime spacing = cycle_protocol(ncfg).min_input_spacing;
  const SimTime line = std::max(spacing - sd, SimTime::from_ps(1));
  const SimTime rep = sd + line;
  const int w_max = cfg.synapses.max_weight();
  const int depth_max = w_max > 0 ? tree_depth(static_cast<std::size_t>(w_max)) : 0;

  const SimTime fan = sd * tree_depth(m);
  const SimTime latency = fan + sd + md * depth_max;
  const SimTime span = w_max > 0 ? rep * (w_max - 1) : SimTime{};
  LayerNetlist out{Netlist{}, cycle_protocol(ncfg, latency, span, fan)};
  const CycleProtocol& pr = out.protocol;

  const SimTime pitch = pr.input_window() / static_cast<std::int64_t>(n) / cfg.max_rate;
  if (w_max > 0 && pitch < rep * w_max) {
    throw ConfigError("clock period " + format_ps(pr.period) + " ps is too short for " + std::to_string(n) +
                      " inputs at rate " + std::to_string(cfg.max_rate) + " with weight " + std::to_string(w_max) +
                      " (pulse pitch " + format_ps(pitch) + " ps, needs " + format_ps(rep * w_max) + " ps)");
  }

  Netlist& nl = out.netlist;
  const WireId rst = nl.add_input("rst");
  std::vector<WireId> inc, dec;
  if (cfg.group_wired) {
    inc.push_back(nl.add_input("inc"));
    dec.push_back(nl.add_input("dec"));
  } else {
    for (std::size_t j = 0; j < m; ++j) inc.push_back(nl.add_input(idx("inc", j)));
    for (std::size_t j = 0; j < m; ++j) dec.push_back(nl.add_input(idx("dec", j)));
  }
  const WireId clk = nl.add_input("clk");
  std::vector<WireId> x;
  for (std::size_t k = 0; k < n; ++k) x.push_back(nl.add_input(idx("x", k)));
  std::vector<WireId> y;
  for (std::size_t j = 0; j < m; ++j) {
    y.push_back(nl.add_wire(idx("y", j)));
    nl.mark_output(y.back());
  }

  const auto rst_leaves = add_fanout(nl, rst, m, "rst.fan", sd);
  const auto clk_leaves = add_fanout(nl, clk, m, "clk.fan", sd);
  std::vector<WireId> inc_leaves = inc, dec_leaves = dec;
  if (cfg.group_wired) {
    inc_leaves = add_fanout(nl, inc[0], m, "inc.fan", sd);
    dec_leaves = add_fanout(nl, dec[0], m, "dec.fan", sd);
  }
  std::vector<std::vector<WireId>> x_leaves;
  for (std::size_t k = 0; k < n; ++k) x_leaves.push_back(add_fanout(nl, x[k], m, idx("x", k) + ".fan", sd));

  for (std::size_t j = 0; j < m; ++j) {
    const std::string p = idx("n", j) + ".";
    NeuronWires w;
    w.rst = rst_leaves[j];
    w.clk = clk_leaves[j];
    w.inc = inc_leaves[j];
    w.dec = dec_leaves[j];
    w.out = y[j];
    for (std::size_t k = 0; k < n; ++k) {
      const int weight = cfg.synapses.weights[j][k];
      const std::string sp = p + idx("syn", k);
      const WireId src = x_leaves[k][j];
      if (weight == 0) {
        // Tied off: an input nobody drives.
        w.inputs.push_back(nl.add_input(sp + ".off"));
        continue;
      }
      if (weight == 1) {
        const WireId o = nl.add_wire(sp + ".out");
        nl.add_cell(sp + ".delay", DelayCell{sd + md * depth_max}, {src}, {o});
        w.inputs.push_back(o);
        continue;
      }
      std::vector<WireId> taps;
      WireId cur = src;
      for (int i = 0; i < weight; ++i) {
        const std::string si = std::to_string(i);
        taps.push_back(nl.add_wire(sp + ".tap" + si));
        const WireId next = i + 1 < weight ? nl.add_wire(sp + ".chain" + si) : kNoWire;
        nl.add_cell(sp + ".split" + si, SplitterCell{sd}, {cur}, {taps.back(), next});
        if (next != kNoWire) {
          cur = nl.add_wire(sp + ".line" + si);
          nl.add_cell(sp + ".line" + si, DelayCell{line}, {next}, {cur});
        }
      }
      WireId root = add_merge_tree(nl, taps, sp + ".merge", merger);
      const int pad = depth_max - tree_depth(static_cast<std::size_t>(weight));
      if (pad > 0) {
        const WireId o = nl.add_wire(sp + ".out");
        nl.add_cell(sp + ".pad", DelayCell{md * pad}, {root}, {o});
        root = o;
      }
      w.inputs.push_back(root);
    }
    add_neuron(nl, ncfg, p, w);
  }

  const auto diags = validate(nl);
  if (!diags.empty()) {
    std::string msg = "layer netlist failed validation:";
    for (const auto& d : diags) msg += "\n  " + d.message;
    throw ConfigError(msg);
  }
  return out;
}

Layer::Layer(LayerConfig config, SimulatorOptions options) : config_(std::move(config)), sim_([&] {
  LayerNetlist built = build_layer(config_);
  protocol_ = built.protocol;
  return Simulator(std::move(built.netlist), options);
}()) {
  const Netlist& nl = sim_.netlist();
  for (std::size_t k = 0; k < config_.synapses.inputs(); ++k) x_wires_.push_back(nl.wire(idx("x", k)));
  for (std::size_t j = 0; j < size(); ++j) y_wires_.push_back(nl.wire(idx("y", j)));
}

std::vector<int> Layer::forward(std::span<const int> x) {
  if (x.size() != x_wires_.size()) {
    throw TimingError("layer expects " + std::to_string(x_wires_.size()) + " inputs, got " +
                      std::to_string(x.size()));
  }
  const PulseSchedule s = encode_input(x, protocol_.input_open, protocol_.input_window(), config_.max_rate);
  const Netlist& nl = sim_.netlist();
  const SimTime start = cursor_;
  sim_.schedule(nl.wire("rst"), start);
  sim_.schedule(nl.wire("clk"), start + protocol_.clock_at);
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (SimTime off : s.per_input[k]) sim_.schedule(x_wires_[k], start + off);
  }
  const SimTime end = start + protocol_.period;
  const Trace seg = sim_.run_until(end - SimTime::from_fs(1));
  if (sim_.pending() != 0) {
    throw TimingError("layer activity continues past the end of the cycle at " + format_ps(end) + " ps");
  }
  cursor_ = end;
  std::vector<int> counts(size(), 0);
  for (const auto& e : seg.events) {
    for (std::size_t j = 0; j < y_wires_.size(); ++j) {
      if (e.wire == y_wires_[j]) ++counts[j];
    }
  }
  return counts;
}

void Layer::pulse_pins(std::span<const WireId> pins, int count) {
  for (WireId pin : pins) {
    for (int i = 0; i < count; ++i) sim_.schedule(pin, cursor_ + protocol_.adjust_spacing * i);
  }
  const SimTime span = protocol_.adjust_spacing * count + protocol_.adjust_settle;
  sim_.run_until(cursor_ + span - SimTime::from_fs(1));
  if (sim_.pending() != 0) throw TimingError("threshold adjustment did not settle");
  cursor_ += span;
}

void Layer::adjust_threshold(int delta) {
  if (!config_.group_wired) throw ConfigError("layer threshold adjustment needs group-wired pins");
  if (delta == 0) return;
  for (std::size_t j = 0; j < size(); ++j) {
    const int target = load(j) + delta;
    if (target < 0 || target > config_.neuron.max_load()) {
      throw ConfigError("neuron " + std::to_string(j) + " cannot move from threshold " +
                        std::to_string(threshold(j)) + " by " + std::to_string(-delta));
    }
  }
  const WireId pin = sim_.netlist().wire(delta > 0 ? "inc" : "dec");
  pulse_pins(std::span<const WireId>(&pin, 1), std::abs(delta));
}

void Layer::adjust_neuron_threshold(std::size_t neuron, int delta) {
  if (config_.group_wired) throw ConfigError("group-wired layers adjust all neurons together");
  if (neuron >= size()) throw ConfigError("no neuron " + std::to_string(neuron) + " in layer");
  if (delta == 0) return;
  const int target = load(neuron) + delta;
  if (target < 0 || target > config_.neuron.max_load()) {
    throw ConfigError("neuron " + std::to_string(neuron) + " cannot move from threshold " +
                      std::to_string(threshold(neuron)) + " by " + std::to_string(-delta));
  }
  const WireId pin = sim_.netlist().wire(idx(delta > 0 ? "inc" : "dec", neuron));
  pulse_pins(std::span<const WireId>(&pin, 1), std::abs(delta));
}

int Layer::load(std::size_t neuron) const {
  return sim_.cell_as<MndroCell>(idx("n", neuron) + ".tau.mndro").stored;
}

int Layer::threshold(std::size_t neuron) const { return adjusted_threshold(config_.neuron, load(neuron)); }

std::vector<int> Layer::thresholds() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < size(); ++j) out.push_back(threshold(j));
  return out;
}

int Layer::max_output_rate() const { return layer_max_output_rate(config_); }

void NetworkConfig::finalize() {
  if (inputs < 1) throw ConfigError("network needs at least one input");
  if (max_rate < 1) throw ConfigError("network max rate must be positive");
  if (layers.empty()) throw ConfigError("network has no layers");
  int width = inputs;
  int rate = max_rate;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    LayerConfig& l = layers[i];
    if (l.neuron_count == 0) l.neuron_count = static_cast<int>(l.synapses.neurons());
    l.max_rate = rate;
    l.check();
    if (l.synapses.inputs() != static_cast<std::size_t>(width)) {
      throw ConfigError("layer " + std::to_string(i) + " takes " + std::to_string(l.synapses.inputs()) +
                        " inputs but receives " + std::to_string(width));
    }
    width = l.neuron_count;
    // A silent layer still needs a positive rate for encoding.
    rate = std::max(1, layer_max_output_rate(l));
  }
}

Network::Network(NetworkConfig config, SimulatorOptions options) : config_(std::move(config)) {
  config_.finalize();
  layers_.reserve(config_.layers.size());
  for (const auto& l : config_.layers) layers_.emplace_back(l, options);
}

std::vector<std::vector<int>> Network::forward(std::span<const int> x) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(x.begin(), x.end());
  for (auto& layer : layers_) {
    cur = layer.forward(cur);
    out.push_back(cur);
  }
  return out;
}

void Network::set_thresholds(std::span<const int> per_layer) {
  if (per_layer.size() != layers_.size()) {
    throw ConfigError("expected " + std::to_string(layers_.size()) + " layer thresholds, got " +
                      std::to_string(per_layer.size()));
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const NeuronConfig& n = layers_[i].config().neuron;
    const int load = n.max_threshold - per_layer[i];
    if (load < 0 || load > n.max_load()) {
      throw ConfigError("threshold " + std::to_string(per_layer[i]) + " is not reachable in layer " +
                        std::to_string(i) + " (max threshold " + std::to_string(n.max_threshold) + ")");
    }
  }
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    Layer& l = layers_[i];
    for (std::size_t j = 0; j < l.size(); ++j) {
      const int delta = l.threshold(j) - per_layer[i];
      if (delta == 0) continue;
      if (l.config().group_wired) {
        l.adjust_threshold(delta);
        break;
      }
      l.adjust_neuron_threshold(j, delta);
    }
  }
}

int predict(std::span<const int> counts) {
  if (counts.empty()) throw ConfigError("cannot predict from an empty output layer");
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

NetworkRunReport evaluate(Network& net, const Dataset& data) {
  NetworkRunReport r;
  for (std::size_t i = 0; i < net.layer_count(); ++i) r.thresholds.push_back(net.layer(i).threshold(0));
  for (const auto& s : data.samples) {
    auto counts = net.forward(s.x);
    const int p = predict(counts.back());
    r.predictions.push_back(p);
    if (p == s.label) ++r.correct;
    r.fire_counts.push_back(std::move(counts));
  }
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    for (std::size_t j = 0; j < net.layer(l).size(); ++j) {
      std::size_t fired = 0;
      for (const auto& c : r.fire_counts) fired += c[l][j] > 0 ? 1 : 0;
      const NeuronRef ref{static_cast<int>(l), static_cast<int>(j)};
      if (fired == 0) r.dead.push_back(ref);
      if (!data.samples.empty() && fired == data.samples.size()) r.always_fire.push_back(ref);
    }
  }
  r.accuracy = data.samples.empty() ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(data.samples.size());
  return r;
}

SearchResult threshold_search(const NetworkConfig& config, const Dataset& data,
                              const std::vector<std::vector<int>>& candidates, unsigned jobs) {
  if (candidates.empty()) throw ConfigError("threshold search needs at least one candidate");
  SearchResult res;
  res.candidates.resize(candidates.size());
  std::vector<std::exception_ptr> errors(candidates.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      try {
        Network net(config);
        net.set_thresholds(candidates[i]);
        res.candidates[i] = evaluate(net, data);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(candidates.size()));
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t i = 1; i < res.candidates.size(); ++i) {
    if (res.candidates[i].correct > res.candidates[res.best].correct) res.best = i;
  }
  return res;
}

void SyntheticSpec::check() const {
  if (inputs < 1) throw ConfigError("synthetic dataset needs at least one input");
  if (samples_per_class < 0) throw ConfigError("samples per class must be non-negative");
  if (active.empty()) throw ConfigError("synthetic dataset needs at least one class");
  for (const auto& cls : active) {
    for (int k : cls) {
      if (k < 0 || k >= inputs) throw ConfigError("active input " + std::to_string(k) + " out of range");
    }
  }
  if (active_lo < 0 || idle_lo < 0 || active_hi < active_lo || idle_hi < idle_lo) {
    throw ConfigError("synthetic value ranges must be non-negative and ordered");
  }
}

Dataset synthetic_dataset(const SyntheticSpec& spec) {
  spec.check();
  Dataset d;
  d.classes = static_cast<int>(spec.active.size());
  std::mt19937_64 rng(spec.seed);
  auto draw = [&](int lo, int hi) { return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); };
  for (int i = 0; i < spec.samples_per_class; ++i) {
    for (int c = 0; c < d.classes; ++c) {
      Sample s;
      s.label = c;
      const auto& act = spec.active[static_cast<std::size_t>(c)];
      for (int k = 0; k < spec.inputs; ++k) {
        const bool on = std::find(act.begin(), act.end(), k) != act.end();
        s.x.push_back(on ? draw(spec.active_lo, spec.active_hi) : draw(spec.idle_lo, spec.idle_hi));
      }
      d.samples.push_back(std::move(s));
    }
  }
  return d;
}

}  // namespace sfqsim
