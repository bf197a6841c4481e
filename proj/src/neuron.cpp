#include "sfqsim/neuron.hpp"

#include <algorithm>

#include "sfqsim/arbiter.hpp"
#include "sfqsim/encoding.hpp"
#include "sfqsim/errors.hpp"

namespace sfqsim {

namespace {

SimTime guard(SimTime t) { return scale_ceil(t, 3, 2); }

std::vector<int> preload_stages(int stages) {
  const std::int64_t preload = tu_wrap_preload(stages);
  std::vector<int> out;
  for (int j = 1; j <= stages; ++j) {
    if ((preload >> (j - 1)) & 1) out.push_back(j);
  }
  return out;
}

}  // namespace

TauTransition tau_transition(TauState state, TauSignal signal) {
  const int load = load_of(state);
  switch (signal) {
    case TauSignal::increment: return {static_cast<TauState>(std::min(load + 1, 3)), 0};
    case TauSignal::decrement: return {static_cast<TauState>(std::max(load - 1, 0)), 0};
    case TauSignal::clock: return {state, load};
  }
  return {state, 0};
}

TauState tau_state_for_load(int load) {
  if (load < 0 || load > 3) throw ConfigError("no TAU state holds a load of " + std::to_string(load));
  return static_cast<TauState>(load);
}

void NeuronConfig::check() const {
  if (max_threshold < 2 || max_threshold % 2 != 0) {
    throw ConfigError("max threshold must be an even integer >= 2, got " + std::to_string(max_threshold));
  }
  if (max_threshold > 60) throw ConfigError("max threshold above 60 is not supported");
  if (tau_capacity < 1) throw ConfigError("TAU capacity must be positive");
  if (inputs < 1) throw ConfigError("a neuron needs at least one input");
  if (clock_period <= SimTime{}) throw ConfigError("clock period must be positive");
  CellTiming t = timing;
  for (auto name : CellTiming::kParameters) {
    if (*t.field(name) < SimTime{}) throw ConfigError("timing '" + std::string(name) + "' is negative");
  }
}

int NeuronConfig::max_load() const { return std::min(tau_capacity, max_threshold - 1); }

std::vector<int> NeuronConfig::reachable_thresholds() const {
  std::vector<int> out;
  for (int load = 0; load <= max_load(); ++load) out.push_back(max_threshold - load);
  return out;
}

int adjusted_threshold(const NeuronConfig& config, int load) {
  if (load < 0 || load >= config.max_threshold) {
    throw ConfigError("load " + std::to_string(load) + " leaves no positive threshold under max threshold " +
                      std::to_string(config.max_threshold));
  }
  return config.max_threshold - load;
}

int adjusted_threshold(const NeuronConfig& config, TauState tau) { return adjusted_threshold(config, load_of(tau)); }

std::int64_t tu_wrap_preload(int stages) {
  return (std::int64_t{1} << stages) - 2 * static_cast<std::int64_t>(stages);
}

void add_neuron(Netlist& nl, const NeuronConfig& cfg, const std::string& p, const NeuronWires& w) {
  cfg.check();
  if (w.inputs.size() != static_cast<std::size_t>(cfg.inputs)) {
    throw ConfigError("neuron '" + p + "' wired with " + std::to_string(w.inputs.size()) + " inputs, config says " +
                      std::to_string(cfg.inputs));
  }
  const CellTiming& t = cfg.timing;
  const MergerCell merger{t.merger_delay, t.merger_dead_time, {}};
  const int k = cfg.stages();
  const std::vector<int> pre_stages = preload_stages(k);
  const bool has_preload = !pre_stages.empty();

  // Reset distribution goes first: lower wire ids win ties at the RTFFs.
  const auto resets = add_fanout(nl, w.rst, static_cast<std::size_t>(k + (has_preload ? 1 : 0)), p + "tu.rst",
                                 t.splitter_delay);

  // Threshold adjustment unit.
  WireId tau_clk = w.clk;
  WireId tau_fb = kNoWire;
  if (cfg.reload_on_fire) {
    tau_fb = nl.add_wire(p + "tau.fb");
    tau_clk = nl.add_wire(p + "tau.clk");
    nl.add_cell(p + "tau.clk_merge", merger, {w.clk, tau_fb}, {tau_clk});
  }
  const WireId load = nl.add_wire(p + "tau.load");
  nl.add_cell(p + "tau.mndro", MndroCell{cfg.tau_capacity, t.mndro_delay, t.mndro_interval, 0},
              {w.inc, w.dec, tau_clk}, {load});

  // Synaptic inputs share one lane-multiplexed wire into the arbiter.
  const WireId in = add_merge_tree(nl, w.inputs, p + "in.merge", merger);

  const WireId set = nl.add_wire(p + "tu.set");
  add_arbiter(nl, p + "arb.", load, in, set, t);

  // Threshold unit: k RTFFs in cascade, plus the wrap preload for k >= 3.
  WireId pre_fb = kNoWire;
  std::vector<WireId> pre_taps;
  if (has_preload) {
    const WireId pre_rst = nl.add_wire(p + "tu.pre_rst");
    nl.add_cell(p + "tu.pre_delay", DelayCell{t.delay}, {resets.back()}, {pre_rst});
    pre_fb = nl.add_wire(p + "tu.pre_fb");
    const WireId pre = nl.add_wire(p + "tu.pre");
    nl.add_cell(p + "tu.pre_merge", merger, {pre_rst, pre_fb}, {pre});
    pre_taps = add_fanout(nl, pre, pre_stages.size(), p + "tu.pre", t.splitter_delay);
  }

  std::vector<WireId> out_consumers{w.out};
  if (has_preload) out_consumers.push_back(pre_fb);
  if (cfg.reload_on_fire) out_consumers.push_back(tau_fb);
  const bool split_out = out_consumers.size() > 1;

  WireId carry = set;
  std::size_t next_pre = 0;
  for (int j = 1; j <= k; ++j) {
    const std::string sj = std::to_string(j);
    WireId toggle = carry;
    if (next_pre < pre_stages.size() && pre_stages[next_pre] == j) {
      toggle = nl.add_wire(p + "tu.t" + sj);
      nl.add_cell(p + "tu.merge" + sj, merger, {carry, pre_taps[next_pre]}, {toggle});
      ++next_pre;
    }
    const WireId q = (j == k && !split_out) ? w.out : nl.add_wire(p + "tu.q" + sj);
    nl.add_cell(p + "tu.rtff" + sj, RtffCell{t.rtff_delay, RtffState::s1, {}},
                {toggle, resets[static_cast<std::size_t>(j - 1)]}, {q});
    carry = q;
  }
  if (split_out) add_fanout_into(nl, carry, out_consumers, p + "tu.out_split", t.splitter_delay);
}

Netlist build_neuron(const NeuronConfig& config) {
  config.check();
  Netlist nl;
  NeuronWires w;
  w.rst = nl.add_input("rst");
  w.inc = nl.add_input("inc");
  w.dec = nl.add_input("dec");
  w.clk = nl.add_input("clk");
  if (config.inputs == 1) {
    w.inputs.push_back(nl.add_input("in"));
  } else {
    for (int i = 0; i < config.inputs; ++i) w.inputs.push_back(nl.add_input("in" + std::to_string(i)));
  }
  w.out = nl.add_wire("out");
  nl.mark_output(w.out);
  add_neuron(nl, config, "", w);

  auto diags = validate(nl);
  if (!diags.empty()) {
    std::string msg = "neuron netlist failed validation:";
    for (const auto& d : diags) msg += "\n  " + d.message;
    throw ConfigError(msg);
  }
  return nl;
}

CycleProtocol cycle_protocol(const NeuronConfig& cfg, SimTime extra_input_latency, SimTime extra_input_span,
                             SimTime extra_control_latency) {
  cfg.check();
  const CellTiming& t = cfg.timing;
  const int k = cfg.stages();
  const std::vector<int> pre_stages = preload_stages(k);
  const bool has_preload = !pre_stages.empty();
  const SimTime sd = t.splitter_delay;
  const SimTime md = t.merger_delay;
  const SimTime readout = t.mndro_delay + t.mndro_interval * (cfg.tau_capacity - 1);
  const SimTime arbiter_pass = sd + md + md;
  const SimTime ripple = t.rtff_delay * k;

  CycleProtocol pr;
  pr.period = cfg.clock_period;

  const int reset_depth = tree_depth(static_cast<std::size_t>(k + (has_preload ? 1 : 0)));
  SimTime reset_settle = extra_control_latency + sd * reset_depth;
  const SimTime pre_tree = sd * tree_depth(pre_stages.size());
  if (has_preload) reset_settle = reset_settle + t.delay + md + pre_tree + md;
  pr.clock_at = guard(reset_settle);

  const SimTime clk_path = cfg.reload_on_fire ? md : SimTime{};
  const SimTime reload_span = extra_control_latency + clk_path + readout + arbiter_pass;
  pr.input_open = pr.clock_at + guard(reload_span);

  const SimTime input_latency = extra_input_latency + md * tree_depth(static_cast<std::size_t>(cfg.inputs)) +
                                arbiter_pass;
  const int out_consumers = 1 + (has_preload ? 1 : 0) + (cfg.reload_on_fire ? 1 : 0);
  const SimTime out_split = out_consumers > 1 ? sd * std::max(1, tree_depth(out_consumers)) : SimTime{};
  const SimTime fb_to_stage = out_split + md + pre_tree;
  const SimTime reload_after_fire = out_split + md + readout + arbiter_pass;

  SimTime tu_settle = ripple;
  if (has_preload) tu_settle += fb_to_stage + md + ripple;
  if (cfg.reload_on_fire) tu_settle += reload_after_fire + ripple;
  const SimTime drain = guard(input_latency + extra_input_span + tu_settle);
  pr.input_close = pr.period - drain;
  if (pr.input_close <= pr.input_open) {
    throw ConfigError("clock period " + format_ps(pr.period) + " ps leaves no input window (needs more than " +
                      format_ps(pr.input_open + drain) + " ps)");
  }

  const SimTime dead = std::max(t.merger_dead_time, t.and_window);
  SimTime spacing = guard(dead);
  for (int j : pre_stages) {
    const SimTime fb_lat = t.rtff_delay * (k - j + 1) + fb_to_stage;
    const std::int64_t weight = std::int64_t{1} << (j - 1);
    spacing = std::max(spacing, SimTime{(guard(fb_lat + dead).fs + weight - 1) / weight});
  }
  if (cfg.reload_on_fire) spacing = std::max(spacing, guard(arbiter_pass + ripple + reload_after_fire + dead));
  pr.min_input_spacing = spacing;

  pr.adjust_spacing = t.mndro_interval * 2;
  pr.adjust_settle = guard(extra_control_latency) + t.mndro_interval;
  return pr;
}

NeuronSim::NeuronSim(NeuronConfig config, SimulatorOptions options)
    : config_(std::move(config)), protocol_(cycle_protocol(config_)), sim_(build_neuron(config_), options) {}

NeuronSim::NeuronSim(NeuronConfig config, SimulatorOptions options, const CycleProtocol& protocol)
    : config_(std::move(config)), protocol_(protocol), sim_(build_neuron(config_), options) {}

int NeuronSim::run_cycle(int n) {
  if (n < 0) throw TimingError("negative input pulse count");
  const int lanes = config_.inputs;
  std::vector<int> per(static_cast<std::size_t>(lanes), n / lanes);
  for (int i = 0; i < n % lanes; ++i) ++per[static_cast<std::size_t>(i)];
  const int max_rate = (n + lanes - 1) / lanes;
  return run_cycle(per, max_rate);
}

int NeuronSim::run_cycle(std::span<const int> per_input, int max_rate) {
  if (per_input.size() != static_cast<std::size_t>(config_.inputs)) {
    throw TimingError("expected " + std::to_string(config_.inputs) + " input counts, got " +
                      std::to_string(per_input.size()));
  }
  const PulseSchedule s = encode_input(per_input, protocol_.input_open, protocol_.input_window(), max_rate);
  return run_inputs(s.per_input);
}

int NeuronSim::run_cycle_at(std::span<const SimTime> offsets) {
  std::vector<std::vector<SimTime>> per(static_cast<std::size_t>(config_.inputs));
  per[0].assign(offsets.begin(), offsets.end());
  return run_inputs(per);
}

int NeuronSim::run_inputs(const std::vector<std::vector<SimTime>>& per_input) {
  PulseSchedule merged{per_input};
  for (const auto& lane : per_input) {
    for (SimTime off : lane) {
      if (off < protocol_.input_open || off >= protocol_.input_close) {
        throw TimingError("input at +" + format_ps(off) + " ps falls outside the input window [" +
                          format_ps(protocol_.input_open) + ", " + format_ps(protocol_.input_close) + ") ps");
      }
    }
  }
  if (auto gap = merged.min_merged_spacing(); gap && *gap < protocol_.min_input_spacing) {
    throw TimingError("input pulses " + format_ps(*gap) + " ps apart; the neuron needs at least " +
                      format_ps(protocol_.min_input_spacing) + " ps");
  }
  const Netlist& nl = sim_.netlist();
  const SimTime start = cursor_;
  sim_.schedule(nl.wire("rst"), start);
  sim_.schedule(nl.wire("clk"), start + protocol_.clock_at);
  for (std::size_t k = 0; k < per_input.size(); ++k) {
    const WireId wire = nl.wire(config_.inputs == 1 ? std::string("in") : "in" + std::to_string(k));
    for (SimTime off : per_input[k]) sim_.schedule(wire, start + off);
  }
  const SimTime end = start + protocol_.period;
  const Trace seg = sim_.run_until(end - SimTime::from_fs(1));
  if (sim_.pending() != 0) {
    throw TimingError("neuron activity continues past the end of the cycle at " + format_ps(end) + " ps");
  }
  cursor_ = end;
  return static_cast<int>(seg.count("out"));
}

void NeuronSim::adjust(int delta) {
  if (delta == 0) return;
  const WireId wire = sim_.netlist().wire(delta > 0 ? "inc" : "dec");
  const int count = delta > 0 ? delta : -delta;
  for (int i = 0; i < count; ++i) sim_.schedule(wire, cursor_ + protocol_.adjust_spacing * i);
  const SimTime span = protocol_.adjust_spacing * count + protocol_.adjust_settle;
  sim_.run_until(cursor_ + span - SimTime::from_fs(1));
  if (sim_.pending() != 0) throw TimingError("threshold adjustment did not settle");
  cursor_ += span;
}

int NeuronSim::load() const { return sim_.cell_as<MndroCell>("tau.mndro").stored; }

NeuronState NeuronSim::state() const {
  NeuronState s;
  s.load = load();
  for (int j = 1; j <= config_.stages(); ++j) {
    s.stages.push_back(sim_.cell_as<RtffCell>("tu.rtff" + std::to_string(j)).state);
  }
  return s;
}

SimTime adjustment_latency(const NeuronConfig& config) {
  NeuronConfig cfg = config;
  cfg.reload_on_fire = false;
  Simulator sim(build_neuron(cfg));
  const Netlist& nl = sim.netlist();
  // Park the TAU one step below capacity so the increment yields a full reload.
  for (int i = 0; i + 1 < cfg.tau_capacity; ++i) sim.schedule(nl.wire("inc"), SimTime::from_ps(i));
  const SimTime t0 = SimTime::from_ps(100);
  sim.run_until(t0 - SimTime::from_fs(1));
  sim.schedule(nl.wire("inc"), t0);
  sim.schedule(nl.wire("rst"), t0);
  sim.schedule(nl.wire("clk"), t0);
  const Trace seg = sim.run_until(t0 + cfg.clock_period * 4);
  const auto arrivals = seg.times("tu.set");
  if (arrivals.empty()) throw SimulationError("reload produced no pulses at the threshold unit");
  return arrivals.back() - t0;
}

}  // namespace sfqsim
