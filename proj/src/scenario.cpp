#include "sfqsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sfqsim/arbiter.hpp"
#include "sfqsim/errors.hpp"
#include "yaml_util.hpp"

namespace sfqsim {

namespace {

struct CellKind {
  std::string_view type;
  std::size_t inputs;
  std::size_t outputs;
  std::set<std::string> params;
};

const std::vector<CellKind>& cell_kinds() {
  static const std::vector<CellKind> kinds{
      {"delay", 1, 1, {"delay"}},
      {"splitter", 1, 2, {"delay"}},
      {"merger", 2, 1, {"delay", "dead_time"}},
      {"and", 2, 1, {"delay", "window"}},
      {"rtff", 2, 1, {"delay"}},
      {"mndro", 3, 1, {"delay", "interval", "capacity", "stored"}},
      {"arbiter", 2, 1, {}},
  };
  return kinds;
}

const CellKind* find_kind(std::string_view type) {
  for (const auto& k : cell_kinds()) {
    if (k.type == type) return &k;
  }
  return nullptr;
}

std::vector<std::string> names(const yaml::Doc& doc, const YAML::Node& n, const std::string& what) {
  doc.expect_seq(n, what);
  std::vector<std::string> out;
  for (const auto& e : n) out.push_back(doc.str(e));
  return out;
}

CellTiming parse_timing(const yaml::Doc& doc, const YAML::Node& n) {
  CellTiming t;
  if (!n) return t;
  doc.expect_map(n, "timing");
  for (const auto& kv : n) {
    const std::string key = doc.str(kv.first);
    SimTime* f = t.field(key);
    if (f == nullptr) doc.fail(kv.first, "unknown timing parameter '" + key + "'");
    const SimTime v = doc.ps(kv.second);
    if (v < SimTime{}) doc.fail(kv.second, "timing '" + key + "' is negative");
    *f = v;
  }
  return t;
}

CellSpec parse_cell(const yaml::Doc& doc, const YAML::Node& n) {
  doc.expect_map(n, "cell");
  doc.only_keys(n, {"name", "type", "in", "out", "delay", "dead_time", "window", "interval", "capacity", "stored"});
  CellSpec c;
  c.name = doc.str(doc.require(n, "name"));
  c.type = doc.str(doc.require(n, "type"));
  const CellKind* kind = find_kind(c.type);
  if (kind == nullptr) doc.fail(n["type"], "unknown cell type '" + c.type + "'");
  c.in = names(doc, doc.require(n, "in"), "in");
  c.out = names(doc, doc.require(n, "out"), "out");
  if (c.in.size() != kind->inputs) {
    doc.fail(n["in"], c.type + " takes " + std::to_string(kind->inputs) + " inputs");
  }
  if (c.out.size() != kind->outputs) {
    doc.fail(n["out"], c.type + " drives " + std::to_string(kind->outputs) + " outputs");
  }
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (key == "name" || key == "type" || key == "in" || key == "out") continue;
    if (!kind->params.contains(key)) doc.fail(kv.first, c.type + " has no parameter '" + key + "'");
  }
  auto time = [&](const char* key, std::optional<SimTime>& slot) {
    if (const YAML::Node v = n[key]) {
      slot = doc.ps(v);
      if (*slot < SimTime{}) doc.fail(v, std::string(key) + " is negative");
    }
  };
  time("delay", c.delay);
  time("dead_time", c.dead_time);
  time("window", c.window);
  time("interval", c.interval);
  if (const YAML::Node v = n["capacity"]) c.capacity = doc.int_in(v, 1, 1'000'000);
  if (const YAML::Node v = n["stored"]) c.stored = doc.int_in(v, 0, 1'000'000);
  return c;
}

NetlistScenario parse_netlist(const yaml::Doc& doc, const YAML::Node& root) {
  NetlistScenario s;
  s.inputs = names(doc, doc.require(root, "inputs"), "inputs");
  s.outputs = names(doc, doc.require(root, "outputs"), "outputs");
  const YAML::Node cells = root["cells"];
  if (cells) {
    doc.expect_seq(cells, "cells");
    std::set<std::string> seen;
    for (const auto& c : cells) {
      s.cells.push_back(parse_cell(doc, c));
      if (!seen.insert(s.cells.back().name).second) doc.fail(c, "duplicate cell '" + s.cells.back().name + "'");
    }
  }
  const std::set<std::string> inputs(s.inputs.begin(), s.inputs.end());
  if (const YAML::Node stim = root["stimulus"]) {
    doc.expect_map(stim, "stimulus");
    for (const auto& kv : stim) {
      const std::string port = doc.str(kv.first);
      if (!inputs.contains(port)) doc.fail(kv.first, "stimulus on '" + port + "', which is not an input");
      doc.expect_seq(kv.second, "stimulus times");
      std::vector<SimTime> times;
      for (const auto& t : kv.second) {
        times.push_back(doc.ps(t));
        if (times.back() < SimTime{}) doc.fail(t, "stimulus time is negative");
      }
      s.stimulus.emplace_back(port, std::move(times));
    }
  }
  s.horizon = doc.ps(doc.require(root, "horizon"));
  if (s.horizon < SimTime{}) doc.fail(root["horizon"], "horizon is negative");
  if (const YAML::Node ex = root["expect"]) {
    doc.expect_map(ex, "expect");
    doc.only_keys(ex, {"counts"});
    if (const YAML::Node counts = ex["counts"]) {
      doc.expect_map(counts, "counts");
      for (const auto& kv : counts) s.expect_counts[doc.str(kv.first)] = doc.int_in(kv.second, 0, 1'000'000'000);
    }
  }
  return s;
}

NeuronScenario parse_neuron(const yaml::Doc& doc, const YAML::Node& root) {
  NeuronScenario s;
  const YAML::Node n = doc.require(root, "neuron");
  doc.expect_map(n, "neuron");
  doc.only_keys(n, {"max_threshold", "tau_capacity", "inputs", "clock_period", "reload_on_fire"});
  NeuronConfig& cfg = s.config;
  if (const YAML::Node v = n["max_threshold"]) cfg.max_threshold = doc.int_in(v, 1, 1000);
  if (const YAML::Node v = n["tau_capacity"]) cfg.tau_capacity = doc.int_in(v, 1, 1000);
  if (const YAML::Node v = n["inputs"]) cfg.inputs = doc.int_in(v, 1, 1024);
  if (const YAML::Node v = n["clock_period"]) cfg.clock_period = doc.ps(v);
  if (const YAML::Node v = n["reload_on_fire"]) cfg.reload_on_fire = doc.boolean(v);
  try {
    cfg.check();
  } catch (const ConfigError& e) {
    doc.fail(n, e.what());
  }

  const YAML::Node steps = doc.require(root, "steps");
  doc.expect_seq(steps, "steps");
  for (const auto& st : steps) {
    doc.expect_map(st, "step");
    if (st.size() != 1) doc.fail(st, "a step has exactly one key, 'cycle' or 'adjust'");
    NeuronStep step;
    if (const YAML::Node c = st["cycle"]) {
      step.kind = NeuronStep::Kind::cycle;
      if (c.IsSequence()) {
        step.per_input = doc.ints(c, 0, 1'000'000);
        if (step.per_input.size() != static_cast<std::size_t>(cfg.inputs)) {
          doc.fail(c, "cycle lists " + std::to_string(step.per_input.size()) + " inputs, neuron has " +
                          std::to_string(cfg.inputs));
        }
        for (int v : step.per_input) step.value += v;
      } else {
        step.value = doc.int_in(c, 0, 1'000'000);
      }
    } else if (const YAML::Node a = st["adjust"]) {
      step.kind = NeuronStep::Kind::adjust;
      step.value = doc.int_in(a, -1000, 1000);
    } else {
      doc.fail(st, "a step has exactly one key, 'cycle' or 'adjust'");
    }
    s.steps.push_back(std::move(step));
  }
  if (const YAML::Node ex = root["expect"]) {
    doc.expect_map(ex, "expect");
    doc.only_keys(ex, {"outputs"});
    if (const YAML::Node o = ex["outputs"]) s.expect_outputs = doc.ints(o, 0, 1'000'000'000);
  }
  return s;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << "]";
  return os.str();
}

ScenarioRun run_netlist(const Scenario& sc, const NetlistScenario& s) {
  Simulator sim(build_scenario_netlist(s, sc.timing));
  for (const auto& [port, times] : s.stimulus) {
    for (SimTime t : times) sim.schedule(port, t);
  }
  ScenarioRun r;
  r.trace = sim.run_until(s.horizon);
  r.windows.push_back({"run", SimTime{}, s.horizon + SimTime::from_fs(1)});
  r.observed = s.outputs;
  for (const auto& [wire, expected] : s.expect_counts) {
    const auto got = r.trace.count(wire);
    if (got != static_cast<std::size_t>(expected)) {
      r.failures.push_back("wire '" + wire + "' carried " + std::to_string(got) + " pulses, expected " +
                           std::to_string(expected));
    }
  }
  return r;
}

ScenarioRun run_neuron(const Scenario& sc, const NeuronScenario& s, const RunOptions& opt) {
  NeuronConfig cfg = s.config;
  cfg.timing = sc.timing;
  NeuronSim sim = opt.protocol ? NeuronSim(cfg, {}, *opt.protocol) : NeuronSim(cfg);
  ScenarioRun r;
  int cycle = 0;
  for (const auto& step : s.steps) {
    const SimTime start = sim.cursor();
    std::string label;
    if (step.kind == NeuronStep::Kind::cycle) {
      ++cycle;
      int out = 0;
      if (step.per_input.empty()) {
        out = sim.run_cycle(step.value);
      } else {
        const int rate = std::max(1, *std::max_element(step.per_input.begin(), step.per_input.end()));
        out = sim.run_cycle(step.per_input, rate);
      }
      r.cycle_outputs.push_back(out);
      label = "cycle " + std::to_string(cycle);
    } else {
      sim.adjust(step.value);
      label = std::string("adjust ") + (step.value >= 0 ? "+" : "") + std::to_string(step.value);
    }
    r.windows.push_back({label, start, sim.cursor()});
  }
  r.trace = sim.trace();
  r.observed = {"out"};
  if (s.expect_outputs && *s.expect_outputs != r.cycle_outputs) {
    r.failures.push_back("cycle outputs " + join(r.cycle_outputs) + ", expected " + join(*s.expect_outputs));
  }
  return r;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& file) {
  const yaml::Doc doc{file};
  const YAML::Node root = doc.load(text);
  doc.check_schema(root, std::string(kScenarioSchema));
  Scenario sc;
  sc.file = file;
  sc.name = root["name"] ? doc.str(root["name"]) : file;
  sc.timing = parse_timing(doc, root["timing"]);
  const std::string kind = doc.str(doc.require(root, "kind"));
  if (kind == "netlist") {
    doc.only_keys(root, {"schema", "name", "kind", "timing", "inputs", "outputs", "cells", "stimulus", "horizon",
                         "expect"});
    sc.body = parse_netlist(doc, root);
  } else if (kind == "neuron") {
    doc.only_keys(root, {"schema", "name", "kind", "timing", "neuron", "steps", "expect"});
    sc.body = parse_neuron(doc, root);
  } else {
    doc.fail(root["kind"], "unknown scenario kind '" + kind + "', expected netlist or neuron");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

Netlist build_scenario_netlist(const NetlistScenario& s, const CellTiming& t) {
  Netlist nl;
  for (const auto& in : s.inputs) nl.add_input(in);
  auto declare = [&](const std::string& w) {
    if (!nl.find_wire(w)) nl.add_wire(w);
  };
  for (const auto& c : s.cells) {
    for (const auto& w : c.in) declare(w);
    for (const auto& w : c.out) declare(w);
  }
  for (const auto& c : s.cells) {
    std::vector<WireId> in, out;
    for (const auto& w : c.in) in.push_back(nl.wire(w));
    for (const auto& w : c.out) out.push_back(nl.wire(w));
    if (c.type == "arbiter") {
      add_arbiter(nl, c.name + ".", in[0], in[1], out[0], t);
      continue;
    }
    CellModel model;
    if (c.type == "delay") {
      model = DelayCell{c.delay.value_or(t.delay)};
    } else if (c.type == "splitter") {
      model = SplitterCell{c.delay.value_or(t.splitter_delay)};
    } else if (c.type == "merger") {
      model = MergerCell{c.delay.value_or(t.merger_delay), c.dead_time.value_or(t.merger_dead_time), {}};
    } else if (c.type == "and") {
      model = CoincidenceAndCell{c.delay.value_or(t.and_delay), c.window.value_or(t.and_window), {}};
    } else if (c.type == "rtff") {
      model = RtffCell{c.delay.value_or(t.rtff_delay), RtffState::s1, {}};
    } else if (c.type == "mndro") {
      model = MndroCell{c.capacity.value_or(3), c.delay.value_or(t.mndro_delay),
                        c.interval.value_or(t.mndro_interval), std::min(c.stored.value_or(0), c.capacity.value_or(3))};
    } else {
      throw ConfigError("unknown cell type '" + c.type + "'");
    }
    nl.add_cell(c.name, std::move(model), std::move(in), std::move(out));
  }
  for (const auto& o : s.outputs) {
    const auto id = nl.find_wire(o);
    if (!id) throw ConfigError("output '" + o + "' is not a wire of the netlist");
    nl.mark_output(*id);
  }
  return nl;
}

std::vector<std::vector<std::string>> ScenarioRun::labels() const {
  std::vector<std::vector<std::string>> out(windows.size());
  const std::set<std::string> obs(observed.begin(), observed.end());
  for (const auto& e : trace.events) {
    const std::string& name = trace.name_of(e);
    if (!obs.contains(name)) continue;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      if (e.time >= windows[i].start && e.time < windows[i].end) out[i].push_back(name);
    }
  }
  return out;
}

ScenarioRun run_scenario(const Scenario& sc, const RunOptions& options) {
  if (const auto* n = std::get_if<NetlistScenario>(&sc.body)) return run_netlist(sc, *n);
  return run_neuron(sc, std::get<NeuronScenario>(sc.body), options);
}

std::optional<CycleProtocol> nominal_protocol(const Scenario& sc) {
  const auto* n = std::get_if<NeuronScenario>(&sc.body);
  if (n == nullptr) return std::nullopt;
  NeuronConfig cfg = n->config;
  cfg.timing = sc.timing;
  return cycle_protocol(cfg);
}

}  // namespace sfqsim
