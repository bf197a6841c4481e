#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sfqsim/event_kernel.hpp"
#include "sfqsim/neuron.hpp"
#include "sfqsim/timing.hpp"

namespace sfqsim {

inline constexpr std::string_view kScenarioSchema = "sfqsim-scenario/1";

// One cell of a hand-written netlist. Unset parameters fall back to the
// scenario's timing. Type "arbiter" expands to the full arbiter macro.
struct CellSpec {
  std::string name;
  std::string type;
  std::vector<std::string> in;
  std::vector<std::string> out;
  std::optional<SimTime> delay;
  std::optional<SimTime> dead_time;
  std::optional<SimTime> window;
  std::optional<SimTime> interval;
  std::optional<int> capacity;
  std::optional<int> stored;
};

struct NetlistScenario {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<CellSpec> cells;
  std::vector<std::pair<std::string, std::vector<SimTime>>> stimulus;
  SimTime horizon;
  std::map<std::string, int> expect_counts;
};

struct NeuronStep {
  enum class Kind { cycle, adjust };
  Kind kind = Kind::cycle;
  int value = 0;                // cycle: total input pulses; adjust: delta
  std::vector<int> per_input;   // cycle with explicit per-input counts
};

struct NeuronScenario {
  NeuronConfig config;  // timing lives in Scenario::timing
  std::vector<NeuronStep> steps;
  std::optional<std::vector<int>> expect_outputs;  // per cycle step
};

struct Scenario {
  std::string name;
  std::string file;
  CellTiming timing;
  std::variant<NetlistScenario, NeuronScenario> body;
};

// Throws ParseError with file:line:column.
Scenario parse_scenario(const std::string& text, const std::string& file);
Scenario load_scenario(const std::string& path);

// Builds the netlist of a netlist-kind scenario with the given timing.
Netlist build_scenario_netlist(const NetlistScenario& scenario, const CellTiming& timing);

struct StepWindow {
  std::string label;
  SimTime start;
  SimTime end;
};

struct ScenarioRun {
  Trace trace;
  std::vector<StepWindow> windows;
  std::vector<std::string> observed;  // wires whose pulses define behavior
  std::vector<int> cycle_outputs;     // neuron kind only
  std::vector<std::string> failures;  // unmet expectations

  bool passed() const { return failures.empty(); }
  // Per window, the observed wire names in delivery order.
  std::vector<std::vector<std::string>> labels() const;
};

struct RunOptions {
  // Neuron kind: drive with this protocol instead of the one the timing implies.
  std::optional<CycleProtocol> protocol;
};

// Throws ConfigError on an invalid netlist or config and SimulationError on
// timing violations or event storms.
ScenarioRun run_scenario(const Scenario& scenario, const RunOptions& options = {});

// Protocol the neuron kind uses with the scenario's own timing.
std::optional<CycleProtocol> nominal_protocol(const Scenario& scenario);

}  // namespace sfqsim
