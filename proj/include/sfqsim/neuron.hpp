#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sfqsim/event_kernel.hpp"
#include "sfqsim/netlist.hpp"
#include "sfqsim/timing.hpp"

namespace sfqsim {

// The TAU's four-state machine. The underlying value is the load it emits per
// clock.
enum class TauState : std::uint8_t { idle = 0, load1 = 1, load2 = 2, load3 = 3 };
enum class TauSignal : std::uint8_t { increment, decrement, clock };

struct TauTransition {
  TauState next;
  int load_pulses;
  friend bool operator==(const TauTransition&, const TauTransition&) = default;
};

TauTransition tau_transition(TauState state, TauSignal signal);
inline int load_of(TauState s) { return static_cast<int>(s); }
// Throws ConfigError outside 0..3.
TauState tau_state_for_load(int load);

struct NeuronConfig {
  int max_threshold = 4;
  int tau_capacity = 3;
  int inputs = 1;
  SimTime clock_period = SimTime::from_ps(1000);
  // Route the neuron output back to the TAU clock so every fire reloads.
  bool reload_on_fire = false;
  CellTiming timing;

  int stages() const { return max_threshold / 2; }
  // Throws ConfigError unless max_threshold is even and >= 2, capacity and
  // inputs are positive and every timing is non-negative.
  void check() const;
  // Largest load that keeps the adjusted threshold >= 1.
  int max_load() const;
  std::vector<int> reachable_thresholds() const;
};

// max_threshold - load. Throws ConfigError when load >= max_threshold.
int adjusted_threshold(const NeuronConfig& config, int load);
int adjusted_threshold(const NeuronConfig& config, TauState tau);

// Pulses the TU must absorb after every reset or wrap so that k binary RTFF
// stages count modulo 2k instead of 2^k. Zero for k <= 2.
std::int64_t tu_wrap_preload(int stages);

// Externally visible wires of one neuron inside a larger netlist. Inputs are
// read, `out` is driven by the neuron.
struct NeuronWires {
  WireId rst = kNoWire;
  WireId inc = kNoWire;
  WireId dec = kNoWire;
  WireId clk = kNoWire;
  std::vector<WireId> inputs;
  WireId out = kNoWire;
};

// Adds TAU, arbiter and TU cells under `prefix` (e.g. "n3.").
void add_neuron(Netlist& netlist, const NeuronConfig& config, const std::string& prefix,
                const NeuronWires& wires);

// Standalone neuron with ports rst, inc, dec, clk, in (or in0..inN-1), out.
// Throws ConfigError on an invalid config or a netlist that fails validation.
Netlist build_neuron(const NeuronConfig& config);

// Offsets of one clock cycle relative to its start. Every derived gap carries
// a 1.5x guard band over the nominal path delay.
struct CycleProtocol {
  SimTime period;
  SimTime clock_at;      // TAU reload clock (reset is at 0)
  SimTime input_open;    // first admissible input
  SimTime input_close;   // inputs must precede this
  SimTime min_input_spacing;
  SimTime adjust_spacing;
  SimTime adjust_settle;

  SimTime input_window() const { return input_close - input_open; }
};

// `extra_input_latency` and `extra_input_span` account for synapse circuitry
// in front of the neuron inputs; `extra_control_latency` for fan-out of the
// shared rst/clk/inc/dec pins. Throws ConfigError when the period is too short
// to hold any input window.
CycleProtocol cycle_protocol(const NeuronConfig& config, SimTime extra_input_latency = {},
                             SimTime extra_input_span = {}, SimTime extra_control_latency = {});

struct NeuronState {
  int load = 0;
  std::vector<RtffState> stages;
};

// A standalone neuron driven cycle by cycle through the event kernel.
class NeuronSim {
 public:
  explicit NeuronSim(NeuronConfig config, SimulatorOptions options = {});
  // Drives the neuron with a given protocol instead of the one derived from
  // its own timing, e.g. nominal stimulus on a perturbed circuit.
  NeuronSim(NeuronConfig config, SimulatorOptions options, const CycleProtocol& protocol);

  const NeuronConfig& config() const { return config_; }
  const CycleProtocol& protocol() const { return protocol_; }

  // Reset, reload and `n` input pulses spread round-robin over the inputs.
  // Returns the number of output pulses in the cycle. Throws TimingError when
  // the pulses cannot be spaced legally inside the input window.
  int run_cycle(int n);
  // Pulse counts per input, rate coded with encode_input.
  int run_cycle(std::span<const int> per_input, int max_rate);
  // Explicit input offsets (relative to cycle start) on input 0.
  int run_cycle_at(std::span<const SimTime> offsets);

  // Positive delta sends increments (lowering the threshold), negative sends
  // decrements. Takes its own time slot between cycles; no reload happens
  // until the next cycle's clock.
  void adjust(int delta);

  int load() const;
  int adjusted_threshold() const { return sfqsim::adjusted_threshold(config_, load()); }
  NeuronState state() const;

  // Start of the next step.
  SimTime cursor() const { return cursor_; }
  const Trace& trace() const { return sim_.trace(); }
  Simulator& simulator() { return sim_; }

 private:
  int run_inputs(const std::vector<std::vector<SimTime>>& per_input_offsets);

  NeuronConfig config_;
  CycleProtocol protocol_;
  Simulator sim_;
  SimTime cursor_;
};

// Time from an increment reaching the TAU (with the reload clock and TU reset
// issued at the same instant) until the last pulse of a full-capacity reload
// reaches the TU input. Measured on the built netlist.
SimTime adjustment_latency(const NeuronConfig& config);

}  // namespace sfqsim
