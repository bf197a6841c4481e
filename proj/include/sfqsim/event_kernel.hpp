#pragma once

#include <cstdint>
#include <memory>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "sfqsim/netlist.hpp"
#include "sfqsim/time.hpp"

namespace sfqsim {

struct PulseEvent {
  SimTime time;
  WireId wire = kNoWire;
  std::uint64_t seq = 0;
};

// Delivery order: (time, wire, seq), lexicographic.
struct DeliveryOrder {
  bool operator()(const PulseEvent& a, const PulseEvent& b) const {
    if (a.time != b.time) return a.time < b.time;
    if (a.wire != b.wire) return a.wire < b.wire;
    return a.seq < b.seq;
  }
};

struct TraceEntry {
  SimTime time;
  WireId wire = kNoWire;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

// Ordered record of delivered pulses plus the wire-name table needed to
// render them.
struct Trace {
  std::shared_ptr<const std::vector<std::string>> wire_names =
      std::make_shared<const std::vector<std::string>>();
  std::vector<TraceEntry> events;

  const std::string& name_of(const TraceEntry& e) const { return (*wire_names)[e.wire]; }
  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }
  // Number of pulses on the named wire in [from, to).
  std::size_t count(std::string_view wire, SimTime from, SimTime to) const;
  std::size_t count(std::string_view wire) const;
  std::vector<SimTime> times(std::string_view wire) const;
};

struct SimulatorOptions {
  std::uint64_t max_deliveries_per_run = 10'000'000;
  bool record_trace = true;
};

// Single-threaded discrete-event engine over a validated netlist. The
// simulator owns a private copy of the netlist and mutates its cell states.
// Instances may be moved between threads but are never shared.
class Simulator {
 public:
  // Throws ConfigError listing every validation diagnostic.
  explicit Simulator(Netlist netlist, SimulatorOptions options = {});

  // Throws SimulationError when `time` is earlier than now().
  void schedule(WireId wire, SimTime time);
  void schedule(std::string_view wire, SimTime time);

  // Delivers every pending event with time <= t_end and returns the segment of
  // the trace produced by this call. Afterwards now() == max(now(), t_end).
  Trace run_until(SimTime t_end);

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  const Trace& trace() const { return trace_; }
  const Netlist& netlist() const { return netlist_; }

  // Direct access to a cell's live model, e.g. to read RTFF or M-NDRO state.
  const CellModel& cell(std::string_view name) const;
  template <class T>
  const T& cell_as(std::string_view name) const {
    return std::get<T>(cell(name));
  }

 private:
  struct Reader {
    std::uint32_t cell;
    std::uint32_t port;
  };

  Netlist netlist_;
  SimulatorOptions options_;
  std::vector<std::vector<Reader>> readers_;
  struct LaterFirst {
    bool operator()(const PulseEvent& a, const PulseEvent& b) const { return DeliveryOrder{}(b, a); }
  };

  std::priority_queue<PulseEvent, std::vector<PulseEvent>, LaterFirst> queue_;
  std::uint64_t next_seq_ = 0;
  SimTime now_;
  Trace trace_;
  Emissions scratch_;
};

}  // namespace sfqsim
