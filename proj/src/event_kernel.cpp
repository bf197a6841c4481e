#include "sfqsim/event_kernel.hpp"

#include <algorithm>

#include "sfqsim/errors.hpp"

namespace sfqsim {

std::size_t Trace::count(std::string_view wire, SimTime from, SimTime to) const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [&](const TraceEntry& e) {
    return e.time >= from && e.time < to && name_of(e) == wire;
  }));
}

std::size_t Trace::count(std::string_view wire) const {
  return static_cast<std::size_t>(
      std::count_if(events.begin(), events.end(), [&](const TraceEntry& e) { return name_of(e) == wire; }));
}

std::vector<SimTime> Trace::times(std::string_view wire) const {
  std::vector<SimTime> out;
  for (const auto& e : events) {
    if (name_of(e) == wire) out.push_back(e.time);
  }
  return out;
}

Simulator::Simulator(Netlist netlist, SimulatorOptions options)
    : netlist_(std::move(netlist)), options_(options) {
  auto diags = validate(netlist_);
  if (!diags.empty()) {
    std::string msg = "netlist validation failed:";
    for (const auto& d : diags) msg += "\n  [" + std::string(to_string(d.kind)) + "] " + d.message;
    throw ConfigError(msg);
  }
  readers_.resize(netlist_.wire_count());
  const auto& cells = netlist_.cells();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t p = 0; p < cells[c].inputs.size(); ++p) {
      const WireId w = cells[c].inputs[p];
      if (w != kNoWire) readers_[w].push_back({static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(p)});
    }
  }
  trace_.wire_names = std::make_shared<const std::vector<std::string>>(netlist_.wire_names());
}

void Simulator::schedule(WireId wire, SimTime time) {
  if (wire >= netlist_.wire_count()) throw SimulationError("schedule on unknown wire id");
  if (time < now_) {
    throw SimulationError("event on wire '" + netlist_.wire_name(wire) + "' at " + format_ps(time) +
                          " ps is earlier than current time " + format_ps(now_) + " ps");
  }
  queue_.push({time, wire, next_seq_++});
}

void Simulator::schedule(std::string_view wire, SimTime time) { schedule(netlist_.wire(wire), time); }

Trace Simulator::run_until(SimTime t_end) {
  Trace segment;
  segment.wire_names = trace_.wire_names;
  std::uint64_t delivered = 0;
  auto& cells = netlist_.cells();
  while (!queue_.empty() && queue_.top().time <= t_end) {
    const PulseEvent ev = queue_.top();
    queue_.pop();
    if (ev.time < now_) throw SimulationError("causality violation in event queue");
    now_ = ev.time;
    if (++delivered > options_.max_deliveries_per_run) {
      throw EventStormError("event storm: more than " + std::to_string(options_.max_deliveries_per_run) +
                            " deliveries before " + format_ps(t_end) + " ps (last wire '" +
                            netlist_.wire_name(ev.wire) + "' at " + format_ps(ev.time) + " ps)");
    }
    if (options_.record_trace) {
      trace_.events.push_back({ev.time, ev.wire});
      segment.events.push_back({ev.time, ev.wire});
    }
    for (const Reader& r : readers_[ev.wire]) {
      CellInstance& cell = cells[r.cell];
      scratch_.clear();
      deliver(cell.model, r.port, ev.time, scratch_);
      for (const Emission& em : scratch_) {
        const WireId out = cell.outputs[em.port];
        if (out == kNoWire) continue;
        if (em.time < now_) throw SimulationError("cell '" + cell.name + "' emitted into the past");
        queue_.push({em.time, out, next_seq_++});
      }
    }
  }
  if (t_end > now_) now_ = t_end;
  return segment;
}

const CellModel& Simulator::cell(std::string_view name) const {
  auto idx = netlist_.find_cell(name);
  if (!idx) throw ConfigError("unknown cell '" + std::string(name) + "'");
  return netlist_.cells()[*idx].model;
}

}  // namespace sfqsim
