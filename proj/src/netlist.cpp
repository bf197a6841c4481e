#include "sfqsim/netlist.hpp"

#include <algorithm>
#include <functional>

#include "sfqsim/errors.hpp"

namespace sfqsim {

WireId Netlist::add_wire(std::string name) {
  if (wire_index_.contains(name)) throw ConfigError("duplicate wire '" + name + "'");
  const auto id = static_cast<WireId>(wires_.size());
  wire_index_.emplace(name, id);
  wires_.push_back(std::move(name));
  return id;
}

WireId Netlist::add_input(std::string name) {
  const WireId id = add_wire(std::move(name));
  inputs_.push_back(id);
  return id;
}

void Netlist::mark_output(WireId wire) {
  if (wire >= wires_.size()) throw ConfigError("output wire id out of range");
  outputs_.push_back(wire);
}

std::size_t Netlist::add_cell(std::string name, CellModel model, std::vector<WireId> inputs,
                              std::vector<WireId> outputs) {
  if (cell_index_.contains(name)) throw ConfigError("duplicate cell '" + name + "'");
  if (inputs.size() != input_count(model) || outputs.size() != output_count(model)) {
    throw ConfigError("cell '" + name + "' of type " + std::string(cell_type_name(model)) +
                      " expects " + std::to_string(input_count(model)) + " inputs and " +
                      std::to_string(output_count(model)) + " outputs");
  }
  for (WireId w : inputs) {
    if (w != kNoWire && w >= wires_.size()) throw ConfigError("cell '" + name + "' reads unknown wire");
  }
  for (WireId w : outputs) {
    if (w != kNoWire && w >= wires_.size()) throw ConfigError("cell '" + name + "' drives unknown wire");
  }
  const std::size_t index = cells_.size();
  cell_index_.emplace(name, index);
  cells_.push_back({std::move(name), std::move(model), std::move(inputs), std::move(outputs)});
  return index;
}

std::optional<WireId> Netlist::find_wire(std::string_view name) const {
  auto it = wire_index_.find(std::string(name));
  if (it == wire_index_.end()) return std::nullopt;
  return it->second;
}

WireId Netlist::wire(std::string_view name) const {
  if (auto w = find_wire(name)) return *w;
  throw ConfigError("unknown wire '" + std::string(name) + "'");
}

std::optional<std::size_t> Netlist::find_cell(std::string_view name) const {
  auto it = cell_index_.find(std::string(name));
  if (it == cell_index_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::multi_driver: return "multi-driver";
    case Diagnostic::Kind::undriven: return "undriven";
    case Diagnostic::Kind::zero_delay_cycle: return "zero-delay-cycle";
  }
  return "unknown";
}

std::vector<Diagnostic> validate(const Netlist& netlist) {
  std::vector<Diagnostic> diags;
  const std::size_t nwires = netlist.wire_count();

  std::vector<std::vector<std::string>> drivers(nwires);
  for (WireId w : netlist.inputs()) drivers[w].push_back("input port");
  for (const auto& cell : netlist.cells()) {
    for (std::size_t p = 0; p < cell.outputs.size(); ++p) {
      if (cell.outputs[p] == kNoWire) continue;
      drivers[cell.outputs[p]].push_back(cell.name + ".out" + std::to_string(p));
    }
  }
  for (WireId w = 0; w < nwires; ++w) {
    if (drivers[w].size() > 1) {
      std::string who;
      for (const auto& d : drivers[w]) who += (who.empty() ? "" : ", ") + d;
      diags.push_back({Diagnostic::Kind::multi_driver,
                       "wire '" + netlist.wire_name(w) + "' has " + std::to_string(drivers[w].size()) +
                           " drivers (" + who + ")"});
    } else if (drivers[w].empty()) {
      diags.push_back({Diagnostic::Kind::undriven, "wire '" + netlist.wire_name(w) + "' has no driver"});
    }
  }

  // Zero-delay cycles: restrict the cell graph to cells whose output can
  // appear at the same instant as their input, then look for cycles.
  const auto& cells = netlist.cells();
  std::vector<std::vector<std::size_t>> readers(nwires);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (WireId w : cells[c].inputs) {
      if (w != kNoWire) readers[w].push_back(c);
    }
  }
  std::vector<bool> instant(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) instant[c] = min_delay(cells[c].model) <= SimTime{};

  enum class Mark { fresh, active, done };
  std::vector<Mark> mark(cells.size(), Mark::fresh);
  std::vector<std::size_t> stack;
  std::function<void(std::size_t)> visit = [&](std::size_t c) {
    mark[c] = Mark::active;
    stack.push_back(c);
    for (WireId w : cells[c].outputs) {
      if (w == kNoWire) continue;
      for (std::size_t next : readers[w]) {
        if (!instant[next]) continue;
        if (mark[next] == Mark::active) {
          auto from = std::find(stack.begin(), stack.end(), next);
          std::string path;
          for (auto it = from; it != stack.end(); ++it) path += cells[*it].name + " -> ";
          path += cells[next].name;
          diags.push_back({Diagnostic::Kind::zero_delay_cycle,
                           "zero-delay cycle through wire '" + netlist.wire_name(w) + "': " + path});
        } else if (mark[next] == Mark::fresh) {
          visit(next);
        }
      }
    }
    stack.pop_back();
    mark[c] = Mark::done;
  };
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (instant[c] && mark[c] == Mark::fresh) visit(c);
  }
  return diags;
}

int tree_depth(std::size_t count) {
  int depth = 0;
  std::size_t leaves = 1;
  while (leaves < count) {
    leaves *= 2;
    ++depth;
  }
  return depth;
}

std::vector<WireId> add_fanout(Netlist& netlist, WireId source, std::size_t count,
                               const std::string& prefix, SimTime splitter_delay) {
  std::vector<WireId> level{source};
  const int depth = tree_depth(count);
  for (int d = 0; d < depth; ++d) {
    std::vector<WireId> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::string stem = prefix + "." + std::to_string(d) + "_" + std::to_string(i);
      WireId a = netlist.add_wire(stem + "a");
      WireId b = netlist.add_wire(stem + "b");
      netlist.add_cell(stem, SplitterCell{splitter_delay}, {level[i]}, {a, b});
      next.push_back(a);
      next.push_back(b);
    }
    level = std::move(next);
  }
  level.resize(count);
  return level;
}

void add_fanout_into(Netlist& netlist, WireId source, std::span<const WireId> targets,
                     const std::string& prefix, SimTime splitter_delay) {
  if (targets.empty()) return;
  const int depth = std::max(1, tree_depth(targets.size()));
  std::vector<WireId> level{source};
  std::size_t next_target = 0;
  for (int d = 0; d < depth; ++d) {
    const bool last = d + 1 == depth;
    std::vector<WireId> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const std::string stem = prefix + "." + std::to_string(d) + "_" + std::to_string(i);
      auto leaf = [&](const char* suffix) {
        if (last && next_target < targets.size()) return targets[next_target++];
        return netlist.add_wire(stem + suffix);
      };
      WireId a = leaf("a");
      WireId b = leaf("b");
      netlist.add_cell(stem, SplitterCell{splitter_delay}, {level[i]}, {a, b});
      next.push_back(a);
      next.push_back(b);
    }
    level = std::move(next);
  }
}

WireId add_merge_tree(Netlist& netlist, std::span<const WireId> sources, const std::string& prefix,
                      const MergerCell& merger) {
  if (sources.empty()) throw ConfigError("merge tree '" + prefix + "' has no sources");
  std::vector<WireId> level(sources.begin(), sources.end());
  int d = 0;
  while (level.size() > 1) {
    std::vector<WireId> next;
    for (std::size_t i = 0; i < level.size(); i += 2) {
      if (i + 1 == level.size()) {
        // Odd leaf: pad with a delay so every path sees the same depth.
        const std::string stem = prefix + "." + std::to_string(d) + "_" + std::to_string(i / 2);
        WireId o = netlist.add_wire(stem);
        netlist.add_cell(stem, DelayCell{merger.delay}, {level[i]}, {o});
        next.push_back(o);
        continue;
      }
      const std::string stem = prefix + "." + std::to_string(d) + "_" + std::to_string(i / 2);
      WireId o = netlist.add_wire(stem);
      netlist.add_cell(stem, merger, {level[i], level[i + 1]}, {o});
      next.push_back(o);
    }
    level = std::move(next);
    ++d;
  }
  return level.front();
}

}  // namespace sfqsim
