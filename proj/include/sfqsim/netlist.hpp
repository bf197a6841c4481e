#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sfqsim/cells.hpp"

namespace sfqsim {

// Wires are identified by declaration order. Simultaneous pulses are
// delivered in ascending WireId, so builders declare wires that must win ties
// (resets, TAU adjustments) first.
using WireId = std::uint32_t;
inline constexpr WireId kNoWire = std::numeric_limits<WireId>::max();

struct CellInstance {
  std::string name;
  CellModel model;
  std::vector<WireId> inputs;   // kNoWire = port left unconnected
  std::vector<WireId> outputs;  // kNoWire = output discarded
};

class Netlist {
 public:
  // Throws ConfigError on a duplicate name.
  WireId add_wire(std::string name);
  // Declares a wire and marks it as an external input (driven by stimulus).
  WireId add_input(std::string name);
  void mark_output(WireId wire);

  // Throws ConfigError when a wire id is out of range or the port count does
  // not match the cell type.
  std::size_t add_cell(std::string name, CellModel model, std::vector<WireId> inputs,
                       std::vector<WireId> outputs);

  std::optional<WireId> find_wire(std::string_view name) const;
  // Throws ConfigError when absent.
  WireId wire(std::string_view name) const;
  const std::string& wire_name(WireId id) const { return wires_.at(id); }
  std::size_t wire_count() const { return wires_.size(); }
  const std::vector<std::string>& wire_names() const { return wires_; }

  const std::vector<CellInstance>& cells() const { return cells_; }
  std::vector<CellInstance>& cells() { return cells_; }
  std::optional<std::size_t> find_cell(std::string_view name) const;

  const std::vector<WireId>& inputs() const { return inputs_; }
  const std::vector<WireId>& outputs() const { return outputs_; }

 private:
  std::vector<std::string> wires_;
  std::unordered_map<std::string, WireId> wire_index_;
  std::vector<CellInstance> cells_;
  std::unordered_map<std::string, std::size_t> cell_index_;
  std::vector<WireId> inputs_;
  std::vector<WireId> outputs_;
};

struct Diagnostic {
  enum class Kind { multi_driver, undriven, zero_delay_cycle };
  Kind kind;
  std::string message;
};

std::string_view to_string(Diagnostic::Kind kind);

// Empty iff every wire has exactly one driver and every feedback loop passes
// through a cell with positive delay.
std::vector<Diagnostic> validate(const Netlist& netlist);

// Helpers shared by circuit builders.

// Balanced splitter tree giving `count` leaves at equal depth. Spare leaves of
// the last level are left dangling. With count == 1 the source is returned.
std::vector<WireId> add_fanout(Netlist& netlist, WireId source, std::size_t count,
                               const std::string& prefix, SimTime splitter_delay);

// Same tree, but the leaves drive the given pre-declared wires. A single
// target is driven through one splitter whose second output dangles.
void add_fanout_into(Netlist& netlist, WireId source, std::span<const WireId> targets,
                     const std::string& prefix, SimTime splitter_delay);

// Balanced merger tree over `sources`; returns the root wire. A single source
// is returned unchanged.
WireId add_merge_tree(Netlist& netlist, std::span<const WireId> sources, const std::string& prefix,
                      const MergerCell& merger);

// Depth of the trees built above for `count` leaves.
int tree_depth(std::size_t count);

}  // namespace sfqsim
