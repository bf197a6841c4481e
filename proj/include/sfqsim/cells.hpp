#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "sfqsim/time.hpp"

namespace sfqsim {

// One output pulse produced by a cell in response to an input pulse.
struct Emission {
  std::uint8_t port = 0;
  SimTime time;
};

using Emissions = std::vector<Emission>;

// JTL stand-in: in -> out after `delay`.
struct DelayCell {
  static constexpr std::size_t kInputs = 1;
  static constexpr std::size_t kOutputs = 1;

  SimTime delay;

  void on_pulse(std::size_t port, SimTime now, Emissions& out);
  SimTime min_delay() const { return delay; }
};

// in -> out0, out1.
struct SplitterCell {
  static constexpr std::size_t kInputs = 1;
  static constexpr std::size_t kOutputs = 2;

  SimTime delay;

  void on_pulse(std::size_t port, SimTime now, Emissions& out);
  SimTime min_delay() const { return delay; }
};

// Confluence buffer. A pulse arriving within `dead_time` (inclusive) of the
// last pulse it passed is swallowed, regardless of port.
struct MergerCell {
  static constexpr std::size_t kInputs = 2;
  static constexpr std::size_t kOutputs = 1;

  SimTime delay;
  SimTime dead_time;
  std::optional<SimTime> last_passed;

  void on_pulse(std::size_t port, SimTime now, Emissions& out);
  SimTime min_delay() const { return delay; }
};

// Asynchronous coincidence AND. A pulse arms its port for `window`; a pulse
// on the other port while armed fires once and disarms both sides.
struct CoincidenceAndCell {
  static constexpr std::size_t kInputs = 2;
  static constexpr std::size_t kOutputs = 1;

  SimTime delay;
  SimTime window;
  std::array<std::optional<SimTime>, 2> armed_at;

  void on_pulse(std::size_t port, SimTime now, Emissions& out);
  SimTime min_delay() const { return delay; }
};

enum class RtffState : std::uint8_t { s1, s2 };
enum class RtffSignal : std::uint8_t { input, reset };

struct RtffStep {
  RtffState next;
  int emits;
  friend bool operator==(const RtffStep&, const RtffStep&) = default;
};

// Resettable toggle flip-flop transition table.
RtffStep rtff_step(RtffState state, RtffSignal signal);

// Ports: 0 = toggle input, 1 = reset. An input delivered at the same instant
// as a reset is absorbed, so a coincident reset always leaves the cell in S1.
struct RtffCell {
  static constexpr std::size_t kInputs = 2;
  static constexpr std::size_t kOutputs = 1;
  static constexpr std::size_t kToggle = 0;
  static constexpr std::size_t kReset = 1;

  SimTime delay;
  RtffState state = RtffState::s1;
  std::optional<SimTime> last_reset;

  void on_pulse(std::size_t port, SimTime now, Emissions& out);
  SimTime min_delay() const { return delay; }
};

enum class MndroSignal : std::uint8_t { increment, decrement, clock };

struct MndroApply {
  int stored;
  int emitted;
  friend bool operator==(const MndroApply&, const MndroApply&) = default;
};

// Multi-fluxon NDRO storage. Ports: 0 = increment, 1 = decrement, 2 = clock.
// Clock reads out `stored` pulses at delay, delay + interval, ... without
// changing the stored count. Increment and decrement saturate.
struct MndroCell {
  static constexpr std::size_t kInputs = 3;
  static constexpr std::size_t kOutputs = 1;
  static constexpr std::size_t kIncrement = 0;
  static constexpr std::size_t kDecrement = 1;
  static constexpr std::size_t kClock = 2;

  int capacity = 3;
  SimTime delay;
  SimTime interval;
  int stored = 0;

  void on_pulse(std::size_t port, SimTime now, Emissions& out);
  SimTime min_delay() const { return delay; }
};

MndroApply mndro_apply(const MndroCell& cell, MndroSignal signal);

using CellModel =
    std::variant<DelayCell, SplitterCell, MergerCell, CoincidenceAndCell, RtffCell, MndroCell>;

std::string_view cell_type_name(const CellModel& model);
std::size_t input_count(const CellModel& model);
std::size_t output_count(const CellModel& model);
SimTime min_delay(const CellModel& model);
void deliver(CellModel& model, std::size_t port, SimTime now, Emissions& out);

}  // namespace sfqsim
