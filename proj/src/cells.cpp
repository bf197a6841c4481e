#include "sfqsim/cells.hpp"

#include <algorithm>

namespace sfqsim {

void DelayCell::on_pulse(std::size_t, SimTime now, Emissions& out) {
  out.push_back({0, now + delay});
}

void SplitterCell::on_pulse(std::size_t, SimTime now, Emissions& out) {
  out.push_back({0, now + delay});
  out.push_back({1, now + delay});
}

void MergerCell::on_pulse(std::size_t, SimTime now, Emissions& out) {
  if (last_passed && now - *last_passed <= dead_time) return;
  last_passed = now;
  out.push_back({0, now + delay});
}

void CoincidenceAndCell::on_pulse(std::size_t port, SimTime now, Emissions& out) {
  auto& other = armed_at[1 - port];
  if (other && now - *other <= window) {
    other.reset();
    armed_at[port].reset();
    out.push_back({0, now + delay});
    return;
  }
  other.reset();
  armed_at[port] = now;
}

RtffStep rtff_step(RtffState state, RtffSignal signal) {
  if (signal == RtffSignal::reset) return {RtffState::s1, 0};
  if (state == RtffState::s1) return {RtffState::s2, 0};
  return {RtffState::s1, 1};
}

void RtffCell::on_pulse(std::size_t port, SimTime now, Emissions& out) {
  if (port == kReset) {
    state = rtff_step(state, RtffSignal::reset).next;
    last_reset = now;
    return;
  }
  if (last_reset && *last_reset == now) return;
  const RtffStep step = rtff_step(state, RtffSignal::input);
  state = step.next;
  if (step.emits) out.push_back({0, now + delay});
}

MndroApply mndro_apply(const MndroCell& cell, MndroSignal signal) {
  switch (signal) {
    case MndroSignal::increment:
      return {std::min(cell.stored + 1, cell.capacity), 0};
    case MndroSignal::decrement:
      return {std::max(cell.stored - 1, 0), 0};
    case MndroSignal::clock:
      return {cell.stored, cell.stored};
  }
  return {cell.stored, 0};
}

void MndroCell::on_pulse(std::size_t port, SimTime now, Emissions& out) {
  const auto signal = static_cast<MndroSignal>(port);
  const MndroApply r = mndro_apply(*this, signal);
  stored = r.stored;
  for (int i = 0; i < r.emitted; ++i) out.push_back({0, now + delay + interval * i});
}

std::string_view cell_type_name(const CellModel& model) {
  struct Names {
    std::string_view operator()(const DelayCell&) const { return "delay"; }
    std::string_view operator()(const SplitterCell&) const { return "splitter"; }
    std::string_view operator()(const MergerCell&) const { return "merger"; }
    std::string_view operator()(const CoincidenceAndCell&) const { return "and"; }
    std::string_view operator()(const RtffCell&) const { return "rtff"; }
    std::string_view operator()(const MndroCell&) const { return "mndro"; }
  };
  return std::visit(Names{}, model);
}

std::size_t input_count(const CellModel& model) {
  return std::visit([](const auto& c) { return std::decay_t<decltype(c)>::kInputs; }, model);
}

std::size_t output_count(const CellModel& model) {
  return std::visit([](const auto& c) { return std::decay_t<decltype(c)>::kOutputs; }, model);
}

SimTime min_delay(const CellModel& model) {
  return std::visit([](const auto& c) { return c.min_delay(); }, model);
}

void deliver(CellModel& model, std::size_t port, SimTime now, Emissions& out) {
  std::visit([&](auto& c) { c.on_pulse(port, now, out); }, model);
}

}  // namespace sfqsim
