#include "sfqsim/arbiter.hpp"

#include <algorithm>

namespace sfqsim {

void add_arbiter(Netlist& nl, const std::string& p, WireId load, WireId input, WireId out, const CellTiming& t) {
  const MergerCell merger{t.merger_delay, t.merger_dead_time, {}};
  const WireId load_cbu = nl.add_wire(p + "load_cbu");
  const WireId load_and = nl.add_wire(p + "load_and");
  const WireId in_cbu = nl.add_wire(p + "in_cbu");
  const WireId in_and = nl.add_wire(p + "in_and");
  const WireId cbu = nl.add_wire(p + "cbu");
  const WireId coincident = nl.add_wire(p + "and");
  const WireId recovered = nl.add_wire(p + "comp");
  nl.add_cell(p + "split_load", SplitterCell{t.splitter_delay}, {load}, {load_cbu, load_and});
  nl.add_cell(p + "split_in", SplitterCell{t.splitter_delay}, {input}, {in_cbu, in_and});
  nl.add_cell(p + "cbu", merger, {load_cbu, in_cbu}, {cbu});
  nl.add_cell(p + "and", CoincidenceAndCell{t.and_delay, t.and_window, {}}, {load_and, in_and}, {coincident});
  nl.add_cell(p + "comp", DelayCell{t.arbiter_comp_delay()}, {coincident}, {recovered});
  nl.add_cell(p + "merge", merger, {cbu, recovered}, {out});
}

Netlist build_arbiter(const CellTiming& timing) {
  Netlist nl;
  const WireId load = nl.add_input("load");
  const WireId in = nl.add_input("in");
  const WireId out = nl.add_wire("out");
  nl.mark_output(out);
  add_arbiter(nl, "arb.", load, in, out, timing);
  return nl;
}

bool arbiter_lossless_precondition(const CellTiming& t) {
  return t.and_window >= t.merger_dead_time &&
         t.and_delay + t.arbiter_comp_delay() - t.merger_delay > t.merger_dead_time;
}

SimTime arbiter_min_stream_spacing(const CellTiming& t) {
  // A recovered pulse reaches the output merger and_delay + comp later than
  // the later pulse of its pair; the next accepted pulse of either stream is
  // at least (spacing - window) after that. Both must clear the dead time.
  const SimTime recovery = t.and_window + t.and_delay + t.arbiter_comp_delay() + t.merger_dead_time - t.merger_delay;
  const SimTime bound = std::max({recovery, t.and_window, t.merger_dead_time});
  return bound + SimTime::from_ps(1);
}

}  // namespace sfqsim
