#pragma once

#include <string>

#include "sfqsim/netlist.hpp"
#include "sfqsim/timing.hpp"

namespace sfqsim {

// Lossless merge of the TAU load stream and the input stream.
//
//   load --split--+--> CBU ------------------------------+
//                 |                                      +--> out merger --> out
//   in  --split--+--> coincidence AND --> comp delay ----+
//
// Two pulses close enough to collide in the CBU also meet in the AND, whose
// output is delayed past the CBU's dead window and merged back in.
void add_arbiter(Netlist& netlist, const std::string& prefix, WireId load, WireId input, WireId out,
                 const CellTiming& timing);

// Standalone arbiter with input ports "load" and "in" and output "out".
Netlist build_arbiter(const CellTiming& timing);

// True when the coincidence window covers the CBU dead time and the recovered
// pulse lands outside the dead window of the CBU pulse it pairs with.
bool arbiter_lossless_precondition(const CellTiming& timing);

// Smallest spacing between consecutive pulses of the same stream (load or
// input) for which the arbiter is lossless under arbitrary cross-stream
// alignment, exact coincidences included.
SimTime arbiter_min_stream_spacing(const CellTiming& timing);

}  // namespace sfqsim
