#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sfqsim/event_kernel.hpp"

namespace sfqsim {

// One row per delivered pulse: "time_fs,wire" header, then e.g. "10000,out".
void write_trace_csv(std::ostream& os, const Trace& trace);

struct TraceRow {
  std::int64_t time_fs = 0;
  std::string wire;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

std::vector<TraceRow> trace_rows(const Trace& trace);

// Throws ParseError on a malformed file.
std::vector<TraceRow> read_trace_csv(std::istream& is, const std::string& file);
std::vector<TraceRow> load_trace_csv(const std::string& path);

// Value-change dump with 1 fs timescale. Each pulse is a 1 fs high level, so
// a viewer shows one spike per event. Every wire of the table is declared.
void write_vcd(std::ostream& os, const Trace& trace);

// Empty when equal, else a description of the first difference.
std::string compare_traces(const std::vector<TraceRow>& expected, const std::vector<TraceRow>& actual);

}  // namespace sfqsim
