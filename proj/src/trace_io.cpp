#include "sfqsim/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "sfqsim/errors.hpp"

namespace sfqsim {

namespace {

constexpr std::string_view kHeader = "time_fs,wire";

// Short printable identifiers: !, ", ..., then two-character codes.
std::string vcd_id(std::size_t i) {
  std::string id;
  do {
    id.push_back(static_cast<char>('!' + i % 94));
    i /= 94;
  } while (i > 0);
  return id;
}

}  // namespace

void write_trace_csv(std::ostream& os, const Trace& trace) {
  os << kHeader << '\n';
  for (const auto& e : trace.events) os << e.time.fs << ',' << trace.name_of(e) << '\n';
}

std::vector<TraceRow> trace_rows(const Trace& trace) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.events.size());
  for (const auto& e : trace.events) rows.push_back({e.time.fs, trace.name_of(e)});
  return rows;
}

std::vector<TraceRow> read_trace_csv(std::istream& is, const std::string& file) {
  std::vector<TraceRow> rows;
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (n == 1) {
      if (line != kHeader) throw ParseError(file, 1, 1, "expected header '" + std::string(kHeader) + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(file, n, 1, "expected 'time_fs,wire'");
    TraceRow row;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + comma, row.time_fs);
    if (ec != std::errc{} || ptr != line.data() + comma || row.time_fs < 0) {
      throw ParseError(file, n, 1, "bad time '" + line.substr(0, comma) + "'");
    }
    row.wire = line.substr(comma + 1);
    if (row.wire.empty()) throw ParseError(file, n, static_cast<int>(comma) + 2, "empty wire name");
    rows.push_back(std::move(row));
  }
  if (n == 0) throw ParseError(file, 1, 1, "empty file, expected header '" + std::string(kHeader) + "'");
  return rows;
}

std::vector<TraceRow> load_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_trace_csv(in, path);
}

void write_vcd(std::ostream& os, const Trace& trace) {
  const auto& names = *trace.wire_names;
  os << "$timescale 1 fs $end\n";
  os << "$scope module sfqsim $end\n";
  for (std::size_t i = 0; i < names.size(); ++i) os << "$var wire 1 " << vcd_id(i) << ' ' << names[i] << " $end\n";
  os << "$upscope $end\n";
  os << "$enddefinitions $end\n";
  if (trace.events.empty()) return;

  struct Change {
    std::int64_t t;
    int value;
    WireId wire;
  };
  std::vector<Change> changes;
  changes.reserve(trace.events.size() * 2);
  for (const auto& e : trace.events) {
    changes.push_back({e.time.fs, 1, e.wire});
    changes.push_back({e.time.fs + 1, 0, e.wire});
  }
  // Falling edges sort before rising ones at the same instant so back-to-back
  // pulses stay visible.
  std::stable_sort(changes.begin(), changes.end(), [](const Change& a, const Change& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.value < b.value;
  });
  os << "#0\n$dumpvars\n";
  for (std::size_t i = 0; i < names.size(); ++i) os << '0' << vcd_id(i) << '\n';
  os << "$end\n";
  std::int64_t now = -1;
  for (const auto& c : changes) {
    if (c.t != now) {
      os << '#' << c.t << '\n';
      now = c.t;
    }
    os << c.value << vcd_id(c.wire) << '\n';
  }
}

std::string compare_traces(const std::vector<TraceRow>& expected, const std::vector<TraceRow>& actual) {
  const std::size_t n = std::min(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!(expected[i] == actual[i])) {
      return "event " + std::to_string(i + 1) + ": expected " + std::to_string(expected[i].time_fs) + "," +
             expected[i].wire + ", got " + std::to_string(actual[i].time_fs) + "," + actual[i].wire;
    }
  }
  if (expected.size() != actual.size()) {
    return "expected " + std::to_string(expected.size()) + " events, got " + std::to_string(actual.size());
  }
  return {};
}

}  // namespace sfqsim
