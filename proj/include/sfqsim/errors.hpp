#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sfqsim {

// Invalid configuration or netlist; maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structured-text parse failure with 1-based source position.
class ParseError : public ConfigError {
 public:
  ParseError(std::string file, int line, int column, const std::string& what)
      : ConfigError(file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string file_;
  int line_;
  int column_;
};

// A problem found while the simulation runs (timing violation, event storm,
// causality bug); maps to CLI exit code 3.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stimulus does not respect the cycle protocol or the circuit's minimum pulse
// spacing.
class TimingError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class EventStormError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace sfqsim
