#pragma once

// Small helpers over yaml-cpp that turn shape problems into ParseErrors
// carrying the offending node's position.

#include <yaml-cpp/yaml.h>

#include <set>
#include <string>
#include <vector>

#include "sfqsim/errors.hpp"
#include "sfqsim/time.hpp"

namespace sfqsim::yaml {

struct Doc {
  std::string file;

  [[noreturn]] void fail(const YAML::Node& at, const std::string& what) const {
    const YAML::Mark m = at.Mark();
    // Nodes built in memory have no position.
    const int line = m.line < 0 ? 0 : m.line + 1;
    const int col = m.column < 0 ? 0 : m.column + 1;
    throw ParseError(file, line, col, what);
  }

  YAML::Node load(const std::string& text) const {
    try {
      return YAML::Load(text);
    } catch (const YAML::Exception& e) {
      throw ParseError(file, e.mark.line + 1, e.mark.column + 1, e.msg);
    }
  }

  void expect_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) fail(n, what + " must be a mapping");
  }

  void expect_seq(const YAML::Node& n, const std::string& what) const {
    if (!n.IsSequence()) fail(n, what + " must be a list");
  }

  // Rejects keys outside `known` so typos do not pass silently.
  void only_keys(const YAML::Node& map, const std::set<std::string>& known) const {
    for (const auto& kv : map) {
      const std::string key = kv.first.as<std::string>();
      if (!known.contains(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  YAML::Node require(const YAML::Node& map, const std::string& key) const {
    const YAML::Node n = map[key];
    if (!n) fail(map, "missing key '" + key + "'");
    return n;
  }

  std::string str(const YAML::Node& n) const {
    if (!n.IsScalar()) fail(n, "expected a scalar");
    return n.Scalar();
  }

  long long integer(const YAML::Node& n) const {
    const std::string s = str(n);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(s, &used);
      if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail(n, "expected an integer, got '" + s + "'");
  }

  int int_in(const YAML::Node& n, long long lo, long long hi) const {
    const long long v = integer(n);
    if (v < lo || v > hi) {
      fail(n, "value " + std::to_string(v) + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
    }
    return static_cast<int>(v);
  }

  bool boolean(const YAML::Node& n) const {
    const std::string s = str(n);
    if (s == "true") return true;
    if (s == "false") return false;
    fail(n, "expected true or false, got '" + s + "'");
  }

  // Picosecond value, exact to the femtosecond.
  SimTime ps(const YAML::Node& n) const {
    const std::string s = str(n);
    try {
      return parse_ps(s);
    } catch (const std::invalid_argument& e) {
      fail(n, e.what());
    }
  }

  std::vector<int> ints(const YAML::Node& n, long long lo, long long hi) const {
    expect_seq(n, "value");
    std::vector<int> out;
    for (const auto& e : n) out.push_back(int_in(e, lo, hi));
    return out;
  }

  void check_schema(const YAML::Node& root, const std::string& expected) const {
    expect_map(root, "document");
    const std::string s = str(require(root, "schema"));
    if (s != expected) fail(root["schema"], "unsupported schema '" + s + "', expected '" + expected + "'");
  }
};

}  // namespace sfqsim::yaml
