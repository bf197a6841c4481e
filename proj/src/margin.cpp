#include "sfqsim/margin.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "sfqsim/errors.hpp"
#include "yaml_util.hpp"

namespace sfqsim {

namespace {

struct Nominal {
  std::optional<CycleProtocol> protocol;
  std::vector<std::vector<std::string>> labels;
};

std::string evaluate_point(const SweepSpec& spec, const std::vector<Nominal>& nominal, const std::string& param,
                           int percent) {
  for (std::size_t i = 0; i < spec.scenarios.size(); ++i) {
    Scenario sc = spec.scenarios[i];
    SimTime* f = sc.timing.field(param);
    *f = scale_percent(*f, percent);
    try {
      const ScenarioRun run = run_scenario(sc, RunOptions{nominal[i].protocol});
      if (!run.passed()) return sc.name + ": " + run.failures.front();
      const auto labels = run.labels();
      for (std::size_t w = 0; w < labels.size(); ++w) {
        if (labels[w] != nominal[i].labels[w]) {
          return sc.name + ": " + run.windows[w].label + " shows " + std::to_string(labels[w].size()) +
                 " observed pulses, nominal " + std::to_string(nominal[i].labels[w].size());
        }
      }
    } catch (const std::exception& e) {
      return sc.name + ": " + e.what();
    }
  }
  return {};
}

}  // namespace

void SweepSpec::check() const {
  if (scenarios.empty()) throw ConfigError("sweep lists no scenarios");
  if (range_percent < 0 || range_percent > 100) throw ConfigError("sweep range must be within 0..100 percent");
  if (step_percent <= 0 || (range_percent > 0 && range_percent % step_percent != 0)) {
    throw ConfigError("sweep step must be positive and divide the range");
  }
  CellTiming t;
  for (const auto& p : parameters) {
    if (t.field(p) == nullptr) throw ConfigError("unknown timing parameter '" + p + "'");
  }
}

SweepSpec parse_sweep_spec(const std::string& text, const std::string& file) {
  const yaml::Doc doc{file};
  const YAML::Node root = doc.load(text);
  doc.check_schema(root, std::string(kSweepSchema));
  doc.only_keys(root, {"schema", "name", "scenarios", "parameters", "range_percent", "step_percent", "flag_percents",
                       "jobs"});
  SweepSpec s;
  s.name = root["name"] ? doc.str(root["name"]) : file;
  const std::filesystem::path base = std::filesystem::path(file).parent_path();
  const YAML::Node scs = doc.require(root, "scenarios");
  doc.expect_seq(scs, "scenarios");
  for (const auto& n : scs) s.scenarios.push_back(load_scenario((base / doc.str(n)).string()));
  if (const YAML::Node p = root["parameters"]) {
    doc.expect_seq(p, "parameters");
    CellTiming t;
    for (const auto& n : p) {
      const std::string name = doc.str(n);
      if (t.field(name) == nullptr) doc.fail(n, "unknown timing parameter '" + name + "'");
      s.parameters.push_back(name);
    }
  } else {
    s.parameters.assign(CellTiming::kParameters.begin(), CellTiming::kParameters.end());
  }
  if (const YAML::Node v = root["range_percent"]) s.range_percent = doc.int_in(v, 0, 100);
  if (const YAML::Node v = root["step_percent"]) s.step_percent = doc.int_in(v, 1, 100);
  if (const YAML::Node v = root["flag_percents"]) s.flag_percents = doc.ints(v, 0, 100);
  if (const YAML::Node v = root["jobs"]) s.jobs = static_cast<unsigned>(doc.int_in(v, 1, 256));
  try {
    s.check();
  } catch (const ConfigError& e) {
    doc.fail(root, e.what());
  }
  return s;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_spec(ss.str(), path);
}

std::vector<std::string> SweepReport::below(int percent) const {
  std::vector<std::string> out;
  for (const auto& p : parameters) {
    if (p.margin_percent < percent) out.push_back(p.name);
  }
  return out;
}

SweepReport run_sweep(const SweepSpec& input) {
  SweepSpec spec = input;
  if (spec.parameters.empty()) spec.parameters.assign(CellTiming::kParameters.begin(), CellTiming::kParameters.end());
  spec.check();
  // Pin the derived recovery delay so sweeping its inputs leaves it alone.
  for (auto& sc : spec.scenarios) sc.timing.field("comp_delay");

  std::vector<Nominal> nominal;
  for (const auto& sc : spec.scenarios) {
    const ScenarioRun run = run_scenario(sc);
    if (!run.passed()) throw SimulationError(sc.name + " fails at nominal timing: " + run.failures.front());
    nominal.push_back({nominal_protocol(sc), run.labels()});
  }

  SweepReport rep;
  rep.name = spec.name;
  for (const auto& sc : spec.scenarios) rep.scenarios.push_back(sc.name);
  rep.range_percent = spec.range_percent;
  rep.step_percent = spec.step_percent;
  rep.flag_percents = spec.flag_percents;

  std::vector<int> grid;
  for (int p = -spec.range_percent; p <= spec.range_percent; p += spec.step_percent) grid.push_back(p);

  struct Task {
    std::size_t param;
    std::size_t point;
  };
  std::vector<Task> tasks;
  rep.parameters.resize(spec.parameters.size());
  for (std::size_t i = 0; i < spec.parameters.size(); ++i) {
    rep.parameters[i].name = spec.parameters[i];
    for (std::size_t j = 0; j < grid.size(); ++j) {
      rep.parameters[i].points.push_back({grid[j], false, {}});
      tasks.push_back({i, j});
    }
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      SweepPoint& pt = rep.parameters[tasks[k].param].points[tasks[k].point];
      pt.reason = evaluate_point(spec, nominal, spec.parameters[tasks[k].param], pt.percent);
      pt.passed = pt.reason.empty();
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(spec.jobs, static_cast<unsigned>(tasks.size())));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(work);
  }

  for (auto& p : rep.parameters) {
    int margin = -1;
    for (int m = 0; m <= spec.range_percent; m += spec.step_percent) {
      bool ok = true;
      for (const auto& pt : p.points) {
        if (std::abs(pt.percent) <= m && !pt.passed) ok = false;
      }
      if (!ok) break;
      margin = m;
    }
    p.margin_percent = std::max(margin, 0);
  }
  return rep;
}

std::string sweep_report_json(const SweepReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "sfqsim-sweep-report/1";
  j["name"] = r.name;
  j["scenarios"] = r.scenarios;
  j["range_percent"] = r.range_percent;
  j["step_percent"] = r.step_percent;
  auto params = nlohmann::ordered_json::array();
  for (const auto& p : r.parameters) {
    nlohmann::ordered_json pj;
    pj["name"] = p.name;
    pj["margin_percent"] = p.margin_percent;
    auto pts = nlohmann::ordered_json::array();
    for (const auto& pt : p.points) {
      nlohmann::ordered_json q;
      q["percent"] = pt.percent;
      q["passed"] = pt.passed;
      if (!pt.passed) q["reason"] = pt.reason;
      pts.push_back(std::move(q));
    }
    pj["points"] = std::move(pts);
    params.push_back(std::move(pj));
  }
  j["parameters"] = std::move(params);
  auto flags = nlohmann::ordered_json::array();
  for (int f : r.flag_percents) {
    nlohmann::ordered_json fj;
    fj["percent"] = f;
    fj["below"] = r.below(f);
    fj["all_pass"] = r.below(f).empty();
    flags.push_back(std::move(fj));
  }
  j["flags"] = std::move(flags);
  return j.dump(2) + "\n";
}

void print_sweep_table(std::ostream& os, const SweepReport& r) {
  os << "margin sweep '" << r.name << "' over " << r.scenarios.size() << " scenario(s), +/-" << r.range_percent
     << "% in " << r.step_percent << "% steps\n";
  for (const auto& p : r.parameters) {
    os << "  " << std::left << std::setw(18) << p.name << " +/-" << p.margin_percent << "%";
    // Report the failure closest to nominal.
    const SweepPoint* nearest = nullptr;
    for (const auto& pt : p.points) {
      if (!pt.passed && (nearest == nullptr || std::abs(pt.percent) < std::abs(nearest->percent))) nearest = &pt;
    }
    if (nearest != nullptr) {
      os << "  (fails at " << std::showpos << nearest->percent << std::noshowpos << "%: " << nearest->reason << ")";
    }
    os << '\n';
  }
  for (int f : r.flag_percents) {
    const auto low = r.below(f);
    os << "  " << f << "% line: ";
    if (low.empty()) {
      os << "all parameters pass\n";
    } else {
      os << "below:";
      for (const auto& n : low) os << ' ' << n;
      os << '\n';
    }
  }
}

}  // namespace sfqsim
