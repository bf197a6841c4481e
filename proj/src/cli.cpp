#include "sfqsim/cli.hpp"

#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "sfqsim/errors.hpp"
#include "sfqsim/experiment.hpp"
#include "sfqsim/margin.hpp"
#include "sfqsim/scenario.hpp"
#include "sfqsim/trace_io.hpp"
#include "yaml_util.hpp"

namespace sfqsim {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  body(f);
  f.flush();
  if (!f) throw IoError("error while writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct SimulateArgs {
  std::string scenario;
  std::string golden;
  std::string trace;
  std::string waveform;
  std::string format = "vcd";
};

int simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  const Scenario sc = load_scenario(a.scenario);
  const ScenarioRun run = run_scenario(sc);

  out << "scenario " << sc.name << '\n';
  const auto labels = run.labels();
  if (std::holds_alternative<NeuronScenario>(sc.body)) {
    std::size_t cycle = 0;
    for (std::size_t i = 0; i < run.windows.size(); ++i) {
      const auto& w = run.windows[i];
      out << "  " << w.label;
      if (w.label.starts_with("cycle")) out << ": " << run.cycle_outputs[cycle++] << " output pulse(s)";
      out << '\n';
    }
  } else {
    for (const auto& wire : run.observed) out << "  " << wire << ": " << run.trace.count(wire) << " pulse(s)\n";
  }
  out << "  " << run.trace.size() << " events\n";

  if (!a.trace.empty()) write_file(a.trace, [&](std::ostream& os) { write_trace_csv(os, run.trace); });
  if (!a.waveform.empty()) {
    write_file(a.waveform, [&](std::ostream& os) {
      if (a.format == "csv") {
        write_trace_csv(os, run.trace);
      } else {
        write_vcd(os, run.trace);
      }
    });
  }

  int code = kExitOk;
  for (const auto& f : run.failures) {
    err << "expectation failed: " << f << '\n';
    code = kExitMismatch;
  }
  if (!a.golden.empty()) {
    const std::string diff = compare_traces(load_trace_csv(a.golden), trace_rows(run.trace));
    if (diff.empty()) {
      out << "golden: match\n";
    } else {
      err << "golden mismatch: " << diff << '\n';
      code = kExitMismatch;
    }
  }
  if (code == kExitOk) out << "PASS\n";
  return code;
}

int sweep(const std::string& spec_path, const std::string& out_path, unsigned jobs, std::ostream& out) {
  SweepSpec spec = load_sweep_spec(spec_path);
  if (jobs > 0) spec.jobs = jobs;
  const SweepReport rep = run_sweep(spec);
  print_sweep_table(out, rep);
  if (!out_path.empty()) write_file(out_path, [&](std::ostream& os) { os << sweep_report_json(rep); });
  return kExitOk;
}

int experiment(const std::string& path, const std::string& out_path, unsigned jobs, std::ostream& out) {
  ExperimentSpec spec = load_experiment(path);
  if (jobs > 0) spec.jobs = jobs;
  const ExperimentResult r = run_experiment(spec);
  out << "experiment " << r.name << ": " << r.data.samples.size() << " samples, " << r.search.candidates.size()
      << " candidate(s)\n";
  for (std::size_t i = 0; i < r.search.candidates.size(); ++i) {
    const auto& c = r.search.candidates[i];
    out << "  [";
    for (std::size_t l = 0; l < c.thresholds.size(); ++l) out << (l ? "," : "") << c.thresholds[l];
    out << "] accuracy " << c.correct << "/" << r.data.samples.size() << ", dead " << c.dead.size()
        << ", always-fire " << c.always_fire.size() << (i == r.search.best ? "  <- selected" : "") << '\n';
  }
  out << "  revived " << r.revived.size() << " neuron(s)\n";
  if (!out_path.empty()) write_file(out_path, [&](std::ostream& os) { os << experiment_report_json(r); });
  return kExitOk;
}

int validate_file(const std::string& path, std::ostream& out) {
  const std::string text = read_file(path);
  const yaml::Doc doc{path};
  const YAML::Node root = doc.load(text);
  doc.expect_map(root, "document");
  const std::string schema = doc.str(doc.require(root, "schema"));
  if (schema == kScenarioSchema) {
    const Scenario sc = parse_scenario(text, path);
    if (const auto* n = std::get_if<NetlistScenario>(&sc.body)) {
      const Netlist nl = build_scenario_netlist(*n, sc.timing);
      const auto diags = validate(nl);
      if (!diags.empty()) {
        std::string msg = "netlist failed validation:";
        for (const auto& d : diags) msg += "\n  " + std::string(to_string(d.kind)) + ": " + d.message;
        throw ConfigError(msg);
      }
    } else {
      NeuronConfig cfg = std::get<NeuronScenario>(sc.body).config;
      cfg.timing = sc.timing;
      build_neuron(cfg);
      cycle_protocol(cfg);
    }
  } else if (schema == kSweepSchema) {
    parse_sweep_spec(text, path);
  } else if (schema == kExperimentSchema) {
    const ExperimentSpec spec = parse_experiment(text, path);
    for (const auto& l : spec.network.layers) build_layer(l);
  } else {
    doc.fail(root["schema"], "unknown schema '" + schema + "'");
  }
  out << "ok: " << path << " (" << schema << ")\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-level simulator for SFQ threshold-adjustable neurons", "sfqsim"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run a scenario and compare against a golden trace");
  simulate_cmd->add_option("scenario", sim.scenario, "Scenario file")->required();
  simulate_cmd->add_option("--golden", sim.golden, "Golden trace (CSV) to compare against");
  simulate_cmd->add_option("--trace", sim.trace, "Write the full trace as CSV");
  auto* wave = simulate_cmd->add_option("--waveform", sim.waveform, "Write a waveform file");
  simulate_cmd->add_option("--format", sim.format, "Waveform format")
      ->check(CLI::IsMember({"vcd", "vc", "csv"}))
      ->needs(wave);

  std::string sweep_spec, sweep_out;
  unsigned sweep_jobs = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Timing margin sweep");
  sweep_cmd->add_option("spec", sweep_spec, "Sweep spec file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Write the JSON report");
  sweep_cmd->add_option("--jobs", sweep_jobs, "Worker threads (overrides the spec)");

  std::string exp_config, exp_out;
  unsigned exp_jobs = 0;
  auto* exp_cmd = app.add_subcommand("experiment", "Threshold search on a synthetic dataset");
  exp_cmd->add_option("config", exp_config, "Experiment file")->required();
  exp_cmd->add_option("--out", exp_out, "Write the JSON report");
  exp_cmd->add_option("--jobs", exp_jobs, "Worker threads (overrides the config)");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario, sweep or experiment file");
  validate_cmd->add_option("file", validate_path, "File to check")->required();

  std::vector<std::string> argv_store{"sfqsim"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (*simulate_cmd) return simulate(sim, out, err);
    if (*sweep_cmd) return sweep(sweep_spec, sweep_out, sweep_jobs, out);
    if (*exp_cmd) return experiment(exp_config, exp_out, exp_jobs, out);
    return validate_file(validate_path, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const SimulationError& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace sfqsim
