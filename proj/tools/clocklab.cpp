// clocklab-cli: scenario runner for the clock experiments.
//
//   clocklab-cli gedanken box --config box.cfg --set dq=2e-6
//   clocklab-cli quantum bound --config sweep.cfg
//   clocklab-cli run --config any.cfg
//
// Exit status: 0 all checks pass, 1 a check failed, 2 configuration error,
// 3 runtime error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "clocklab/cli/runner.hpp"

namespace {

using clocklab::cli::Kind;

enum Exit { kPass = 0, kCheckFailed = 1, kConfigError = 2, kRuntimeError = 3 };

struct Options {
  std::string config;
  std::vector<std::string> sets;
  bool quiet = false;
};

int execute(const Options& opt, std::optional<Kind> kind) {
  std::string text;
  if (!opt.config.empty()) {
    std::ifstream in(opt.config, std::ios::binary);
    if (!in) {
      std::cerr << "config error: cannot read " << opt.config << "\n";
      return kConfigError;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  clocklab::cli::ScenarioConfig cfg;
  try {
    cfg = clocklab::cli::parse_config(text, opt.sets, kind);
  } catch (const clocklab::cli::ConfigError& e) {
    for (const auto& v : e.violations()) std::cerr << "config error: " << v << "\n";
    return kConfigError;
  }

  clocklab::cli::RunReport report;
  try {
    report = clocklab::cli::run(cfg);
  } catch (const clocklab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }

  const std::string json = clocklab::cli::to_json(report).dump(2) + "\n";
  if (!cfg.report.empty()) {
    std::ofstream out(cfg.report, std::ios::binary | std::ios::trunc);
    out << json;
    if (!out) {
      std::cerr << "error: cannot write " << cfg.report << "\n";
      return kRuntimeError;
    }
  } else if (!opt.quiet) {
    std::cout << json;
  }
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured
              << "  tolerance=" << c.tolerance << "\n";
  }
  return report.all_passed() ? kPass : kCheckFailed;
}

CLI::App* leaf(CLI::App& parent, const std::string& name, const std::string& help, Options& opt) {
  auto* cmd = parent.add_subcommand(name, help);
  cmd->add_option("-c,--config", opt.config, "scenario file (key = value [unit] lines)");
  cmd->add_option("-s,--set", opt.sets, "override a key, e.g. --set quantum.e0=12")->take_all();
  cmd->add_flag("-q,--quiet", opt.quiet, "do not print the JSON report");
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clock experiments: gedanken estimates, classical trajectories, quantum clocks"};
  app.require_subcommand(1);
  Options opt;
  std::optional<Kind> kind;
  bool chosen = false;

  auto bind = [&](CLI::App* cmd, std::optional<Kind> k) {
    cmd->callback([&, k] {
      kind = k;
      chosen = true;
    });
  };

  auto* gedanken = app.add_subcommand("gedanken", "mass and time uncertainty estimates");
  gedanken->require_subcommand(1);
  bind(leaf(*gedanken, "box", "Einstein box weighed on a spring balance", opt), Kind::gedanken_box);
  bind(leaf(*gedanken, "efield", "charged clock weighed by an electric field", opt),
       Kind::gedanken_efield);

  auto* classical = app.add_subcommand("classical", "extended phase-space clock dynamics");
  classical->require_subcommand(1);
  bind(leaf(*classical, "trajectory", "integrate a clock trajectory", opt),
       Kind::classical_trajectory);
  bind(leaf(*classical, "brackets", "Poisson and Dirac brackets at seeded points", opt),
       Kind::classical_brackets);

  auto* quantum = app.add_subcommand("quantum", "Gaussian quantum clocks");
  quantum->require_subcommand(1);
  bind(leaf(*quantum, "moments", "proper-time moments and the variance law", opt),
       Kind::quantum_moments);
  bind(leaf(*quantum, "bound", "sweep against the time-keeping bound", opt),
       Kind::quantum_bound_sweep);
  bind(leaf(*quantum, "optimize", "minimize Var tau(t) over the energy width", opt),
       Kind::quantum_optimize);

  bind(leaf(app, "run", "run a scenario whose kind is given in the file", opt), std::nullopt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfigError;
  }
  if (!chosen) return kConfigError;
  return execute(opt, kind);
}
