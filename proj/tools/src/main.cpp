#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "vlcqos/cli/config.hpp"
#include "vlcqos/cli/csv_table.hpp"
#include "vlcqos/cli/experiments.hpp"

#ifndef VLCQOS_VERSION
#define VLCQOS_VERSION "unknown"
#endif

namespace {

using namespace vlcqos::cli;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;

struct Flags {
  std::string config;
  std::string out;
  std::uint64_t seed = 20240607;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

bool emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout.flush());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  return static_cast<bool>(f.flush());
}

int run(Experiment experiment, const Flags& flags) {
  ExperimentSpec spec;
  try {
    spec = flags.config.empty() ? default_spec(experiment)
                                : load_config(flags.config, experiment);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }

  const RunOptions opts{flags.seed, flags.threads};
  Table table;
  bool passed = true;
  try {
    switch (experiment) {
      case Experiment::OptRate: table = run_opt_rate_sweep(spec, opts); break;
      case Experiment::EffectiveCapacity: table = run_ec_sweep(spec, opts); break;
      case Experiment::MaxArrival: table = run_max_arrival_sweep(spec, opts); break;
      case Experiment::DelayBound: table = run_delay_bound_sweep(spec, opts); break;
      case Experiment::Validate: {
        auto report = run_validate(spec, opts);
        for (const auto& r : report.table.rows) {
          std::fprintf(stderr, "%s  %s  %s  %s\n", r[2] == "pass" ? "PASS" : "FAIL", r[0].c_str(),
                       r[1].c_str(), r[4].c_str());
        }
        table = std::move(report.table);
        passed = report.passed;
        break;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }

  std::ostringstream text;
  write_csv(text, table, {VLCQOS_VERSION, spec_hash(spec), experiment_name(experiment), flags.seed});
  if (!emit(text.str(), flags.out)) {
    std::fprintf(stderr, "error: cannot write %s\n", flags.out.c_str());
    return kExitConfig;
  }
  return passed ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"VLC fixed-rate QoS analysis: figure sweeps and validation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", VLCQOS_VERSION);

  Flags flags;
  Experiment chosen = Experiment::OptRate;
  const std::pair<Experiment, const char*> commands[] = {
      {Experiment::OptRate, "Optimal fixed rate vs target exponent and power"},
      {Experiment::EffectiveCapacity, "Effective capacity vs theta for theta_t-optimal rates"},
      {Experiment::MaxArrival, "Maximum average arrival rate, fixed rate vs full CSI"},
      {Experiment::DelayBound, "Non-asymptotic delay bounds vs average arrival rate"},
      {Experiment::Validate, "Run the acceptance checks; exit 2 on any failure"},
  };
  for (const auto& [e, help] : commands) {
    auto* sub = app.add_subcommand(experiment_name(e), help);
    sub->add_option("--config", flags.config, "Config file (defaults when omitted)");
    sub->add_option("--out", flags.out, "Output CSV path (stdout when omitted)");
    sub->add_option("--seed", flags.seed, "Seed for simulation-backed checks");
    sub->add_option("--threads", flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->callback([&chosen, e = e] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return run(chosen, flags);
}
