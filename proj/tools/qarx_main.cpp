// qarx: Monte Carlo order estimation for ARX systems observed through a
// uniform quantizer.
//
//   qarx run --config <path>          simulate, estimate, write CSV artifacts
//   qarx summarize --dir <path>       re-aggregate orders.csv into summary.csv
//   qarx feasibility --config <path>  evaluate the admissible penalty slopes
//
// Exit codes: 0 success, 1 invalid config or usage, 2 runtime / IO failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qarx/experiment.hpp"
#include "qarx/results_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

qarx::ExperimentConfig load_resolved(const std::string& path) {
  auto config = qarx::load_config(path);
  for (const auto& warning : qarx::resolve_config(config)) {
    std::cerr << "warning: " << warning << '\n';
  }
  return config;
}

int cmd_run(const std::string& config_path) {
  const auto config = load_resolved(config_path);
  const auto results = qarx::run_experiment(config);
  qarx::write_results(results, config);
  std::cout << qarx::summary_text(qarx::summarize(results));
  std::cout << "wrote " << config.trials << " trial(s) to " << config.output_dir << '\n';
  return kExitOk;
}

int cmd_summarize(const std::string& dir) {
  const auto results = qarx::read_orders(dir);
  const auto rows = qarx::summarize(results);
  qarx::write_summary(dir, rows);
  std::cout << qarx::summary_text(rows);
  return kExitOk;
}

void print_interval(const char* label, const qarx::PenaltyInterval& iv, double slope) {
  std::printf("%s: lo = %.17g  hi = %.17g  feasible = %s\n", label, iv.lo, iv.hi,
              iv.feasible ? "yes" : "no");
  std::printf("  configured slope %.17g %s\n", slope,
              iv.contains(slope) ? "lies inside the interval" : "is NOT inside the interval");
}

int cmd_feasibility(const std::string& config_path) {
  const auto config = load_resolved(config_path);
  const auto h = qarx::hypothesis_from(config);
  print_interval("l_n / n (AR order)", qarx::penalty_interval_p(h), config.slope_l);
  print_interval("v_n / n (exogenous order)", qarx::penalty_interval_q(h), config.slope_v);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order estimation of ARX systems from quantized outputs"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Run a Monte Carlo order-estimation experiment");
  run->add_option("--config", run_config, "Experiment config (JSON)")->required();

  std::string summary_dir;
  auto* summarize = app.add_subcommand("summarize", "Re-aggregate orders.csv in a result dir");
  summarize->add_option("--dir", summary_dir, "Directory holding orders.csv")->required();

  std::string feas_config;
  auto* feasibility =
      app.add_subcommand("feasibility", "Evaluate penalty-slope intervals for a hypothesis");
  feasibility->add_option("--config", feas_config, "Config with a hypothesis block")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_config);
    if (*summarize) return cmd_summarize(summary_dir);
    if (*feasibility) return cmd_feasibility(feas_config);
  } catch (const qarx::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitConfig;
}
