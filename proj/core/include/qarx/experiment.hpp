#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qarx/arx_sim.hpp"
#include "qarx/order_criterion.hpp"

namespace qarx {

/// Invalid or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing experiment artifacts (CLI exit code 2).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Constants of a penalty hypothesis as given in a config file; p*, q* and
/// epsilon come from the surrounding experiment.
struct HypothesisConstants {
  std::optional<double> c;  // defaults to the experiment's coefficient_bound
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
  double gamma = 0.0, gamma_prime = 0.0;
  double a_p0_sq = 0.0, b_q0_sq = 0.0;
  double alpha1 = 0.0, alpha2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0;

  bool operator==(const HypothesisConstants&) const = default;
};

/**
 * @brief One Monte Carlo order-estimation study.
 *
 * A config runs a single input law; the AR-order and exogenous-order studies
 * with different input half-widths need two configs.
 */
struct ExperimentConfig {
  ArxModel model;
  double input_delta = 1.0;
  double epsilon = 0.001;
  std::size_t p_star = 3;
  std::size_t q_star = 3;
  double slope_l = 0.006;
  double slope_v = 0.006;
  std::size_t horizon = 0;               // 0 resolves to the last checkpoint
  std::vector<std::size_t> checkpoints;  // ascending
  std::size_t trials = 20;
  std::uint64_t base_seed = 1;
  std::string output_dir = "results";

  double coefficient_bound = 1.0;  // c, for the coefficient and step-size conditions
  bool write_criteria = true;      // emit criteria.csv
  std::size_t threads = 1;
  std::optional<HypothesisConstants> hypothesis;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Checks invariants, fills horizon when it is 0, and returns non-fatal
/// warnings (step size above 1 / (2 (1 + p0 c)), unstable A(z)).
/// Throws ConfigError on violations.
std::vector<std::string> resolve_config(ExperimentConfig& config);

/// Full penalty hypothesis built from the config; throws ConfigError when the
/// config has no hypothesis block.
PenaltyHypothesis hypothesis_from(const ExperimentConfig& config);

struct CheckpointRecord {
  std::size_t n = 0;
  std::size_t p_hat = 0;
  std::size_t q_hat = 0;
  std::optional<CriterionTable> p_table;
  std::optional<CriterionTable> q_table;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::vector<CheckpointRecord> records;  // one per checkpoint, ascending n
};

/// Trial k simulates with seed base_seed + k, quantizes, and estimates p and q
/// at every checkpoint. Depends only on the config and k.
TrialResult run_trial(const ExperimentConfig& config, std::size_t trial);

/// All trials, ordered by trial index regardless of config.threads.
/// The config must already be resolved.
std::vector<TrialResult> run_experiment(const ExperimentConfig& config);

struct SummaryRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t p_mode = 0;
  double p_mode_fraction = 0.0;
  std::size_t q_mode = 0;
  double q_mode_fraction = 0.0;
};

/// Per checkpoint: modal p_hat / q_hat (smallest value on ties) and the
/// fraction of trials that hit it.
std::vector<SummaryRow> summarize(std::span<const TrialResult> results);

/// Fraction of trials whose p_hat (or q_hat) at checkpoint n equals `order`.
double fraction_with_order(std::span<const TrialResult> results, std::size_t n, OrderAxis axis,
                           std::size_t order);

}  // namespace qarx
