#include "qarx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace qarx {

std::vector<std::string> resolve_config(ExperimentConfig& config) {
  std::vector<std::string> warnings;
  try {
    validate_model(config.model);
    InputSpec{config.input_delta};
    Quantizer{config.epsilon};
    PenaltySchedule{config.slope_l};
    PenaltySchedule{config.slope_v};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (config.q_star == 0) throw ConfigError("q_star must be >= 1");
  if (config.p_star == 0) throw ConfigError("p_star must be >= 1");
  if (config.trials == 0) throw ConfigError("trials must be >= 1");
  if (config.threads == 0) throw ConfigError("threads must be >= 1");
  if (!(config.coefficient_bound > 0.0)) throw ConfigError("coefficient_bound must be > 0");
  if (config.output_dir.empty()) throw ConfigError("output_dir must not be empty");

  for (std::size_t k = 0; k < config.checkpoints.size(); ++k) {
    if (config.checkpoints[k] == 0) throw ConfigError("checkpoints must be >= 1");
    if (k > 0 && config.checkpoints[k] <= config.checkpoints[k - 1]) {
      throw ConfigError("checkpoints must be strictly ascending");
    }
  }
  if (config.horizon == 0) {
    if (config.checkpoints.empty()) {
      throw ConfigError("horizon must be given when there are no checkpoints");
    }
    config.horizon = config.checkpoints.back();
  }
  if (!config.checkpoints.empty() && config.checkpoints.back() > config.horizon) {
    throw ConfigError("largest checkpoint exceeds horizon");
  }

  if (!within_coefficient_bound(config.model, config.coefficient_bound)) {
    throw ConfigError("model coefficients exceed coefficient_bound");
  }
  if (config.model.p0() > config.p_star || config.model.q0() > config.q_star) {
    warnings.push_back("true orders lie outside the search grid (p* / q* too small)");
  }
  const double max_step = max_quantization_step(config.model, config.coefficient_bound);
  if (!(config.epsilon < max_step)) {
    std::ostringstream msg;
    msg << "epsilon " << config.epsilon << " is not below 1/(2(1 + p0 c)) = " << max_step;
    warnings.push_back(msg.str());
  }
  if (!check_stability(config.model)) {
    warnings.push_back("A(z) has a root on or inside the unit circle");
  }

  if (config.hypothesis) {
    try {
      validate_hypothesis(hypothesis_from(config));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("hypothesis: ") + e.what());
    }
  }
  return warnings;
}

PenaltyHypothesis hypothesis_from(const ExperimentConfig& config) {
  if (!config.hypothesis) throw ConfigError("config has no hypothesis block");
  const auto& k = *config.hypothesis;
  PenaltyHypothesis h;
  h.c = k.c.value_or(config.coefficient_bound);
  h.c1 = k.c1;
  h.c2 = k.c2;
  h.c3 = k.c3;
  h.c4 = k.c4;
  h.gamma = k.gamma;
  h.gamma_prime = k.gamma_prime;
  h.a_p0_sq = k.a_p0_sq;
  h.b_q0_sq = k.b_q0_sq;
  h.alpha1 = k.alpha1;
  h.alpha2 = k.alpha2;
  h.beta1 = k.beta1;
  h.beta2 = k.beta2;
  h.p_star = config.p_star;
  h.q_star = config.q_star;
  h.epsilon = config.epsilon;
  return h;
}

TrialResult run_trial(const ExperimentConfig& config, std::size_t trial) {
  TrialResult result;
  result.trial = trial;
  result.seed = config.base_seed + trial;

  const Trajectory traj = quantize_trajectory(
      simulate(config.model, InputSpec(config.input_delta), config.horizon, result.seed),
      Quantizer(config.epsilon));

  auto p_path = estimate_order_path(traj, OrderAxis::Ar, config.p_star, config.q_star,
                                    PenaltySchedule(config.slope_l), config.checkpoints);
  auto q_path = estimate_order_path(traj, OrderAxis::Exogenous, config.p_star, config.q_star,
                                    PenaltySchedule(config.slope_v), config.checkpoints);

  result.records.reserve(config.checkpoints.size());
  for (std::size_t k = 0; k < config.checkpoints.size(); ++k) {
    CheckpointRecord rec;
    rec.n = config.checkpoints[k];
    rec.p_hat = p_path[k].order;
    rec.q_hat = q_path[k].order;
    if (config.write_criteria) {
      rec.p_table = std::move(p_path[k].table);
      rec.q_table = std::move(q_path[k].table);
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

std::vector<TrialResult> run_experiment(const ExperimentConfig& config) {
  std::vector<TrialResult> results(config.trials);
  const std::size_t workers = std::min(config.threads, config.trials);
  if (workers <= 1) {
    for (std::size_t k = 0; k < config.trials; ++k) results[k] = run_trial(config, k);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < config.trials; k = next++) {
          try {
            results[k] = run_trial(config, k);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

namespace {

// Mode of a tally; the smallest value wins ties.
std::pair<std::size_t, std::size_t> mode_of(const std::map<std::size_t, std::size_t>& tally) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  for (const auto& [value, count] : tally) {
    if (count > best.second) best = {value, count};
  }
  return best;
}

}  // namespace

std::vector<SummaryRow> summarize(std::span<const TrialResult> results) {
  std::vector<SummaryRow> rows;
  if (results.empty()) return rows;

  const auto& first = results.front().records;
  for (std::size_t k = 0; k < first.size(); ++k) {
    std::map<std::size_t, std::size_t> p_tally;
    std::map<std::size_t, std::size_t> q_tally;
    std::size_t counted = 0;
    for (const auto& trial : results) {
      for (const auto& rec : trial.records) {
        if (rec.n != first[k].n) continue;
        ++p_tally[rec.p_hat];
        ++q_tally[rec.q_hat];
        ++counted;
      }
    }
    const auto [p_mode, p_count] = mode_of(p_tally);
    const auto [q_mode, q_count] = mode_of(q_tally);
    const auto total = static_cast<double>(counted);
    rows.push_back({first[k].n, counted, p_mode, static_cast<double>(p_count) / total, q_mode,
                    static_cast<double>(q_count) / total});
  }
  return rows;
}

double fraction_with_order(std::span<const TrialResult> results, std::size_t n, OrderAxis axis,
                           std::size_t order) {
  std::size_t hits = 0;
  std::size_t counted = 0;
  for (const auto& trial : results) {
    for (const auto& rec : trial.records) {
      if (rec.n != n) continue;
      ++counted;
      if ((axis == OrderAxis::Ar ? rec.p_hat : rec.q_hat) == order) ++hits;
    }
  }
  return counted == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(counted);
}

}  // namespace qarx
