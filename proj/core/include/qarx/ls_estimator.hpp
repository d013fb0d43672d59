#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "qarx/arx_sim.hpp"

namespace qarx {

/// psi_i(p, q) = [s_i, ..., s_{i-p+1}, u_i, ..., u_{i-q+1}]; negative indices are 0.
struct Regressor {
  std::size_t p = 0;
  std::size_t q = 0;
  Eigen::VectorXd entries;
};

/// Throws std::out_of_range unless 0 <= i < horizon, and std::invalid_argument
/// for q = 0 or an unquantized trajectory.
Regressor build_regressor(const Trajectory& traj, std::size_t i, std::size_t p, std::size_t q);

/// Writes psi_i(p, q) into `out` (length p + q) without allocating.
/// No range checks; build_regressor is the checked entry point.
void fill_regressor(const Trajectory& traj, std::size_t i, std::size_t p, std::size_t q,
                    Eigen::Ref<Eigen::VectorXd> out);

/**
 * @brief Regularized normal equations for one (p, q) pair.
 *
 * Holds gram = I + sum_{i<n} psi_i psi_i^T and moment = sum_{i<n} psi_i s_{i+1}.
 * Samples are added in call order, so equal call sequences give bit-identical
 * states.
 */
class GramState {
 public:
  GramState(std::size_t p, std::size_t q);

  /// Throws std::invalid_argument when psi does not match (p, q).
  void accumulate(const Regressor& psi, double s_next);
  /// Unchecked variant for a raw vector of length dim().
  void accumulate(const Eigen::Ref<const Eigen::VectorXd>& psi, double s_next);

  std::size_t p() const { return p_; }
  std::size_t q() const { return q_; }
  std::size_t dim() const { return p_ + q_; }
  std::size_t count() const { return count_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& moment() const { return moment_; }

  /// Builds a state from explicit parts; gram must be symmetric positive definite.
  static GramState from_parts(std::size_t p, std::size_t q, Eigen::MatrixXd gram,
                              Eigen::VectorXd moment, std::size_t count);

 private:
  std::size_t p_;
  std::size_t q_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd moment_;
  std::size_t count_ = 0;
};

/// Batch construction over the first n samples (i = 0 .. n-1). Uses the same
/// summation order as repeated accumulate calls.
GramState build_gram(const Trajectory& traj, std::size_t p, std::size_t q, std::size_t n);

/// theta_n(p, q) = gram^{-1} moment via Cholesky. Layout [-a_1n .. -a_pn, b_1n .. b_qn].
/// Throws std::runtime_error if the factorization fails.
Eigen::VectorXd solve_theta(const GramState& state);

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Smallest and largest eigenvalue of gram (symmetric eigensolver).
EigenExtremes lambda_extremes(const GramState& state);

/// Parameter vector laid out for reference orders (p_ref, q_ref):
/// [x_1 .. x_{p_ref}, y_1 .. y_{q_ref}], zero beyond the orders that produced it.
struct PaddedTheta {
  std::size_t p_ref = 0;
  std::size_t q_ref = 0;
  Eigen::VectorXd values;
};

PaddedTheta pad_theta(const Eigen::VectorXd& theta, std::size_t p, std::size_t q,
                      std::size_t p_ref, std::size_t q_ref);

/// theta-bar(p_ref, q_ref) of the true system: [-a_1 .. -a_{p_ref}, b_1 .. b_{q_ref}]
/// with a_i = 0 for i > p0 and b_j = 0 for j > q0.
PaddedTheta true_theta(const ArxModel& model, std::size_t p_ref, std::size_t q_ref);

/// Euclidean norm of truth - estimate. Throws on layout mismatch.
double param_error_norm(const PaddedTheta& estimate, const PaddedTheta& truth);

}  // namespace qarx
