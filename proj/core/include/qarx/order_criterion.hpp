#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qarx/arx_sim.hpp"

namespace qarx {

/// Linear penalty l_n = slope * n (also used for v_n).
class PenaltySchedule {
 public:
  explicit PenaltySchedule(double slope);
  double slope() const { return slope_; }
  double at(std::size_t n) const { return slope_ * static_cast<double>(n); }

 private:
  double slope_;
};

/// Which order varies across a criterion table: AR order with q fixed at q*,
/// or exogenous order with p fixed at p*.
enum class OrderAxis { Ar, Exogenous };

std::string_view axis_name(OrderAxis axis);  // "p" / "q"

struct CriterionCell {
  std::size_t order = 0;  // the varying index (p on the AR axis, q otherwise)
  std::size_t p = 0;
  std::size_t q = 0;
  double sigma = 0.0;
  double criterion = 0.0;
};

struct CriterionTable {
  OrderAxis axis = OrderAxis::Ar;
  std::size_t n = 0;
  double slope = 0.0;
  std::vector<CriterionCell> cells;  // ascending order
};

struct OrderSelection {
  std::size_t order = 0;
  CriterionTable table;
};

/// sigma_n(p, q) = sum_{i<n} (s_{i+1} - theta^T psi_i(p, q))^2.
double sigma_n(const Trajectory& traj, const Eigen::VectorXd& theta, std::size_t p,
               std::size_t q, std::size_t n);

/// sigma + slope * n * (p + q).
double criterion(double sigma, const PenaltySchedule& schedule, std::size_t n, std::size_t p,
                 std::size_t q);

/// Order of the cell with the smallest criterion; the first (smallest order)
/// wins exact ties. Throws std::invalid_argument for an empty table.
std::size_t argmin_order(const CriterionTable& table);

/// argmin_{0 <= p <= p*} L_n(p, q*); ties go to the smallest p.
OrderSelection estimate_p(const Trajectory& traj, std::size_t p_star, std::size_t q_star,
                          const PenaltySchedule& schedule, std::size_t n);

/// argmin_{1 <= q <= q*} V_n(p*, q); ties go to the smallest q.
OrderSelection estimate_q(const Trajectory& traj, std::size_t p_star, std::size_t q_star,
                          const PenaltySchedule& schedule, std::size_t n);

/// Order selections at every checkpoint (ascending, each <= horizon), sharing
/// Gram accumulations between checkpoints. Results equal calling estimate_p /
/// estimate_q at each checkpoint separately.
std::vector<OrderSelection> estimate_order_path(const Trajectory& traj, OrderAxis axis,
                                                std::size_t p_star, std::size_t q_star,
                                                const PenaltySchedule& schedule,
                                                std::span<const std::size_t> checkpoints);

/// User-supplied constants for the admissible penalty slopes. None of these are
/// estimated from data.
struct PenaltyHypothesis {
  double c = 1.0;            // coefficient bound
  double c1 = 0.0;           // lambda_min growth, AR axis
  double c2 = 0.0;           // lambda_min growth, exogenous axis
  double c3 = 0.0;           // lambda_max growth at (p0, q*)
  double c4 = 0.0;           // lambda_max growth at (p*, q0)
  double gamma = 0.0;        // parameter-error bound, AR axis
  double gamma_prime = 0.0;  // parameter-error bound, exogenous axis
  double a_p0_sq = 0.0;
  double b_q0_sq = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::size_t p_star = 0;
  std::size_t q_star = 0;
  double epsilon = 0.0;
};

/// Throws std::invalid_argument unless alpha1, beta1 > 0, alpha2, beta2 in (0, 1),
/// epsilon > 0, c > 0 and c1..c4 >= 0.
void validate_hypothesis(const PenaltyHypothesis& h);

/// Interval of admissible slopes (penalty / n). feasible = lo <= hi.
struct PenaltyInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool feasible = false;

  bool contains(double slope) const { return feasible && lo <= slope && slope <= hi; }
};

/// lo = 5 (1 + p* c) eps + alpha1
/// hi = (alpha2 / p*) (a_p0^2 c1 - 2 gamma sqrt(c3 (1 + p* c) eps) - 3 (1 + p* c) eps)
/// Throws std::invalid_argument for p* = 0.
PenaltyInterval penalty_interval_p(const PenaltyHypothesis& h);

/// lo = 5 (1 + p* c) eps + beta1
/// hi = (beta2 / q*) (b_q0^2 c2 - 2 gamma' sqrt(c4 (1 + p* c) eps) - 3 (1 + p* c) eps)
/// Throws std::invalid_argument for q* = 0.
PenaltyInterval penalty_interval_q(const PenaltyHypothesis& h);

}  // namespace qarx
