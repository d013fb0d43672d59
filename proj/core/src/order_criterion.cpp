#include "qarx/order_criterion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qarx/ls_estimator.hpp"

namespace qarx {

PenaltySchedule::PenaltySchedule(double slope) : slope_(slope) {
  if (!(slope > 0.0) || !std::isfinite(slope)) {
    throw std::invalid_argument("penalty slope must be positive and finite");
  }
}

std::string_view axis_name(OrderAxis axis) { return axis == OrderAxis::Ar ? "p" : "q"; }

double sigma_n(const Trajectory& traj, const Eigen::VectorXd& theta, std::size_t p,
               std::size_t q, std::size_t n) {
  if (theta.size() != static_cast<Eigen::Index>(p + q)) {
    throw std::invalid_argument("theta length does not equal p + q");
  }
  if (q == 0) throw std::invalid_argument("order q must be >= 1");
  if (!traj.quantized()) throw std::invalid_argument("sigma_n needs a quantized trajectory");
  if (n > traj.horizon) throw std::out_of_range("sample count exceeds trajectory horizon");

  Eigen::VectorXd psi(theta.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fill_regressor(traj, i, p, q, psi);
    const double r = traj.s[i + 1] - theta.dot(psi);
    sum += r * r;
  }
  return sum;
}

double criterion(double sigma, const PenaltySchedule& schedule, std::size_t n, std::size_t p,
                 std::size_t q) {
  return sigma + schedule.at(n) * static_cast<double>(p + q);
}

std::size_t argmin_order(const CriterionTable& table) {
  if (table.cells.empty()) throw std::invalid_argument("empty criterion table");
  const CriterionCell* best = &table.cells.front();
  for (const auto& cell : table.cells) {
    if (cell.criterion < best->criterion) best = &cell;  // strict: ties keep the earlier cell
  }
  return best->order;
}

namespace {

struct Cell {
  std::size_t order;
  GramState gram;
};

std::vector<Cell> grid_cells(OrderAxis axis, std::size_t p_star, std::size_t q_star) {
  if (q_star == 0) throw std::invalid_argument("q* must be >= 1");
  std::vector<Cell> cells;
  if (axis == OrderAxis::Ar) {
    for (std::size_t p = 0; p <= p_star; ++p) cells.push_back({p, GramState(p, q_star)});
  } else {
    for (std::size_t q = 1; q <= q_star; ++q) cells.push_back({q, GramState(p_star, q)});
  }
  return cells;
}

}  // namespace

std::vector<OrderSelection> estimate_order_path(const Trajectory& traj, OrderAxis axis,
                                                std::size_t p_star, std::size_t q_star,
                                                const PenaltySchedule& schedule,
                                                std::span<const std::size_t> checkpoints) {
  if (!traj.quantized()) {
    throw std::invalid_argument("order estimation needs a quantized trajectory");
  }
  std::size_t previous = 0;
  for (std::size_t n : checkpoints) {
    if (n == 0) throw std::invalid_argument("checkpoint sample counts must be >= 1");
    if (n <= previous) throw std::invalid_argument("checkpoints must be strictly ascending");
    if (n > traj.horizon) {
      throw std::out_of_range("checkpoint " + std::to_string(n) + " exceeds horizon " +
                              std::to_string(traj.horizon));
    }
    previous = n;
  }

  auto cells = grid_cells(axis, p_star, q_star);
  std::vector<OrderSelection> path;
  path.reserve(checkpoints.size());

  std::size_t consumed = 0;
  for (std::size_t n : checkpoints) {
    OrderSelection sel;
    sel.table.axis = axis;
    sel.table.n = n;
    sel.table.slope = schedule.slope();

    for (auto& cell : cells) {
      const std::size_t p = cell.gram.p();
      const std::size_t q = cell.gram.q();
      Eigen::VectorXd psi(static_cast<Eigen::Index>(p + q));
      for (std::size_t i = consumed; i < n; ++i) {
        fill_regressor(traj, i, p, q, psi);
        cell.gram.accumulate(psi, traj.s[i + 1]);
      }
      const Eigen::VectorXd theta = solve_theta(cell.gram);
      const double sigma = sigma_n(traj, theta, p, q, n);
      const double value = criterion(sigma, schedule, n, p, q);
      sel.table.cells.push_back({cell.order, p, q, sigma, value});
    }
    sel.order = argmin_order(sel.table);
    consumed = n;
    path.push_back(std::move(sel));
  }
  return path;
}

OrderSelection estimate_p(const Trajectory& traj, std::size_t p_star, std::size_t q_star,
                          const PenaltySchedule& schedule, std::size_t n) {
  const std::size_t checkpoint[] = {n};
  return std::move(
      estimate_order_path(traj, OrderAxis::Ar, p_star, q_star, schedule, checkpoint).front());
}

OrderSelection estimate_q(const Trajectory& traj, std::size_t p_star, std::size_t q_star,
                          const PenaltySchedule& schedule, std::size_t n) {
  const std::size_t checkpoint[] = {n};
  return std::move(
      estimate_order_path(traj, OrderAxis::Exogenous, p_star, q_star, schedule, checkpoint)
          .front());
}

void validate_hypothesis(const PenaltyHypothesis& h) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(h.alpha1 > 0.0, "alpha1 must be > 0");
  require(h.beta1 > 0.0, "beta1 must be > 0");
  require(h.alpha2 > 0.0 && h.alpha2 < 1.0, "alpha2 must lie in (0, 1)");
  require(h.beta2 > 0.0 && h.beta2 < 1.0, "beta2 must lie in (0, 1)");
  require(h.epsilon > 0.0, "epsilon must be > 0");
  require(h.c > 0.0, "coefficient bound c must be > 0");
  require(h.c1 >= 0.0 && h.c2 >= 0.0 && h.c3 >= 0.0 && h.c4 >= 0.0,
          "growth constants c1..c4 must be >= 0");
  require(h.a_p0_sq >= 0.0 && h.b_q0_sq >= 0.0, "squared trailing coefficients must be >= 0");
}

namespace {

// Shared shape of both intervals; `order_bound` is p* or q* in the leading factor.
PenaltyInterval penalty_interval(const PenaltyHypothesis& h, double margin, double fraction,
                                 std::size_t order_bound, double trailing_sq, double growth,
                                 double lambda_max_growth, double error_bound) {
  validate_hypothesis(h);
  const double k = (1.0 + static_cast<double>(h.p_star) * h.c) * h.epsilon;
  PenaltyInterval out;
  out.lo = 5.0 * k + margin;
  out.hi = fraction / static_cast<double>(order_bound) *
           (trailing_sq * growth - 2.0 * error_bound * std::sqrt(lambda_max_growth * k) - 3.0 * k);
  out.feasible = out.lo <= out.hi;
  return out;
}

}  // namespace

PenaltyInterval penalty_interval_p(const PenaltyHypothesis& h) {
  if (h.p_star == 0) throw std::invalid_argument("p* must be >= 1 for the AR penalty interval");
  return penalty_interval(h, h.alpha1, h.alpha2, h.p_star, h.a_p0_sq, h.c1, h.c3, h.gamma);
}

PenaltyInterval penalty_interval_q(const PenaltyHypothesis& h) {
  if (h.q_star == 0) throw std::invalid_argument("q* must be >= 1 for the exogenous interval");
  return penalty_interval(h, h.beta1, h.beta2, h.q_star, h.b_q0_sq, h.c2, h.c4, h.gamma_prime);
}

}  // namespace qarx
