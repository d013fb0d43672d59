#include "qarx/ls_estimator.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <stdexcept>
#include <string>

namespace qarx {

namespace {

void require_quantized(const Trajectory& traj) {
  if (!traj.quantized()) {
    throw std::invalid_argument("regressors are built from a quantized trajectory");
  }
}

}  // namespace

void fill_regressor(const Trajectory& traj, std::size_t i, std::size_t p, std::size_t q,
                    Eigen::Ref<Eigen::VectorXd> out) {
  for (std::size_t k = 0; k < p; ++k) {
    out(static_cast<Eigen::Index>(k)) = (k <= i) ? traj.s[i - k] : 0.0;
  }
  for (std::size_t k = 0; k < q; ++k) {
    out(static_cast<Eigen::Index>(p + k)) = (k <= i) ? traj.u[i - k] : 0.0;
  }
}

Regressor build_regressor(const Trajectory& traj, std::size_t i, std::size_t p, std::size_t q) {
  if (q == 0) throw std::invalid_argument("regressor order q must be >= 1");
  require_quantized(traj);
  if (i >= traj.horizon) {
    throw std::out_of_range("regressor index " + std::to_string(i) + " outside [0, " +
                            std::to_string(traj.horizon) + ")");
  }
  Regressor psi{p, q, Eigen::VectorXd(static_cast<Eigen::Index>(p + q))};
  fill_regressor(traj, i, p, q, psi.entries);
  return psi;
}

GramState::GramState(std::size_t p, std::size_t q)
    : p_(p),
      q_(q),
      gram_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p + q),
                                      static_cast<Eigen::Index>(p + q))),
      moment_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p + q))) {
  if (q == 0) throw std::invalid_argument("Gram state order q must be >= 1");
}

void GramState::accumulate(const Regressor& psi, double s_next) {
  if (psi.p != p_ || psi.q != q_ || psi.entries.size() != static_cast<Eigen::Index>(dim())) {
    throw std::invalid_argument("regressor shape does not match the Gram state");
  }
  accumulate(psi.entries, s_next);
}

void GramState::accumulate(const Eigen::Ref<const Eigen::VectorXd>& psi, double s_next) {
  const Eigen::Index d = gram_.rows();
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) gram_(r, c) += psi(r) * psi(c);
    moment_(c) += psi(c) * s_next;
  }
  ++count_;
}

GramState GramState::from_parts(std::size_t p, std::size_t q, Eigen::MatrixXd gram,
                                Eigen::VectorXd moment, std::size_t count) {
  const auto d = static_cast<Eigen::Index>(p + q);
  if (gram.rows() != d || gram.cols() != d || moment.size() != d) {
    throw std::invalid_argument("Gram parts do not match (p, q)");
  }
  GramState state(p, q);
  state.gram_ = std::move(gram);
  state.moment_ = std::move(moment);
  state.count_ = count;
  return state;
}

GramState build_gram(const Trajectory& traj, std::size_t p, std::size_t q, std::size_t n) {
  if (q == 0) throw std::invalid_argument("Gram state order q must be >= 1");
  require_quantized(traj);
  if (n > traj.horizon) throw std::out_of_range("sample count exceeds trajectory horizon");

  const auto d = static_cast<Eigen::Index>(p + q);
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), d);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd row(d);
    fill_regressor(traj, i, p, q, row);
    design.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }

  Eigen::MatrixXd gram(d, d);
  Eigen::VectorXd moment(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      double acc = (r == c) ? 1.0 : 0.0;
      for (Eigen::Index i = 0; i < design.rows(); ++i) acc += design(i, r) * design(i, c);
      gram(r, c) = acc;
    }
    double m = 0.0;
    for (Eigen::Index i = 0; i < design.rows(); ++i) m += design(i, c) * traj.s[i + 1];
    moment(c) = m;
  }
  return GramState::from_parts(p, q, std::move(gram), std::move(moment), n);
}

Eigen::VectorXd solve_theta(const GramState& state) {
  Eigen::LLT<Eigen::MatrixXd> llt(state.gram());
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("Cholesky factorization of the regularized Gram matrix failed");
  }
  return llt.solve(state.moment());
}

EigenExtremes lambda_extremes(const GramState& state) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(state.gram(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver did not converge");
  }
  const auto& ev = solver.eigenvalues();  // ascending
  return {ev(0), ev(ev.size() - 1)};
}

PaddedTheta pad_theta(const Eigen::VectorXd& theta, std::size_t p, std::size_t q,
                      std::size_t p_ref, std::size_t q_ref) {
  if (theta.size() != static_cast<Eigen::Index>(p + q)) {
    throw std::invalid_argument("theta length does not equal p + q");
  }
  if (p > p_ref || q > q_ref) {
    throw std::invalid_argument("padding target must not be smaller than the source orders");
  }
  PaddedTheta out{p_ref, q_ref, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p_ref + q_ref))};
  const auto ip = static_cast<Eigen::Index>(p);
  const auto iq = static_cast<Eigen::Index>(q);
  out.values.head(ip) = theta.head(ip);
  out.values.segment(static_cast<Eigen::Index>(p_ref), iq) = theta.tail(iq);
  return out;
}

PaddedTheta true_theta(const ArxModel& model, std::size_t p_ref, std::size_t q_ref) {
  validate_model(model);
  PaddedTheta out{p_ref, q_ref, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p_ref + q_ref))};
  for (std::size_t i = 0; i < p_ref && i < model.p0(); ++i) {
    out.values(static_cast<Eigen::Index>(i)) = -model.a[i];
  }
  for (std::size_t j = 0; j < q_ref && j < model.q0(); ++j) {
    out.values(static_cast<Eigen::Index>(p_ref + j)) = model.b[j];
  }
  return out;
}

double param_error_norm(const PaddedTheta& estimate, const PaddedTheta& truth) {
  if (estimate.p_ref != truth.p_ref || estimate.q_ref != truth.q_ref ||
      estimate.values.size() != truth.values.size()) {
    throw std::invalid_argument("parameter vectors use different layouts");
  }
  return (truth.values - estimate.values).norm();
}

}  // namespace qarx
