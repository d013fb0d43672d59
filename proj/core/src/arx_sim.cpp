#include "qarx/arx_sim.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qarx {

namespace {

// One-step prediction sum_i (-a_i) x[t+1-i] + sum_j b_j u[t+1-j] for t+1 = next.
// Signals with negative index are zero.
double arx_prediction(const ArxModel& model, const std::vector<double>& outputs,
                      const std::vector<double>& inputs, std::size_t next) {
  double acc = 0.0;
  for (std::size_t i = 1; i <= model.p0() && i <= next; ++i) {
    acc += -model.a[i - 1] * outputs[next - i];
  }
  for (std::size_t j = 1; j <= model.q0() && j <= next; ++j) {
    acc += model.b[j - 1] * inputs[next - j];
  }
  return acc;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

}  // namespace

void validate_model(const ArxModel& model) {
  if (model.q0() == 0) {
    throw std::invalid_argument("ARX model needs q0 >= 1 (B(z) cannot be empty)");
  }
  for (double v : model.a) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite AR coefficient");
  }
  for (double v : model.b) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite exogenous coefficient");
  }
  if (model.p0() > 0 && model.a.back() == 0.0) {
    throw std::invalid_argument("trailing AR coefficient a_p0 must be non-zero");
  }
  if (model.b.back() == 0.0) {
    throw std::invalid_argument("trailing exogenous coefficient b_q0 must be non-zero");
  }
  if (!std::isfinite(model.noise_std) || model.noise_std < 0.0) {
    throw std::invalid_argument("noise_std must be finite and non-negative");
  }
}

bool within_coefficient_bound(const ArxModel& model, double c) {
  for (double v : model.a) {
    if (std::abs(v) > c) return false;
  }
  for (double v : model.b) {
    if (std::abs(v) > c) return false;
  }
  return true;
}

double max_quantization_step(const ArxModel& model, double c) {
  return 1.0 / (2.0 * (1.0 + static_cast<double>(model.p0()) * c));
}

InputSpec::InputSpec(double delta) : delta_(delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("input half-width delta must be positive and finite");
  }
}

Quantizer::Quantizer(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("quantization step must be positive and finite");
  }
}

Trajectory simulate(const ArxModel& model, const InputSpec& input, std::size_t horizon,
                    std::uint64_t seed) {
  validate_model(model);
  if (horizon == 0) throw std::invalid_argument("simulation horizon must be >= 1");

  auto input_rng = make_stream(seed, 0);
  auto noise_rng = make_stream(seed, 1);
  std::uniform_real_distribution<double> input_law(-input.delta(), input.delta());

  std::vector<double> inputs(horizon);
  for (double& u : inputs) u = input_law(input_rng);

  std::vector<double> noise(horizon, 0.0);
  if (model.noise_std > 0.0) {
    std::normal_distribution<double> noise_law(0.0, model.noise_std);
    for (double& w : noise) w = noise_law(noise_rng);
  }
  return simulate_driven(model, inputs, noise);
}

Trajectory simulate_driven(const ArxModel& model, std::span<const double> inputs,
                           std::span<const double> noise) {
  validate_model(model);
  if (inputs.empty()) throw std::invalid_argument("simulation horizon must be >= 1");
  if (inputs.size() != noise.size()) {
    throw std::invalid_argument("input and noise sequences must have equal length");
  }
  const std::size_t n = inputs.size();

  Trajectory traj;
  traj.horizon = n;
  traj.u.assign(inputs.begin(), inputs.end());
  traj.w.assign(n + 1, 0.0);
  std::copy(noise.begin(), noise.end(), traj.w.begin() + 1);
  traj.y.assign(n + 1, 0.0);

  for (std::size_t t = 0; t < n; ++t) {
    traj.y[t + 1] = arx_prediction(model, traj.y, traj.u, t + 1) + traj.w[t + 1];
  }
  return traj;
}

double quantize(double y, const Quantizer& q) {
  if (!std::isfinite(y)) throw std::invalid_argument("cannot quantize a non-finite value");
  const double eps = q.epsilon();
  const double half = 0.5 * eps;
  // Grid values are fixed points; this keeps the ulp-nudged values below stable.
  if (on_quantizer_grid(y, eps)) return y == 0.0 ? 0.0 : y;

  double k = std::floor(y / eps + 0.5);
  double s = k * eps;
  // Division and product each round; nudge k back into the cell when that
  // pushed s more than half a step away from y.
  for (int guard = 0; guard < 4 && std::abs(s - y) > half; ++guard) {
    k += (s > y) ? -1.0 : 1.0;
    s = k * eps;
  }
  // On an exact half step neither fl(k eps) nor fl((k - 1) eps) may lie within
  // eps/2 of y. Walk s toward y one ulp at a time while s / eps stays integral.
  for (int ulp = 0; ulp < 16 && std::abs(s - y) > half; ++ulp) {
    const double next = std::nextafter(s, y);
    if (!on_quantizer_grid(next, eps)) break;
    s = next;
  }
  if (s == 0.0) s = 0.0;  // drop the sign of -0
  return s;
}

bool on_quantizer_grid(double s, double epsilon) {
  const double ratio = s / epsilon;
  return std::isfinite(ratio) && std::abs(ratio - std::nearbyint(ratio)) <= 1e-9;
}

Trajectory quantize_trajectory(Trajectory traj, const Quantizer& q) {
  if (traj.y.size() != traj.horizon + 1) {
    throw std::invalid_argument("trajectory outputs are not populated");
  }
  traj.s.resize(traj.y.size());
  for (std::size_t i = 0; i < traj.y.size(); ++i) traj.s[i] = quantize(traj.y[i], q);
  traj.epsilon_used = q.epsilon();
  return traj;
}

double quantization_noise_bound(const ArxModel& model, const Quantizer& q) {
  double sum = 1.0;
  for (double v : model.a) sum += std::abs(v);
  return 0.5 * q.epsilon() * sum;
}

std::vector<double> quantization_noise_sequence(const Trajectory& traj, const ArxModel& model) {
  validate_model(model);
  if (!traj.quantized()) {
    throw std::invalid_argument("quantization noise needs a quantized trajectory");
  }
  if (traj.u.size() != traj.horizon || traj.w.size() != traj.horizon + 1) {
    throw std::invalid_argument("trajectory signals have inconsistent lengths");
  }

  std::vector<double> noise(traj.horizon);
  for (std::size_t t = 0; t < traj.horizon; ++t) {
    const double expected_y = arx_prediction(model, traj.y, traj.u, t + 1) + traj.w[t + 1];
    if (std::abs(expected_y - traj.y[t + 1]) > 1e-9 * (1.0 + std::abs(traj.y[t + 1]))) {
      throw std::invalid_argument("trajectory was not generated by this model (mismatch at t=" +
                                  std::to_string(t + 1) + ")");
    }
    noise[t] = traj.s[t + 1] - arx_prediction(model, traj.s, traj.u, t + 1) - traj.w[t + 1];
  }
  return noise;
}

std::vector<std::complex<double>> ar_polynomial_roots(const ArxModel& model) {
  validate_model(model);
  const auto p = static_cast<Eigen::Index>(model.p0());
  if (p == 0) return {};

  // Monic form z^p + (a_{p-1}/a_p) z^{p-1} + ... + (a_1/a_p) z + 1/a_p.
  const double lead = model.a.back();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index r = 1; r < p; ++r) companion(r, r - 1) = 1.0;
  companion(0, p - 1) = -1.0 / lead;
  for (Eigen::Index r = 1; r < p; ++r) companion(r, p - 1) = -model.a[r - 1] / lead;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("companion matrix eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

bool check_stability(const ArxModel& model) {
  for (const auto& root : ar_polynomial_roots(model)) {
    if (!(std::abs(root) > 1.0 + kStabilityMargin)) return false;
  }
  return true;
}

}  // namespace qarx
