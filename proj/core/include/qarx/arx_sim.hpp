#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qarx {

/**
 * @brief Single-input single-output ARX system
 *
 *   A(z) y_{n+1} = B(z) u_n + w_{n+1}
 *
 * with A(z) = 1 + a_1 z + ... + a_p0 z^p0 and B(z) = b_1 + b_2 z + ... + b_q0 z^{q0-1},
 * z being the backward shift. The noise w is i.i.d. N(0, noise_std^2).
 */
struct ArxModel {
  std::vector<double> a;  // a_1 ... a_p0, A(z) convention (the regression uses -a_i)
  std::vector<double> b;  // b_1 ... b_q0
  double noise_std = 1.0;

  std::size_t p0() const { return a.size(); }
  std::size_t q0() const { return b.size(); }

  bool operator==(const ArxModel&) const = default;
};

/// Throws std::invalid_argument unless q0 >= 1, trailing a/b coefficients are
/// non-zero, every coefficient is finite and noise_std >= 0.
void validate_model(const ArxModel& model);

/// |a_i| <= c and |b_j| <= c for every coefficient.
bool within_coefficient_bound(const ArxModel& model, double c);

/// Largest admissible quantization step for coefficient bound c: 1 / (2 (1 + p0 c)).
/// The step itself must be strictly below this value.
double max_quantization_step(const ArxModel& model, double c);

/// Half-width of the i.i.d. uniform input law u_i ~ U[-delta, delta].
class InputSpec {
 public:
  explicit InputSpec(double delta);
  double delta() const { return delta_; }

 private:
  double delta_;
};

/// Mid-tread uniform quantizer with step epsilon.
class Quantizer {
 public:
  explicit Quantizer(double epsilon);
  double epsilon() const { return epsilon_; }

 private:
  double epsilon_;
};

/**
 * @brief Aligned signal record over a horizon n.
 *
 * Index conventions (all vectors are indexed by time directly):
 *   u[0 .. n-1]  inputs
 *   w[0 .. n]    noise, w[0] is unused and stored as 0
 *   y[0 .. n]    outputs, y[0] = 0
 *   s[0 .. n]    quantized outputs, empty until quantize_trajectory runs
 */
struct Trajectory {
  std::size_t horizon = 0;
  std::vector<double> u;
  std::vector<double> w;
  std::vector<double> y;
  std::vector<double> s;
  double epsilon_used = 0.0;  // 0 while unquantized

  bool quantized() const { return epsilon_used > 0.0 && s.size() == horizon + 1; }

  bool operator==(const Trajectory&) const = default;
};

/// Draws u ~ U[-delta, delta] and w ~ N(0, noise_std^2) from generators seeded
/// by `seed` and runs the recursion from y[0] = 0. Bit-identical for equal arguments.
Trajectory simulate(const ArxModel& model, const InputSpec& input, std::size_t horizon,
                    std::uint64_t seed);

/// Same recursion with caller-provided signals. `inputs` holds u_0 .. u_{n-1} and
/// `noise` holds w_1 .. w_n; both must have length n >= 1.
Trajectory simulate_driven(const ArxModel& model, std::span<const double> inputs,
                           std::span<const double> noise);

/// s = eps * floor(y / eps + 1/2), i.e. [k eps - eps/2, k eps + eps/2) -> k eps.
/// Throws std::invalid_argument for non-finite y.
double quantize(double y, const Quantizer& q);

/// True when s / eps is within 1e-9 of an integer.
bool on_quantizer_grid(double s, double epsilon);

Trajectory quantize_trajectory(Trajectory traj, const Quantizer& q);

/// (eps / 2) (|a_1| + ... + |a_p0| + 1): uniform bound on the quantization noise.
double quantization_noise_bound(const ArxModel& model, const Quantizer& q);

/// Element k holds eps_{k+1} = s_{k+1} - theta^T psi_k(p0, q0) - w_{k+1}, k = 0 .. n-1.
/// Throws std::invalid_argument if the trajectory is unquantized or was not
/// generated by `model`.
std::vector<double> quantization_noise_sequence(const Trajectory& traj, const ArxModel& model);

/// Roots of A(z) from the eigenvalues of its companion matrix. Empty for p0 = 0.
std::vector<std::complex<double>> ar_polynomial_roots(const ArxModel& model);

inline constexpr double kStabilityMargin = 1e-9;

/// A(z) != 0 on the closed unit disk: every root satisfies |z| > 1 + kStabilityMargin.
bool check_stability(const ArxModel& model);

}  // namespace qarx
