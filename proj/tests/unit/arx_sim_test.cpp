#include "qarx/arx_sim.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace qarx {
namespace {

const ArxModel kReferenceModel{{0.7, 0.1}, {1.0}, 1.0};

TEST(Quantize, MapsToRemarkIntervals) {
  const Quantizer q(0.001);
  EXPECT_EQ(quantize(1.3 * 0.001, q), 0.001);
  EXPECT_EQ(quantize(0.0, q), 0.0);
  EXPECT_EQ(quantize(-1.6 * 0.001, q), -2 * 0.001);
  EXPECT_EQ(quantize(-0.5 * 0.001, q), 0.0);
  EXPECT_FALSE(std::signbit(quantize(-0.5 * 0.001, q)));
  EXPECT_FALSE(std::signbit(quantize(-0.0, q)));
}

TEST(Quantize, HalfStepRoundsUp) {
  const Quantizer unit(1.0);
  EXPECT_EQ(quantize(0.5, unit), 1.0);
  EXPECT_EQ(quantize(1.5, unit), 2.0);
  EXPECT_EQ(quantize(-1.5, unit), -1.0);
  EXPECT_EQ(quantize(-2.5, unit), -2.0);
}

TEST(Quantize, RejectsNonFiniteInput) {
  const Quantizer q(0.01);
  EXPECT_THROW(quantize(std::nan(""), q), std::invalid_argument);
  EXPECT_THROW(quantize(INFINITY, q), std::invalid_argument);
  EXPECT_THROW(Quantizer(0.0), std::invalid_argument);
  EXPECT_THROW(Quantizer(-1.0), std::invalid_argument);
}

TEST(Quantize, CellRadiusGridAndIdempotence) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(-50.0, 50.0);
  for (double eps : {0.001, 0.002, 0.37, 1.0}) {
    const Quantizer q(eps);
    for (int k = 0; k < 20000; ++k) {
      const double y = value(rng);
      const double s = quantize(y, q);
      ASSERT_LE(std::abs(s - y), eps / 2) << "y=" << y << " eps=" << eps;
      ASSERT_TRUE(on_quantizer_grid(s, eps)) << "y=" << y << " eps=" << eps;
      ASSERT_EQ(quantize(s, q), s) << "y=" << y << " eps=" << eps;
    }
  }
}

TEST(Quantize, HalfStepWhereNoRoundedGridProductIsCloseEnough) {
  // Neither fl(98057 * 0.001) nor fl(98058 * 0.001) lies within 0.0005 of y.
  const double eps = 0.001;
  const Quantizer q(eps);
  for (double y : {98.057500000000005, -115.4435, 110.7145, 67.709500000000006}) {
    const double s = quantize(y, q);
    EXPECT_LE(std::abs(s - y), eps / 2) << "y=" << y;
    EXPECT_GT(s, y) << "half steps round up";
    EXPECT_TRUE(on_quantizer_grid(s, eps));
    EXPECT_EQ(quantize(s, q), s);
  }
}

TEST(QuantizeTrajectory, ElementWise) {
  Trajectory t;
  t.horizon = 2;
  t.y = {0.0, 0.0013, -0.0016};
  const auto out = quantize_trajectory(t, Quantizer(0.001));
  ASSERT_EQ(out.s.size(), 3u);
  EXPECT_EQ(out.s[0], 0.0);
  EXPECT_EQ(out.s[1], 0.001);
  EXPECT_EQ(out.s[2], -2 * 0.001);
  EXPECT_EQ(out.epsilon_used, 0.001);

  t.y = {0.0, 0.0, 0.0};
  for (double s : quantize_trajectory(t, Quantizer(0.25)).s) EXPECT_EQ(s, 0.0);
}

TEST(Simulate, IdentityPassThrough) {
  const ArxModel identity{{}, {1.0}, 0.0};
  const std::vector<double> u{0.5, -1.0, 2.0, 3.25};
  const std::vector<double> w(u.size(), 0.0);
  const auto t = simulate_driven(identity, u, w);
  ASSERT_EQ(t.y.size(), u.size() + 1);
  EXPECT_EQ(t.y[0], 0.0);
  for (std::size_t n = 0; n < u.size(); ++n) EXPECT_EQ(t.y[n + 1], u[n]);
}

TEST(Simulate, ZeroDrivesZero) {
  const std::vector<double> zeros(100, 0.0);
  const auto t = simulate_driven(kReferenceModel, zeros, zeros);
  for (double y : t.y) EXPECT_EQ(y, 0.0);
  const auto s = quantize_trajectory(t, Quantizer(0.001));
  for (double v : quantization_noise_sequence(s, kReferenceModel)) EXPECT_EQ(v, 0.0);
}

TEST(Simulate, FollowsRecursion) {
  const auto t = simulate(kReferenceModel, InputSpec(3.0), 200, 11);
  ASSERT_EQ(t.u.size(), 200u);
  ASSERT_EQ(t.w.size(), 201u);
  EXPECT_EQ(t.y[0], 0.0);
  EXPECT_EQ(t.y[1], t.u[0] + t.w[1]);
  EXPECT_EQ(t.y[2], -0.7 * t.y[1] + t.u[1] + t.w[2]);
  for (std::size_t n = 2; n < 200; ++n) {
    const double expected = -0.7 * t.y[n] + -0.1 * t.y[n - 1] + t.u[n] + t.w[n + 1];
    ASSERT_NEAR(t.y[n + 1], expected, 1e-12);
  }
  for (double u : t.u) {
    ASSERT_GE(u, -3.0);
    ASSERT_LE(u, 3.0);
  }
}

TEST(Simulate, SeedDeterminism) {
  const auto a = simulate(kReferenceModel, InputSpec(3.0), 500, 42);
  const auto b = simulate(kReferenceModel, InputSpec(3.0), 500, 42);
  const auto c = simulate(kReferenceModel, InputSpec(3.0), 500, 43);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
}

TEST(Simulate, RejectsBadArguments) {
  EXPECT_THROW(simulate(kReferenceModel, InputSpec(1.0), 0, 1), std::invalid_argument);
  EXPECT_THROW(simulate(ArxModel{{0.5}, {}, 1.0}, InputSpec(1.0), 10, 1), std::invalid_argument);
  EXPECT_THROW(simulate(ArxModel{{0.5, 0.0}, {1.0}, 1.0}, InputSpec(1.0), 10, 1),
               std::invalid_argument);
  EXPECT_THROW(simulate(ArxModel{{0.5}, {1.0, 0.0}, 1.0}, InputSpec(1.0), 10, 1),
               std::invalid_argument);
  EXPECT_THROW(InputSpec(0.0), std::invalid_argument);
}

TEST(Simulate, SecondMomentSettles) {
  // Stable system: the running mean of y^2 approaches a finite constant.
  const auto t = simulate(kReferenceModel, InputSpec(3.0), 5000, 2024);
  auto mean_sq = [&](std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) acc += t.y[i] * t.y[i];
    return acc / static_cast<double>(n + 1);
  };
  const double half = mean_sq(2500);
  const double full = mean_sq(5000);
  EXPECT_GT(full, 1.0);
  EXPECT_LT(full, 20.0);
  EXPECT_NEAR(half / full, 1.0, 0.15);
}

TEST(NoiseBound, Formula) {
  EXPECT_NEAR(quantization_noise_bound(kReferenceModel, Quantizer(0.001)), 0.0009, 1e-15);
  EXPECT_NEAR(quantization_noise_bound(kReferenceModel, Quantizer(0.002)), 0.0018, 1e-15);
  const ArxModel no_ar{{}, {1.0, 0.5}, 1.0};
  EXPECT_EQ(quantization_noise_bound(no_ar, Quantizer(0.3)), 0.15);
}

TEST(NoiseSequence, ContainedInBound) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Quantizer q(0.001);
    const auto t = quantize_trajectory(simulate(kReferenceModel, InputSpec(3.0), 4000, seed), q);
    const double bound = quantization_noise_bound(kReferenceModel, q);
    for (double e : quantization_noise_sequence(t, kReferenceModel)) ASSERT_LE(std::abs(e), bound);
  }
}

TEST(NoiseSequence, VanishesWithStep) {
  const Quantizer q(1e-12);
  const auto t = quantize_trajectory(simulate(kReferenceModel, InputSpec(1.0), 1000, 5), q);
  for (double e : quantization_noise_sequence(t, kReferenceModel)) ASSERT_LT(std::abs(e), 1e-11);
}

TEST(NoiseSequence, RejectsForeignModelOrUnquantized) {
  const auto raw = simulate(kReferenceModel, InputSpec(1.0), 100, 5);
  EXPECT_THROW(quantization_noise_sequence(raw, kReferenceModel), std::invalid_argument);
  const auto t = quantize_trajectory(raw, Quantizer(0.01));
  const ArxModel other{{0.3}, {1.0}, 1.0};
  EXPECT_THROW(quantization_noise_sequence(t, other), std::invalid_argument);
}

TEST(Stability, CompanionRoots) {
  EXPECT_TRUE(check_stability(kReferenceModel));
  const auto roots = ar_polynomial_roots(kReferenceModel);
  ASSERT_EQ(roots.size(), 2u);
  std::vector<double> re{roots[0].real(), roots[1].real()};
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -5.0, 1e-10);
  EXPECT_NEAR(re[1], -2.0, 1e-10);

  EXPECT_TRUE(check_stability(ArxModel{{}, {1.0}, 1.0}));
  EXPECT_FALSE(check_stability(ArxModel{{-1.0}, {1.0}, 1.0}));
  EXPECT_FALSE(check_stability(ArxModel{{1.0}, {1.0}, 1.0}));
  EXPECT_FALSE(check_stability(ArxModel{{0.0, 1.0}, {1.0}, 1.0}));  // roots +-i
  EXPECT_TRUE(check_stability(ArxModel{{0.0, 0.0, 0.5}, {1.0}, 1.0}));
}

// Closed-form root test for A(z) = 1 + a1 z (+ a2 z^2).
bool closed_form_stable(const std::vector<double>& a) {
  if (a.empty()) return true;
  if (a.size() == 1) return std::abs(-1.0 / a[0]) > 1.0 + kStabilityMargin;
  const double a1 = a[0], a2 = a[1];
  const double disc = a1 * a1 - 4.0 * a2;
  double m1, m2;
  if (disc >= 0) {
    m1 = std::abs((-a1 + std::sqrt(disc)) / (2 * a2));
    m2 = std::abs((-a1 - std::sqrt(disc)) / (2 * a2));
  } else {
    m1 = m2 = std::sqrt(1.0 / std::abs(a2));  // |z|^2 = product of roots = 1/a2
  }
  return m1 > 1.0 + kStabilityMargin && m2 > 1.0 + kStabilityMargin;
}

TEST(Stability, MatchesClosedFormForLowOrders) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coef(-2.5, 2.5);
  std::uniform_int_distribution<int> order(0, 2);
  int disagreements = 0;
  for (int k = 0; k < 5000; ++k) {
    std::vector<double> a(static_cast<std::size_t>(order(rng)));
    for (double& v : a) v = coef(rng);
    if (!a.empty() && a.back() == 0.0) continue;
    const ArxModel m{a, {1.0}, 1.0};
    const bool expected = closed_form_stable(a);
    if (check_stability(m) != expected) {
      // Only roots within rounding distance of the margin may disagree.
      double min_mod = 1e300;
      for (auto r : ar_polynomial_roots(m)) min_mod = std::min(min_mod, std::abs(r));
      ASSERT_NEAR(min_mod, 1.0 + kStabilityMargin, 1e-8);
      ++disagreements;
    }
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(ModelChecks, CoefficientBoundAndStepLimit) {
  EXPECT_TRUE(within_coefficient_bound(kReferenceModel, 1.0));
  EXPECT_FALSE(within_coefficient_bound(kReferenceModel, 0.5));
  EXPECT_DOUBLE_EQ(max_quantization_step(kReferenceModel, 1.0), 1.0 / 6.0);
}

}  // namespace
}  // namespace qarx
