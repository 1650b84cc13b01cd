#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "scalekit/convolution.hpp"
#include "scalekit/spectral.hpp"
#include "scalekit/stability.hpp"
#include "test_util.hpp"

using namespace scalekit;
using scalekit::testing::geometric;
using scalekit::testing::random_signal;
using scalekit::testing::random_slice;

namespace {

ScaleTimeSignal example_two_slice() {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 1.0);
  h.set(0, {1}, 1.0);
  h.set(1, {0}, 1.0);
  h.set(1, {1}, -1.0);
  return h;
}

// Largest sum_n |h_n_hat(theta)| on a fine grid.
double symbol_sum_max(const ScaleTimeSignal& h, int grid) {
  std::vector<double> acc(static_cast<std::size_t>(grid), 0.0);
  for (const auto& s : h.slices()) {
    const SpectrumGrid g = gamma_fourier_direct(s, {grid});
    for (int j = 0; j < grid; ++j) acc[j] += std::abs(g.values[j]);
  }
  return *std::max_element(acc.begin(), acc.end());
}

}  // namespace

TEST(MultOperatorNorm, Examples) {
  OperatorNormBracket b = mult_operator_norm(ScaleSignal::delta({0}), false);
  EXPECT_NEAR(b.lower, 1.0, 1e-15);
  EXPECT_NEAR(b.upper, 1.0, 1e-12);
  EXPECT_TRUE(b.certified);

  b = mult_operator_norm(ScaleSignal::delta({2, -3}, Complex(0.3, -0.4)), false);
  EXPECT_NEAR(b.lower, 0.5, 1e-15);
  EXPECT_NEAR(b.upper, 0.5, 1e-12);

  ScaleSignal two(1);
  two.set({0}, 1.0);
  two.set({1}, 1.0);
  b = mult_operator_norm(two, true);
  EXPECT_NEAR(b.lower, 2.0, 1e-12);
  EXPECT_LE(b.upper, 2.0 * (1 + 1e-9));
  EXPECT_TRUE(b.certified);
  ASSERT_EQ(b.argmax_theta.size(), 1u);
  EXPECT_NEAR(std::remainder(b.argmax_theta[0], 2 * std::numbers::pi), 0.0, 1e-6);
}

TEST(MultOperatorNorm, ConeRequiresConeSupport) {
  EXPECT_THROW(mult_operator_norm(ScaleSignal::delta({-1}), true), DomainError);
}

TEST(MultOperatorNorm, BracketContainsFineGridMax) {
  std::mt19937_64 rng(40);
  for (int i = 0; i < 20; ++i) {
    const std::size_t p = 1 + i % 2;
    const ScaleSignal h = random_slice(rng, p, -3, 3, 8);
    const OperatorNormBracket b = mult_operator_norm(h, false);
    EXPECT_TRUE(b.certified);
    EXPECT_LE(b.lower, b.upper);
    const SpectrumGrid g = gamma_fourier(h, std::vector<int>(p, 61));
    double mx = 0;
    for (Complex v : g.values) mx = std::max(mx, std::abs(v));
    EXPECT_LE(mx, b.upper * (1 + 1e-12));
  }
}

TEST(MultOperatorNorm, BudgetExhaustionIsReported) {
  std::mt19937_64 rng(41);
  const ScaleSignal h = random_slice(rng, 2, -6, 6, 40);
  const OperatorNormBracket b = mult_operator_norm(h, false, CertifyOptions{1e-12, 64});
  EXPECT_FALSE(b.certified);
  EXPECT_LE(b.lower, b.upper);
}

TEST(Bibo, Geometric) {
  const StabilityReport r = bibo_analysis(geometric(0.5), false);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_NEAR(*r.sufficient_upper, 2.0, 1e-10);
  EXPECT_NEAR(*r.necessary_lower, *r.sufficient_upper, 1e-10);
}

TEST(Bibo, TrivialGroupIsClassicalL1) {
  ScaleTimeSignal h(1);
  const std::vector<Complex> c{1.0, Complex(0, -0.5), -0.25, Complex(0.1, 0.1)};
  double l1 = 0;
  for (std::size_t n = 0; n < c.size(); ++n) {
    h.set(n, {0}, c[n]);
    l1 += std::abs(c[n]);
  }
  const StabilityReport r = bibo_analysis(h, true);
  EXPECT_NEAR(*r.sufficient_upper, l1, 1e-10);
  EXPECT_NEAR(*r.necessary_lower, l1, 1e-10);
}

TEST(Bibo, TwoSliceBracket) {
  const ScaleTimeSignal h = example_two_slice();
  const StabilityReport r = bibo_analysis(h, false);
  EXPECT_NEAR(*r.sufficient_upper, 4.0, 4e-9);
  EXPECT_LE(*r.necessary_lower, *r.sufficient_upper);
  EXPECT_GE(*r.necessary_lower, 2.0 * std::sqrt(2.0) - 1e-9);
  EXPECT_NEAR(*r.symbol_lower, symbol_sum_max(h, 4096), 1e-6);
  ASSERT_TRUE(r.bibo_witness.has_value());

  const auto& w = *r.bibo_witness;
  const ScaleTimeSignal u = adversarial_input(h, w.n, w.v);
  EXPECT_LE(norm(u, NormKind::sup_l2), 1.0 + 1e-12);
  const ScaleTimeSignal y = double_convolve(h, u);
  EXPECT_GE(inner(y[w.n], w.v).real(), *r.necessary_lower - 1e-8);
  EXPECT_GE(y[w.n].norm(), *r.necessary_lower - 1e-8);
}

TEST(Bibo, ConeModeWitnessStaysInCone) {
  std::mt19937_64 rng(42);
  const ScaleTimeSignal h = random_signal(rng, 1, 3, 0, 3, 4);
  const StabilityReport r = bibo_analysis(h, true);
  ASSERT_TRUE(r.bibo_witness.has_value());
  const auto u = adversarial_input(h, r.bibo_witness->n, r.bibo_witness->v, true);
  EXPECT_TRUE(is_cone_supported(u));
  const auto y = double_convolve(h, u, ScaleMode::causal_cone);
  EXPECT_GE(inner(y[r.bibo_witness->n], r.bibo_witness->v).real(), *r.necessary_lower - 1e-8);
}

TEST(Bibo, BracketSoundOnRandomSystems) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 10; ++i) {
    const std::size_t p = 1 + i % 2;
    const ScaleTimeSignal h = random_signal(rng, p, 3, -2, 2, 4);
    const StabilityReport r = bibo_analysis(h, false);
    ASSERT_TRUE(r.bibo_witness.has_value());
    EXPECT_LE(*r.necessary_lower, *r.sufficient_upper);
    // The symbol bound is only approached by ever wider windows, so the
    // finite witness may sit a little below it.
    EXPECT_LE(*r.symbol_lower, *r.sufficient_upper);
    EXPECT_GE(*r.necessary_lower, 0.98 * *r.symbol_lower);
    const auto u = adversarial_input(h, r.bibo_witness->n, r.bibo_witness->v);
    const auto y = double_convolve(h, u);
    EXPECT_LE(norm(y, NormKind::sup_l2), *r.sufficient_upper * norm(u, NormKind::sup_l2) + 1e-9);
    EXPECT_GE(inner(y[r.bibo_witness->n], r.bibo_witness->v).real(),
              *r.necessary_lower - 1e-8);
  }
}

TEST(AdversarialInput, ScalarCase) {
  ScaleTimeSignal h(1);
  const std::vector<Complex> c{Complex(0.5, 0.5), -2.0, Complex(0, 0.25)};
  for (std::size_t n = 0; n < c.size(); ++n) h.set(n, {0}, c[n]);
  const ScaleSignal v = ScaleSignal::delta({0});
  const ScaleTimeSignal u = adversarial_input(h, 2, v);
  ASSERT_EQ(u.length(), 3u);
  double want = 0;
  for (std::size_t m = 0; m <= 2; ++m) {
    const Complex cn = c[2 - m];
    EXPECT_LT(std::abs(u[m].at({0}) - std::conj(cn / std::abs(cn))), 1e-15);
    want += std::abs(c[m]);
  }
  const auto y = double_convolve(h, u);
  EXPECT_NEAR(inner(y[2], v).real(), want, 1e-14);
}

TEST(AdversarialInput, ZeroSystemAndErrors) {
  const ScaleTimeSignal h(1, 3);
  const ScaleTimeSignal u = adversarial_input(h, 2, ScaleSignal::delta({0}));
  EXPECT_EQ(u.nonzeros(), 0u);
  EXPECT_THROW(adversarial_input(h, 2, ScaleSignal::delta({0}, 2.0)), DomainError);
}

TEST(Dissipativity, ConstantContraction) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 0.9);
  const StabilityReport r = dissipativity_check(h, 12, 1);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(*r.sufficient_upper, 0.9, 1e-10);
  EXPECT_NEAR(*r.sup_lower, 0.9, 1e-10);
  ASSERT_TRUE(r.gram.has_value());
  EXPECT_GE(r.gram->min_eigenvalue, 0.0);
  EXPECT_TRUE(r.gram->psd);
  EXPECT_FALSE(r.resonant.has_value());
}

TEST(Dissipativity, OnePlusZFailsWithResonance) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 1.0);
  h.set(1, {0}, 1.0);
  const StabilityReport r = dissipativity_check(h, 12, 1);
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_NEAR(*r.sup_lower, 2.0, 1e-10);
  ASSERT_TRUE(r.resonant.has_value());
  EXPECT_NEAR(std::abs(r.resonant->value), 2.0, 1e-9);
  EXPECT_LT(std::abs(r.resonant->point[0] - 1.0), 1e-6);
  EXPECT_GT(r.resonant->energy_ratio, 1.0);
  const auto u = resonant_input(r.resonant->point, r.resonant->time_len, r.resonant->box);
  const auto y = double_convolve(h, u);
  EXPECT_GT(norm(y, NormKind::energy), norm(u, NormKind::energy));
}

TEST(Dissipativity, UnimodularProductPassesAtBoundary) {
  ScaleTimeSignal h(1);
  h.set(1, {1}, 1.0);
  const StabilityReport r = dissipativity_check(h, 12, 3);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_NEAR(*r.sufficient_upper, 1.0, 1e-10);
  EXPECT_NEAR(*r.sup_lower, 1.0, 1e-10);
  ASSERT_TRUE(r.gram.has_value());
  EXPECT_GE(r.gram->min_eigenvalue, -1e-9);
}

TEST(Dissipativity, LaurentSymbolSkipsGram) {
  ScaleTimeSignal h(1);
  h.set(0, {-1}, 0.5);
  const StabilityReport r = dissipativity_check(h, 12, 3);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_FALSE(r.cone);
  EXPECT_FALSE(r.gram.has_value());
}

TEST(Dissipativity, LinearInScale) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 5; ++i) {
    const ScaleTimeSignal h = random_signal(rng, 1, 3, 0, 3, 3);
    const double s = 0.37;
    const StabilityReport a = dissipativity_check(h, 4, 1);
    const StabilityReport b = dissipativity_check(h.scaled(s), 4, 1);
    EXPECT_NEAR(*b.sup_lower, s * *a.sup_lower, 1e-12 * std::max(1.0, *a.sup_lower));
  }
}

TEST(Dissipativity, GramPositiveForContractiveSystems) {
  std::mt19937_64 rng(45);
  for (int i = 0; i < 10; ++i) {
    const std::size_t p = 1 + i % 2;
    ScaleTimeSignal h = random_signal(rng, p, 3, 0, 2, 3);
    const StabilityReport probe = dissipativity_check(h, 0, 0);
    h = h.scaled(0.999 / *probe.sufficient_upper);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const StabilityReport r = dissipativity_check(h, 12, seed);
      ASSERT_EQ(r.verdict, Verdict::pass);
      ASSERT_TRUE(r.gram.has_value());
      EXPECT_GE(r.gram->min_eigenvalue, -1e-9);
    }
  }
}

TEST(L1L2, Examples) {
  ScaleTimeSignal id(1);
  id.set(0, {0}, 1.0);
  StabilityReport r = l1l2_gain(id);
  EXPECT_NEAR(*r.sufficient_upper, 1.0, 1e-12);
  EXPECT_NEAR(*r.h2_norm, 1.0, 1e-15);

  r = l1l2_gain(geometric(0.6));
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_NEAR(*r.h2_norm, 1.25, 1e-10);
  EXPECT_NEAR(*r.sufficient_upper, 1.25, 1e-10);
}

// |h|_2 is what the impulse reaches, but it does not bound the gain once a
// slice has more than one scale term: here an input with l1_l2 norm 1
// produces output norm sqrt(3) > sqrt(2) = |h|_2.
TEST(L1L2, TwoNormIsOnlyALowerBound) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 1.0);
  h.set(0, {1}, 1.0);
  ScaleTimeSignal u(1);
  u.set(0, {0}, 1.0 / std::sqrt(2.0));
  u.set(0, {1}, 1.0 / std::sqrt(2.0));
  const double out = std::sqrt(norm(double_convolve(h, u), NormKind::energy));
  EXPECT_NEAR(norm(u, NormKind::l1_l2), 1.0, 1e-15);
  EXPECT_NEAR(out, std::sqrt(3.0), 1e-15);

  const StabilityReport r = l1l2_gain(h);
  EXPECT_NEAR(*r.h2_norm, std::sqrt(2.0), 1e-15);
  EXPECT_GT(out, *r.h2_norm);
  EXPECT_NEAR(*r.sufficient_upper, 2.0, 1e-8);
  EXPECT_LE(out, *r.sufficient_upper);
}

TEST(L1L2, RandomInputsRespectBound) {
  std::mt19937_64 rng(46);
  for (int i = 0; i < 5; ++i) {
    const ScaleTimeSignal h = random_signal(rng, 1 + i % 2, 3, -1, 2, 4);
    const StabilityReport r = l1l2_gain(h);
    for (int t = 0; t < 10; ++t) {
      ScaleTimeSignal u = random_signal(rng, h.arity(), 4, -2, 2, 5);
      u = u.scaled(1.0 / norm(u, NormKind::l1_l2));
      const double g = std::sqrt(norm(double_convolve(h, u), NormKind::energy));
      EXPECT_LE(g, *r.sufficient_upper + 1e-9);
    }
  }
}

TEST(EmpiricalVerify, DissipativeContraction) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 0.9);
  const StabilityReport r = dissipativity_check(h, 12, 1);
  const VerifyReport v = empirical_verify(h, r, 50, 7);
  EXPECT_TRUE(v.ok);
  EXPECT_LE(v.max_gain, 0.81 + 1e-9);
}

TEST(EmpiricalVerify, BiboGeometric) {
  const ScaleTimeSignal h = geometric(0.5);
  const StabilityReport r = bibo_analysis(h, false);
  const VerifyReport v = empirical_verify(h, r, 50, 7);
  EXPECT_TRUE(v.ok);
  EXPECT_LE(v.max_gain, 2.0 + 1e-9);
  ASSERT_TRUE(v.replay.has_value());
  EXPECT_EQ(v.replay->kind, "adversarial");
  EXPECT_TRUE(v.replay->reached);
}

TEST(EmpiricalVerify, FailVerdictReplaysResonance) {
  ScaleTimeSignal h(1);
  h.set(0, {0}, 1.0);
  h.set(1, {0}, 1.0);
  const StabilityReport r = dissipativity_check(h, 12, 1);
  const VerifyReport v = empirical_verify(h, r, 10, 7);
  ASSERT_TRUE(v.replay.has_value());
  EXPECT_EQ(v.replay->kind, "resonant");
  EXPECT_GT(v.replay->observed, 1.0);
  EXPECT_TRUE(v.ok);
}

TEST(EmpiricalVerify, ImpulseReachesTwoNorm) {
  const ScaleTimeSignal h = geometric(0.6);
  const StabilityReport r = l1l2_gain(h);
  const VerifyReport v = empirical_verify(h, r, 50, 7);
  ASSERT_TRUE(v.replay.has_value());
  EXPECT_NEAR(v.replay->observed, 1.25, 1e-10);
  EXPECT_TRUE(v.ok);
  EXPECT_LE(v.max_ratio, 1.0 + 1e-9);
}

TEST(EmpiricalVerify, Deterministic) {
  const ScaleTimeSignal h = example_two_slice();
  const StabilityReport r = bibo_analysis(h, false);
  const VerifyReport a = empirical_verify(h, r, 20, 99);
  const VerifyReport b = empirical_verify(h, r, 20, 99);
  EXPECT_EQ(a.max_gain, b.max_gain);
  EXPECT_THROW(empirical_verify(h, r, 0, 1), DomainError);
}

TEST(GridBudget, EnvironmentOverride) {
  ::setenv("SCALEKIT_MAX_GRID", "1000", 1);
  EXPECT_EQ(default_grid_budget(), 1000u);
  ::setenv("SCALEKIT_MAX_GRID", "junk", 1);
  EXPECT_EQ(default_grid_budget(), kDefaultMaxGrid);
  ::unsetenv("SCALEKIT_MAX_GRID");
  EXPECT_EQ(default_grid_budget(), kDefaultMaxGrid);
}
