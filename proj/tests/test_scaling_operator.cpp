#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "scalekit/scaling_operator.hpp"
#include "test_util.hpp"

using namespace scalekit;
using scalekit::testing::random_complex;
using scalekit::testing::random_hyperbolic;
using scalekit::testing::random_su;

namespace {

CoeffSeq random_poly(std::mt19937_64& rng, std::size_t max_degree = 32) {
  std::uniform_int_distribution<std::size_t> deg(0, max_degree);
  CoeffSeq f;
  f.coeffs.resize(deg(rng) + 1);
  for (auto& c : f.coeffs) c = random_complex(rng);
  const double n = f.norm();
  for (auto& c : f.coeffs) c /= n;
  return f;
}

double max_coeff_diff(const CoeffSeq& x, const CoeffSeq& y) {
  double m = 0;
  const std::size_t n = std::max(x.coeffs.size(), y.coeffs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const Complex a = i < x.coeffs.size() ? x.coeffs[i] : 0.0;
    const Complex b = i < y.coeffs.size() ? y.coeffs[i] : 0.0;
    m = std::max(m, std::abs(a - b));
  }
  return m;
}

Complex eval_poly(const CoeffSeq& f, Complex z) {
  Complex acc = 0;
  for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace

TEST(TransformCoeffs, IdentityLeavesInputUnchanged) {
  const CoeffSeq f{{1.0, Complex(0.5, -0.25), 2.0}, 0.0};
  const CoeffSeq out = transform_coeffs(SuMatrix::identity(), f, 1e-12);
  EXPECT_LT(max_coeff_diff(out, f), 1e-15);
  EXPECT_EQ(out.tail_bound, 0.0);
}

TEST(TransformCoeffs, ConstantUnderQuarterShift) {
  const CoeffSeq out = transform_coeffs(make_scale_shift(0.25, 0.0), CoeffSeq{{1.0}, 0.0}, 1e-12);
  ASSERT_GT(out.coeffs.size(), 40u);
  for (std::size_t n = 0; n < out.coeffs.size(); ++n) {
    EXPECT_NEAR(std::abs(out.coeffs[n] - 0.8 * std::pow(-0.6, n)), 0.0, 1e-14) << n;
  }
  EXPECT_NEAR(out.norm() * out.norm(), 1.0, 1e-12);
  EXPECT_LE(out.tail_bound, 1e-12);
}

TEST(TransformCoeffs, EllipticIsDiagonal) {
  const double psi = 0.3;
  const SuMatrix m(std::polar(1.0, psi), 0.0);
  const CoeffSeq f{{1.0, Complex(0, 2.0), -0.5, 0.25}, 0.0};
  const CoeffSeq out = transform_coeffs(m, f, 1e-12);
  for (std::size_t n = 0; n < f.coeffs.size(); ++n) {
    const Complex want = std::polar(1.0, (2.0 * n + 1.0) * psi) * f.coeffs[n];
    EXPECT_LT(std::abs(out.coeffs[n] - want), 1e-14);
  }
  for (std::size_t n = f.coeffs.size(); n < out.coeffs.size(); ++n) {
    EXPECT_LT(std::abs(out.coeffs[n]), 1e-14);
  }
}

TEST(TransformCoeffs, Unitarity) {
  std::mt19937_64 rng(100);
  std::uniform_real_distribution<double> mult(0.1, 0.9);
  for (int i = 0; i < 200; ++i) {
    const CoeffSeq f = random_poly(rng);
    const SuMatrix m = random_hyperbolic(rng, mult(rng));
    const CoeffSeq out = transform_coeffs(m, f, 1e-10);
    const double e = out.norm() * out.norm();
    EXPECT_LE(e, 1.0 + 1e-12);
    EXPECT_LE(std::abs(e - 1.0), 1e-8);
    EXPECT_GE(e + out.tail_bound * out.tail_bound, 1.0 - 1e-12);
  }
}

// T_{m2} T_{m1} f agrees with T_{compose(m1, m2)} f up to the sign that
// compose() strips when it canonicalizes the matrix product.
TEST(TransformCoeffs, CompositionOrder) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 100; ++i) {
    const CoeffSeq f = random_poly(rng, 16);
    const SuMatrix m1 = random_su(rng, 0.8);
    const SuMatrix m2 = random_su(rng, 0.8);
    const CoeffSeq lhs = transform_coeffs(m2, transform_coeffs(m1, f, 1e-12), 1e-12);
    CoeffSeq rhs = transform_coeffs(compose(m1, m2), f, 1e-12);
    const double s = compose_sign(m1, m2);
    for (auto& c : rhs.coeffs) c *= s;
    EXPECT_LE(max_coeff_diff(lhs, rhs), 1e-8);
  }
}

TEST(TransformCoeffs, Inversion) {
  std::mt19937_64 rng(102);
  for (int i = 0; i < 100; ++i) {
    const CoeffSeq f = random_poly(rng, 16);
    const SuMatrix m = random_su(rng, 0.8);
    const CoeffSeq back = transform_coeffs(inverse(m), transform_coeffs(m, f, 1e-12), 1e-12);
    EXPECT_LE(max_coeff_diff(back, f), 1e-8);
  }
}

TEST(TransformCoeffs, HardyInfinityContraction) {
  std::mt19937_64 rng(103);
  constexpr int kGrid = 512;
  for (int i = 0; i < 20; ++i) {
    const CoeffSeq f = random_poly(rng, 12);
    const SuMatrix m = random_su(rng, 1.0);
    const CoeffSeq g = transform_coeffs(m, f, 1e-13);
    double sup_f = 0, sup_g = 0;
    for (int j = 0; j < kGrid; ++j) {
      const Complex e = std::polar(1.0, 2 * std::numbers::pi * j / kGrid);
      sup_f = std::max(sup_f, std::abs(eval_poly(f, e)));
      sup_g = std::max(sup_g, std::abs(eval_poly(g, (1.0 - 1e-3) * e)));
    }
    // sup_f on a grid underestimates max|f|; pad by the grid Lipschitz slack.
    double lip = 0;
    for (std::size_t n = 0; n < f.coeffs.size(); ++n) lip += n * std::abs(f.coeffs[n]);
    const double max_f = sup_f + lip * std::numbers::pi / kGrid;
    EXPECT_LE(sup_g, max_f / (std::abs(m.d()) - std::abs(m.c())) + 1e-9);
  }
}

TEST(TransformCoeffs, Errors) {
  const CoeffSeq f{{1.0}, 0.0};
  EXPECT_THROW(transform_coeffs(make_scale_shift(0.25, 0.0), f, 0.0), DomainError);
  try {
    transform_coeffs(make_scale_shift(0.01, 0.0), f, 1e-14, TransformOptions{8});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("truncation not converged"), std::string::npos);
    EXPECT_GT(e.achieved(), 1e-14);
  }
}

TEST(ScaleTransform, IdentityColumn) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0)};
  const ScaleGroup g = make_group(gens);
  const CoeffSeq x{{1.0, 2.0, 3.0}, 0.0};
  const std::vector<GroupIndex> window{{0}};
  const ScaleTimeSignal s = scale_transform(g, x, window, 5, 1e-12);
  ASSERT_EQ(s.length(), 5u);
  for (std::size_t n = 0; n < 3; ++n) EXPECT_LT(std::abs(s[n].at({0}) - x.coeffs[n]), 1e-15);
  EXPECT_TRUE(s[3].empty());
}

TEST(ScaleTransform, ClosedFormColumns) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.25, 0.0)};
  const ScaleGroup g = make_group(gens);
  const std::vector<GroupIndex> window{{0}, {1}, {2}};
  const ScaleTimeSignal s = scale_transform(g, CoeffSeq{{1.0}, 0.0}, window, 20, 1e-12);
  for (const auto& k : window) {
    const SuMatrix m = element_at(g, k);
    // 1/(c z + d) = (1/d) sum (-c/d)^n z^n
    Complex want = 1.0 / m.d();
    for (std::size_t n = 0; n < 20; ++n) {
      EXPECT_LT(std::abs(s[n].at(k) - want), 1e-14);
      want *= -m.c() / m.d();
    }
  }
}

TEST(ScaleTransform, ColumnsKeepNorm) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.2), make_scale_shift(0.7, 0.2)};
  const ScaleGroup g = make_group(gens);
  const CoeffSeq x{{0.6, Complex(0, 0.8)}, 0.0};
  std::vector<GroupIndex> window;
  for (int i = -2; i <= 2; ++i)
    for (int j = -1; j <= 1; ++j) window.push_back({i, j});
  const double tol = 1e-11;
  const auto cols = scale_transform_columns(g, x, window, tol);
  for (const auto& c : cols) EXPECT_NEAR(c.norm(), 1.0, 2 * tol);

  // Energy of a fixed W-column window is bounded by W.
  const ScaleTimeSignal s = scale_transform(g, x, window, 4000, tol);
  EXPECT_LE(norm(s, NormKind::energy), static_cast<double>(window.size()) + 2 * tol);
}

TEST(ScaleTransform, ErrorsNameTheIndex) {
  const std::vector<SuMatrix> gens{make_scale_shift(0.5, 0.0)};
  const ScaleGroup g = make_group(gens);
  const std::vector<GroupIndex> window{{0}, {6}};
  try {
    scale_transform(g, CoeffSeq{{1.0}, 0.0}, window, 4, 1e-14, TransformOptions{16});
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("scale index (6)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(scale_transform(g, CoeffSeq{{1.0}, 0.0}, {}, 4, 1e-12), DomainError);
  EXPECT_THROW(scale_transform(g, CoeffSeq{{1.0}, 0.0}, window, 0, 1e-12), DomainError);
}
