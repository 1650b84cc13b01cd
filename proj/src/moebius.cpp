#include "scalekit/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scalekit {

namespace {

constexpr double kDeterminantTol = 1e-12;
constexpr double kClassTol = 1e-12;

bool negative_sign(Complex a, Complex b) {
  for (double v : {a.real(), a.imag(), b.real(), b.imag()}) {
    if (v > 0) return false;
    if (v < 0) return true;
  }
  return false;
}

// Rescale onto the determinant-one surface and pick the canonical sign.
std::pair<Complex, Complex> canonical(Complex a, Complex b) {
  const double det = std::norm(a) - std::norm(b);
  if (det > 0) {
    const double s = 1.0 / std::sqrt(det);
    a *= s;
    b *= s;
  }
  if (negative_sign(a, b)) return {-a, -b};
  return {a, b};
}

}  // namespace

SuMatrix::SuMatrix(Complex a, Complex b) {
  if (!is_finite(a) || !is_finite(b)) {
    throw DomainError("SuMatrix entries must be finite");
  }
  const double det = std::norm(a) - std::norm(b);
  const double scale = std::max(1.0, std::norm(a) + std::norm(b));
  if (std::abs(det - 1.0) > kDeterminantTol * scale) {
    throw DomainError("SuMatrix requires |a|^2 - |b|^2 = 1, got " +
                      std::to_string(det));
  }
  std::tie(a_, b_) = canonical(a, b);
}

std::string to_string(MapClass c) {
  switch (c) {
    case MapClass::identity: return "identity";
    case MapClass::elliptic: return "elliptic";
    case MapClass::parabolic: return "parabolic";
    case MapClass::hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

double distance(const SuMatrix& m1, const SuMatrix& m2) {
  return std::max(std::abs(m1.a() - m2.a()), std::abs(m1.b() - m2.b()));
}

SuMatrix make_scale_shift(double alpha, double theta) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw DomainError("scale shift requires alpha > 0");
  }
  if (!(std::abs(theta) < std::numbers::pi / 2)) {
    throw DomainError("scale shift requires |theta| < pi/2");
  }
  const double norm = 2.0 * std::sqrt(alpha) * std::cos(theta);
  const Complex e = std::polar(1.0, theta);
  const Complex a = (e + alpha * std::conj(e)) / norm;
  const Complex b = (1.0 - alpha) / norm;
  return SuMatrix(a, b);
}

SuMatrix compose(const SuMatrix& m1, const SuMatrix& m2) {
  // [[a1 b1][c1 d1]] * [[a2 b2][c2 d2]]; the product stays in SU(1,1) form,
  // so only the first row is needed.
  const Complex a = m1.a() * m2.a() + m1.b() * m2.c();
  const Complex b = m1.a() * m2.b() + m1.b() * m2.d();
  auto [ca, cb] = canonical(a, b);
  return SuMatrix(ca, cb, SuMatrix::Unchecked{});
}

int compose_sign(const SuMatrix& m1, const SuMatrix& m2) {
  const Complex a = m1.a() * m2.a() + m1.b() * m2.c();
  const Complex b = m1.a() * m2.b() + m1.b() * m2.d();
  return negative_sign(a, b) ? -1 : 1;
}

SuMatrix inverse(const SuMatrix& m) {
  auto [a, b] = canonical(std::conj(m.a()), -m.b());
  return SuMatrix(a, b, SuMatrix::Unchecked{});
}

MapClass classify(const SuMatrix& m) {
  if (std::abs(m.a() - 1.0) <= kClassTol && std::abs(m.b()) <= kClassTol) {
    return MapClass::identity;
  }
  const double r = std::abs(m.a().real());
  if (std::abs(r - 1.0) <= kClassTol) return MapClass::parabolic;
  return r > 1.0 ? MapClass::hyperbolic : MapClass::elliptic;
}

double multiplier(const SuMatrix& m) {
  if (classify(m) != MapClass::hyperbolic) {
    throw DomainError("multiplier undefined for non-hyperbolic map");
  }
  const double r = std::abs(m.a().real());
  const double s = std::sqrt((r - 1.0) * (r + 1.0));
  // (r - s)/(r + s) = 1/(r + s)^2 since (r - s)(r + s) = 1.
  const double t = r + s;
  return 1.0 / (t * t);
}

HyperbolicData fixed_points(const SuMatrix& m) {
  if (classify(m) != MapClass::hyperbolic) {
    throw DomainError("fixed points requested for non-hyperbolic map");
  }
  HyperbolicData out;
  const double re = m.a().real();
  out.multiplier = multiplier(m);
  out.lambda = Complex(std::sqrt((re - 1.0) * (re + 1.0)), m.a().imag());
  out.xi1 = out.lambda / m.c();
  out.xi2 = -std::conj(out.lambda) / m.c();
  out.rotation_phase = out.lambda / m.b();
  out.theta_phase = out.lambda / std::abs(out.lambda);
  return out;
}

Complex apply_map(const SuMatrix& m, Complex z) {
  const Complex den = m.c() * z + m.d();
  if (den == Complex(0.0)) throw DomainError("evaluation at pole");
  const Complex w = (m.a() * z + m.b()) / den;
  if (!is_finite(w)) throw DomainError("evaluation at pole");
  return w;
}

}  // namespace scalekit
