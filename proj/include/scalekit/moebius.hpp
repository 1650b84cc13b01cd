#pragma once

#include <string>

#include "scalekit/types.hpp"

namespace scalekit {

/// An element of SU(1,1), i.e. the matrix [[a, b], [conj(b), conj(a)]] with
/// |a|^2 - |b|^2 = 1, acting on the unit disc by z -> (a z + b)/(conj(b) z + conj(a)).
///
/// The pair (a, b) and (-a, -b) describe the same disc map; every SuMatrix is
/// stored with a canonical sign: the first nonzero of (Re a, Im a, Re b, Im b)
/// is positive. Note that the scaling operator T_m depends on the sign, so the
/// canonical representative is what it acts with.
class SuMatrix {
 public:
  /// Identity.
  SuMatrix() = default;

  /// Validates |a|^2 - |b|^2 = 1 (1e-12, relative to |a|^2 + |b|^2 for large
  /// entries) and finiteness, then sign-normalizes.
  SuMatrix(Complex a, Complex b);

  static SuMatrix identity() { return {}; }

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Complex c() const { return std::conj(b_); }
  Complex d() const { return std::conj(a_); }

  double determinant() const { return std::norm(a_) - std::norm(b_); }

  friend bool operator==(const SuMatrix&, const SuMatrix&) = default;

 private:
  struct Unchecked {};
  SuMatrix(Complex a, Complex b, Unchecked) : a_(a), b_(b) {}
  friend SuMatrix compose(const SuMatrix&, const SuMatrix&);
  friend SuMatrix inverse(const SuMatrix&);

  Complex a_{1.0, 0.0};
  Complex b_{0.0, 0.0};
};

enum class MapClass { identity, elliptic, parabolic, hyperbolic };

std::string to_string(MapClass c);

struct HyperbolicData {
  double multiplier = 0;   // in (0, 1)
  Complex lambda;          // sqrt(Re(a)^2 - 1) + i Im(a)
  Complex xi1;             // attracting fixed point lambda / conj(b)
  Complex xi2;             // repelling fixed point -conj(lambda) / conj(b)
  Complex rotation_phase;  // lambda / b
  Complex theta_phase;     // lambda / |lambda|
};

/// Largest entrywise modulus of the difference of the (a, b) pairs.
double distance(const SuMatrix& m1, const SuMatrix& m2);

/// The scale shift conjugated into the disc through the Cayley-type map
/// G_theta, normalized into SU(1,1) form:
///   a = (e^{i theta} + alpha e^{-i theta}) / (2 sqrt(alpha) cos theta)
///   b = (1 - alpha) / (2 sqrt(alpha) cos theta)
SuMatrix make_scale_shift(double alpha, double theta);

/// Matrix product m1 * m2, i.e. the map z -> m1(m2(z)).
SuMatrix compose(const SuMatrix& m1, const SuMatrix& m2);

/// +1 when the raw matrix product m1 * m2 is already canonical, -1 when
/// compose() had to flip its sign.
int compose_sign(const SuMatrix& m1, const SuMatrix& m2);

SuMatrix inverse(const SuMatrix& m);

MapClass classify(const SuMatrix& m);

/// Multiplier of a hyperbolic map, (r - s)/(r + s) with r = |Re a|,
/// s = sqrt(r^2 - 1). Throws DomainError for other classes.
double multiplier(const SuMatrix& m);

HyperbolicData fixed_points(const SuMatrix& m);

/// (a z + b)/(conj(b) z + conj(a)). Throws DomainError at the pole -conj(a)/conj(b).
Complex apply_map(const SuMatrix& m, Complex z);

}  // namespace scalekit
