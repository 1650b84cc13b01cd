#pragma once

#include <cstddef>
#include <vector>

#include "scalekit/types.hpp"

namespace scalekit {

/// Trigonometric moments t_0..t_N of a circle measure; t_{-n} = conj(t_n).
struct MomentSequence {
  std::vector<Complex> t;

  std::size_t degree() const { return t.empty() ? 0 : t.size() - 1; }
};

struct PsdReport {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
  std::size_t order = 0;  // matrix order N + 1; 0 when rejected up front
};

/// Smallest eigenvalue of the Toeplitz matrix (t_{n-m}) of order N + 1.
/// A negative t_0 is rejected immediately (order 0, min_eigenvalue = t_0).
/// Throws DomainError on an empty sequence or a non-real t_0.
PsdReport toeplitz_psd_check(const MomentSequence& ms, double tol);

struct HerglotzValue {
  Complex value;
  std::size_t order = 0;
};

/// Phi(z) = t_0 + 2 sum_{n=1}^N t_n z^n for |z| < 1.
HerglotzValue herglotz_eval(const MomentSequence& ms, Complex z);

struct IntervalMass {
  double mass = 0.0;
  /// Kernel mass within one quadrature cell of either endpoint.
  double endpoint_uncertainty = 0.0;
};

/// (1/2pi) int_a^b Re Phi(r e^{i theta}) d theta by composite Simpson on
/// `quad_points` nodes (rounded up to odd). Requires a < b, b - a <= 2 pi,
/// -2 pi <= a, b <= 2 pi, 0 < r < 1 and quad_points >= 16. Nodes are
/// evaluated in parallel.
IntervalMass stieltjes_invert(const MomentSequence& ms, double a, double b, double r,
                              std::size_t quad_points);

}  // namespace scalekit
