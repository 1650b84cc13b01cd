#pragma once

// Certified supremum over the torus of S(theta) = sqrt(sum_c |F_c(theta)|^2)
// where F_c(theta) = sum_k a_ck exp(-i <k, theta>) are trigonometric
// polynomials sharing a dimension.
//
// g = S^2 is evaluated on an FFT grid, then cells around the best points are
// refined by ternary subdivision (best first). Over a cell with center c and
// half-widths delta,
//   g(c + D) <= g(c) + sum_i |d_i g(c)| delta_i + Q(delta) / 2,
//   Q(delta) = sum_m |g_hat(m)| (sum_i |m_i| delta_i)^2,
// with g_hat the exact autocorrelation coefficients, and also
//   S(c + D) <= S(c) + Lip(delta).
// Cells whose bound cannot lift the sup above lower * (1 + tol) are dropped.

#include <cstddef>
#include <vector>

#include "scalekit/types.hpp"

namespace scalekit::detail {

struct TrigTerm {
  std::vector<int> k;
  std::size_t channel = 0;
  Complex a;
};

struct TrigSystem {
  std::size_t dims = 1;
  std::size_t channels = 1;
  std::vector<TrigTerm> terms;
};

struct SupCertificate {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = true;
  std::vector<double> argmax;      // angles where `lower` was attained
  std::vector<int> initial_grid;   // FFT grid used for the first sweep
  std::size_t evaluations = 0;
};

/// Budget is the total number of point evaluations (grid plus refinement).
SupCertificate certify_sup(const TrigSystem& sys, double tol, std::size_t budget);

/// Value of sum_c |F_c(theta)|^2 at one point.
double trig_energy(const TrigSystem& sys, const std::vector<double>& theta);

}  // namespace scalekit::detail
