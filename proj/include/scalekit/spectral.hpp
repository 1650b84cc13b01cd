#pragma once

#include <map>
#include <span>
#include <vector>

#include "scalekit/scale_group.hpp"
#include "scalekit/signal.hpp"

namespace scalekit {

/// Samples on the product grid theta_j = 2 pi j / grid_size of the p-torus,
/// stored row-major (last axis fastest).
struct SpectrumGrid {
  std::vector<int> grid_sizes;
  std::vector<Complex> values;

  std::size_t size() const { return values.size(); }
  /// Grid coordinates of linear offset `off`.
  std::vector<int> coordinates(std::size_t off) const;
  /// Angles of linear offset `off`.
  std::vector<double> angles(std::size_t off) const;
};

/// Forward Fourier transform on Gamma ~ Z^p sampled on the grid:
///   x_hat(theta) = sum_k x(k) exp(-i <k, theta>),
/// i.e. against conj(sigma) with the character sigma(g^k) = exp(i <k, theta>).
/// Requires grid_sizes[i] >= support width along axis i; throws DomainError
/// naming the axis otherwise.
SpectrumGrid gamma_fourier(const ScaleSignal& x, const std::vector<int>& grid_sizes);

/// Serial direct-summation reference for gamma_fourier (no FFT, no aliasing
/// guard); O(|supp x| * grid points).
SpectrumGrid gamma_fourier_direct(const ScaleSignal& x, const std::vector<int>& grid_sizes);

/// Inverse transform by trigonometric quadrature with weight 1/prod(grid),
/// the discrete Haar measure, read back on `window`. Each window width must
/// not exceed the grid size on that axis.
ScaleSignal gamma_fourier_inverse(const SpectrumGrid& spectrum, const IndexBox& window);

/// H(z, theta) = sum_n z^n h_n_hat(theta) on the grid.
SpectrumGrid transfer_eval(const ScaleTimeSignal& h, Complex z, const std::vector<int>& grid_sizes);

/// Finite Laurent polynomial sum_k c_k z_1^{k_1} ... z_p^{k_p}.
class LaurentPoly {
 public:
  using Map = std::map<GroupIndex, Complex>;

  explicit LaurentPoly(std::size_t arity = 1) : arity_(arity) {}

  std::size_t arity() const { return arity_; }
  const Map& terms() const { return terms_; }
  Complex coefficient(const GroupIndex& k) const;
  void add(const GroupIndex& k, Complex c);
  bool has_negative_exponents() const;

  Complex evaluate(std::span<const Complex> zs) const;

  friend LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y);

 private:
  std::size_t arity_;
  Map terms_;
};

/// Hermite transform: the group coefficient at k becomes the coefficient of
/// z^k. On the torus, hermite_transform(x)(e^{i theta}) = x_hat(-theta).
LaurentPoly hermite_transform(const ScaleSignal& x);

/// Generalized transfer function sum_n z^n sum_k h_n(k) zs^k. Points with
/// |zs_i| != 1 are rejected when some h_n has a negative exponent.
Complex gtf_eval(const ScaleTimeSignal& h, Complex z, std::span<const Complex> zs);

/// Integral of sigma(g^idx) against the normalized Haar measure of the dual
/// torus: 1 for the identity index, 0 otherwise.
Complex haar_moments(const ScaleGroup& g, const GroupIndex& idx);

}  // namespace scalekit
