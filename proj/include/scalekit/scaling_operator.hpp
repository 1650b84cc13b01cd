#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scalekit/moebius.hpp"
#include "scalekit/scale_group.hpp"
#include "scalekit/signal.hpp"

namespace scalekit {

/// Truncated Taylor coefficients c_0..c_N of a Hardy-space function, with a
/// certified bound on the l2 norm of the omitted coefficients.
struct CoeffSeq {
  std::vector<Complex> coeffs;
  double tail_bound = 0.0;

  double norm() const;
};

struct TransformOptions {
  std::size_t max_length = std::size_t{1} << 16;
};

/// Coefficients of (T_m f)(z) = f(m(z)) / (c z + d).
///
/// Computed by Horner's scheme on truncated series, where multiplying by
/// m(z) = (a z + b)/(c z + d) is a product with a linear polynomial followed
/// by a division recurrence, both exact under truncation. The output length
/// is the smallest N for which a Cauchy estimate on a circle |z| = rho,
/// 1 < rho < |d/c|, bounds the discarded coefficients' l2 norm by `tol`.
/// The returned tail_bound is that estimate plus the input's own tail.
///
/// Throws ConvergenceError("truncation not converged") when N would exceed
/// options.max_length.
CoeffSeq transform_coeffs(const SuMatrix& m, const CoeffSeq& f, double tol,
                          const TransformOptions& options = {});

/// x_n(gamma) for gamma = element_at(g, idx) over a window of indices:
/// column idx holds the first `time_len` coefficients of T_gamma x.
/// Columns are computed in parallel.
ScaleTimeSignal scale_transform(const ScaleGroup& g, const CoeffSeq& x,
                                std::span<const GroupIndex> scale_window,
                                std::size_t time_len, double tol,
                                const TransformOptions& options = {});

/// Same as scale_transform but additionally returns each column's full
/// (untruncated-to-time_len) transform, in window order.
std::vector<CoeffSeq> scale_transform_columns(const ScaleGroup& g, const CoeffSeq& x,
                                              std::span<const GroupIndex> scale_window,
                                              double tol,
                                              const TransformOptions& options = {});

}  // namespace scalekit
