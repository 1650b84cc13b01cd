#pragma once

#include <cstddef>

#include "scalekit/signal.hpp"

namespace scalekit {

/// (h * u)(k) = sum_j h(k - j) u(j) over Z^p, non-circular.
ScaleSignal group_convolve(const ScaleSignal& h, const ScaleSignal& u);

enum class ScaleMode {
  full,         // two-sided scale axis
  causal_cone,  // h and u must be supported on the positive orthant
};

/// Double time-and-scale convolution y_n = sum_{m=0}^{n} h_{n-m} * u_m.
///
/// The output has length(h) + length(u) - 1 slices (zero when either input is
/// empty). Each output slice is accumulated independently in a dense box, in
/// fixed (m, h-entry, u-entry) lexicographic order; slices run in parallel.
/// In causal_cone mode off-cone support in h or u is rejected.
ScaleTimeSignal double_convolve(const ScaleTimeSignal& h, const ScaleTimeSignal& u,
                                ScaleMode mode = ScaleMode::full);

/// Accelerated path: transforms every slice onto a torus grid large enough
/// to hold the linear convolution, multiplies pointwise per time pair and
/// transforms back. Agrees with double_convolve up to FFT rounding; output
/// values below a rounding floor (64 eps * |h|_1 * |u|_1) are dropped.
ScaleTimeSignal double_convolve_spectral(const ScaleTimeSignal& h, const ScaleTimeSignal& u,
                                         ScaleMode mode = ScaleMode::full);

inline constexpr std::size_t kBruteForceWorkLimit = 100'000'000;

/// Literal transcription of the double sum, serial: for every n, m <= n,
/// every gamma in the output box and every phi in supp(u_m), add
/// h_{n-m}(gamma - phi) u_m(phi). Test oracle; throws DomainError when the
/// term count would exceed `work_limit`.
ScaleTimeSignal brute_force_double_convolve(const ScaleTimeSignal& h, const ScaleTimeSignal& u,
                                            std::size_t work_limit = kBruteForceWorkLimit);

/// A signal whose first slice sits at time `start` (which may be negative).
struct TwoSidedSignal {
  long start = 0;
  ScaleTimeSignal data;
};

/// Two-sided-in-time convolution over finite windows, by time shifting.
TwoSidedSignal double_convolve_two_sided(const TwoSidedSignal& h, const TwoSidedSignal& u);

}  // namespace scalekit
