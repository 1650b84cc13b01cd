#include "scalekit/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dense.hpp"
#include "torus_fft.hpp"

namespace scalekit {

namespace {

void check_arity(const ScaleTimeSignal& h, const ScaleTimeSignal& u) {
  if (h.arity() != u.arity()) {
    throw DomainError("arity mismatch: impulse response has p = " + std::to_string(h.arity()) +
                      ", input has p = " + std::to_string(u.arity()));
  }
}

void check_mode(const ScaleTimeSignal& h, const ScaleTimeSignal& u, ScaleMode mode) {
  if (mode != ScaleMode::causal_cone) return;
  if (!is_cone_supported(h)) throw DomainError("impulse response not scale-causal");
  if (!is_cone_supported(u)) throw DomainError("input not scale-causal");
}

std::size_t output_length(const ScaleTimeSignal& h, const ScaleTimeSignal& u) {
  if (h.length() == 0 || u.length() == 0) return 0;
  return h.length() + u.length() - 1;
}

// Entries of one slice as (offset into the output box relative to the slice
// box origin, value) pairs; the sum of an h offset and a u offset is the
// output offset.
using OffsetList = std::vector<std::pair<std::size_t, Complex>>;

OffsetList offsets(const ScaleSignal& s, const IndexBox& origin,
                   const std::vector<std::size_t>& strides) {
  OffsetList out;
  out.reserve(s.size());
  for (const auto& [k, v] : s) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < strides.size(); ++i) {
      off += static_cast<std::size_t>(k[i] - origin.lo[i]) * strides[i];
    }
    out.emplace_back(off, v);
  }
  return out;
}

}  // namespace

ScaleSignal group_convolve(const ScaleSignal& h, const ScaleSignal& u) {
  if (h.arity() != u.arity()) throw DomainError("arity mismatch in group convolution");
  ScaleSignal out(h.arity());
  for (const auto& [j, uv] : u) {
    for (const auto& [i, hv] : h) out.add(i + j, hv * uv);
  }
  return out;
}

ScaleTimeSignal double_convolve(const ScaleTimeSignal& h, const ScaleTimeSignal& u,
                                ScaleMode mode) {
  check_arity(h, u);
  check_mode(h, u, mode);
  const std::size_t out_len = output_length(h, u);
  ScaleTimeSignal y(h.arity(), out_len);
  const auto hb = h.bounding_box();
  const auto ub = u.bounding_box();
  if (!hb || !ub) return y;

  const IndexBox yb = detail::sum_box(*hb, *ub);
  const detail::DenseBox layout(yb);
  std::vector<OffsetList> h_off, u_off;
  for (const auto& s : h.slices()) h_off.push_back(offsets(s, *hb, layout.strides()));
  for (const auto& s : u.slices()) u_off.push_back(offsets(s, *ub, layout.strides()));

  const long th = static_cast<long>(h.length());
  const long tu = static_cast<long>(u.length());
  const long ty = static_cast<long>(out_len);

#pragma omp parallel for schedule(dynamic)
  for (long n = 0; n < ty; ++n) {
    detail::DenseBox acc(yb);
    auto& data = acc.data();
    bool touched = false;
    for (long m = std::max(0L, n - th + 1); m <= std::min(n, tu - 1); ++m) {
      const auto& hs = h_off[static_cast<std::size_t>(n - m)];
      const auto& us = u_off[static_cast<std::size_t>(m)];
      for (const auto& [oh, hv] : hs) {
        for (const auto& [ou, uv] : us) data[oh + ou] += hv * uv;
      }
      touched = touched || (!hs.empty() && !us.empty());
    }
    if (touched) y[static_cast<std::size_t>(n)] = acc.to_signal();
  }
  return y;
}

ScaleTimeSignal double_convolve_spectral(const ScaleTimeSignal& h, const ScaleTimeSignal& u,
                                         ScaleMode mode) {
  check_arity(h, u);
  check_mode(h, u, mode);
  const std::size_t out_len = output_length(h, u);
  ScaleTimeSignal y(h.arity(), out_len);
  const auto hb = h.bounding_box();
  const auto ub = u.bounding_box();
  if (!hb || !ub) return y;

  const IndexBox yb = detail::sum_box(*hb, *ub);
  std::vector<int> grid(yb.arity());
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = yb.width(i);
  const detail::TorusFft forward(grid, detail::FftDirection::forward);
  const detail::TorusFft backward(grid, detail::FftDirection::backward);
  const std::size_t size = forward.size();

  auto transform_all = [&](const ScaleTimeSignal& s, const IndexBox& origin) {
    std::vector<std::vector<Complex>> out(s.length());
    const long count = static_cast<long>(s.length());
#pragma omp parallel for schedule(dynamic)
    for (long n = 0; n < count; ++n) {
      std::vector<Complex> buf(size, Complex(0.0));
      for (const auto& [k, v] : s[static_cast<std::size_t>(n)]) {
        buf[detail::wrapped_offset((k - origin.lo).exponents(), grid)] += v;
      }
      forward.execute_inplace(buf);
      out[static_cast<std::size_t>(n)] = std::move(buf);
    }
    return out;
  };
  const auto h_hat = transform_all(h, *hb);
  const auto u_hat = transform_all(u, *ub);

  double h_l1 = 0, u_l1 = 0;
  for (const auto& s : h.slices()) h_l1 += s.l1();
  for (const auto& s : u.slices()) u_l1 += s.l1();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * h_l1 * u_l1;

  const long th = static_cast<long>(h.length());
  const long tu = static_cast<long>(u.length());
  const long ty = static_cast<long>(out_len);
  const double inv_size = 1.0 / static_cast<double>(size);
  const detail::DenseBox layout(yb);

#pragma omp parallel for schedule(dynamic)
  for (long n = 0; n < ty; ++n) {
    std::vector<Complex> acc(size, Complex(0.0));
    for (long m = std::max(0L, n - th + 1); m <= std::min(n, tu - 1); ++m) {
      const auto& hh = h_hat[static_cast<std::size_t>(n - m)];
      const auto& uh = u_hat[static_cast<std::size_t>(m)];
      for (std::size_t j = 0; j < size; ++j) acc[j] += hh[j] * uh[j];
    }
    backward.execute_inplace(acc);
    ScaleSignal slice(yb.arity());
    for (std::size_t off = 0; off < size; ++off) {
      const Complex v = acc[off] * inv_size;
      // grid offset coincides with the box offset since both are row-major
      // over the same extents
      if (std::abs(v) > floor) slice.set(layout.index_of(off), v);
    }
    y[static_cast<std::size_t>(n)] = std::move(slice);
  }
  return y;
}

ScaleTimeSignal brute_force_double_convolve(const ScaleTimeSignal& h, const ScaleTimeSignal& u,
                                            std::size_t work_limit) {
  check_arity(h, u);
  const std::size_t out_len = output_length(h, u);
  ScaleTimeSignal y(h.arity(), out_len);
  const auto hb = h.bounding_box();
  const auto ub = u.bounding_box();
  if (!hb || !ub) return y;
  const IndexBox yb = detail::sum_box(*hb, *ub);

  std::size_t work = 0;
  for (std::size_t n = 0; n < out_len; ++n) {
    for (std::size_t m = 0; m <= n && m < u.length(); ++m) {
      if (n - m >= h.length()) continue;
      work += yb.volume() * u[m].size();
    }
  }
  if (work > work_limit) {
    throw DomainError("brute-force work guard exceeded: " + std::to_string(work) + " terms");
  }

  for (std::size_t n = 0; n < out_len; ++n) {
    detail::DenseBox acc(yb);
    for (std::size_t m = 0; m <= n && m < u.length(); ++m) {
      if (n - m >= h.length()) continue;
      const ScaleSignal& hs = h[n - m];
      for (std::size_t off = 0; off < acc.size(); ++off) {
        const GroupIndex gamma = acc.index_of(off);
        for (const auto& [phi, uv] : u[m]) {
          acc.data()[off] += hs.at(gamma - phi) * uv;
        }
      }
    }
    y[n] = acc.to_signal();
  }
  return y;
}

TwoSidedSignal double_convolve_two_sided(const TwoSidedSignal& h, const TwoSidedSignal& u) {
  return TwoSidedSignal{h.start + u.start, double_convolve(h.data, u.data)};
}

}  // namespace scalekit
