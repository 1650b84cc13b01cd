#include "scalekit/spectral.hpp"

#include <cmath>
#include <numbers>

#include "torus_fft.hpp"

namespace scalekit {

namespace {

std::size_t grid_volume(const std::vector<int>& grid_sizes, std::size_t arity) {
  if (grid_sizes.size() != arity) {
    throw DomainError("expected " + std::to_string(arity) + " grid sizes, got " +
                      std::to_string(grid_sizes.size()));
  }
  std::size_t v = 1;
  for (int g : grid_sizes) {
    if (g < 1) throw DomainError("grid sizes must be positive");
    v *= static_cast<std::size_t>(g);
  }
  return v;
}

void check_aliasing(const std::optional<IndexBox>& box, const std::vector<int>& grid_sizes) {
  if (!box) return;
  for (std::size_t i = 0; i < grid_sizes.size(); ++i) {
    if (box->width(i) > grid_sizes[i]) {
      throw DomainError("aliasing guard violated on axis " + std::to_string(i + 1) +
                        ": support width " + std::to_string(box->width(i)) +
                        " exceeds grid size " + std::to_string(grid_sizes[i]));
    }
  }
}

SpectrumGrid fft_of(const ScaleSignal& x, const std::vector<int>& grid_sizes) {
  SpectrumGrid out{grid_sizes, std::vector<Complex>(grid_volume(grid_sizes, x.arity()))};
  for (const auto& [k, v] : x) out.values[detail::wrapped_offset(k.exponents(), grid_sizes)] += v;
  detail::TorusFft(grid_sizes, detail::FftDirection::forward).execute_inplace(out.values);
  return out;
}

}  // namespace

std::vector<int> SpectrumGrid::coordinates(std::size_t off) const {
  std::vector<int> j(grid_sizes.size());
  for (std::size_t i = grid_sizes.size(); i-- > 0;) {
    j[i] = static_cast<int>(off % static_cast<std::size_t>(grid_sizes[i]));
    off /= static_cast<std::size_t>(grid_sizes[i]);
  }
  return j;
}

std::vector<double> SpectrumGrid::angles(std::size_t off) const {
  const auto j = coordinates(off);
  std::vector<double> th(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    th[i] = 2.0 * std::numbers::pi * j[i] / grid_sizes[i];
  }
  return th;
}

SpectrumGrid gamma_fourier(const ScaleSignal& x, const std::vector<int>& grid_sizes) {
  grid_volume(grid_sizes, x.arity());
  check_aliasing(x.bounding_box(), grid_sizes);
  return fft_of(x, grid_sizes);
}

SpectrumGrid gamma_fourier_direct(const ScaleSignal& x, const std::vector<int>& grid_sizes) {
  SpectrumGrid out{grid_sizes, std::vector<Complex>(grid_volume(grid_sizes, x.arity()))};
  for (std::size_t off = 0; off < out.size(); ++off) {
    const auto th = out.angles(off);
    Complex acc = 0;
    for (const auto& [k, v] : x) {
      double phase = 0;
      for (std::size_t i = 0; i < th.size(); ++i) phase += k[i] * th[i];
      acc += v * std::polar(1.0, -phase);
    }
    out.values[off] = acc;
  }
  return out;
}

ScaleSignal gamma_fourier_inverse(const SpectrumGrid& spectrum, const IndexBox& window) {
  const std::size_t arity = spectrum.grid_sizes.size();
  if (window.arity() != arity) throw DomainError("window arity does not match grid");
  check_aliasing(window, spectrum.grid_sizes);
  std::vector<Complex> buf = spectrum.values;
  detail::TorusFft(spectrum.grid_sizes, detail::FftDirection::backward).execute_inplace(buf);
  const double weight = 1.0 / static_cast<double>(buf.size());

  ScaleSignal out(arity);
  GroupIndex k = window.lo;
  for (std::size_t count = 0; count < window.volume(); ++count) {
    out.set(k, buf[detail::wrapped_offset(k.exponents(), spectrum.grid_sizes)] * weight);
    for (std::size_t i = arity; i-- > 0;) {
      if (++k[i] <= window.hi[i]) break;
      k[i] = window.lo[i];
    }
  }
  return out;
}

SpectrumGrid transfer_eval(const ScaleTimeSignal& h, Complex z, const std::vector<int>& grid_sizes) {
  grid_volume(grid_sizes, h.arity());
  check_aliasing(h.bounding_box(), grid_sizes);
  // Collapse the time axis first: c(k) = sum_n z^n h_n(k).
  ScaleSignal collapsed(h.arity());
  Complex zn = 1.0;
  for (const auto& slice : h.slices()) {
    for (const auto& [k, v] : slice) collapsed.add(k, zn * v);
    zn *= z;
  }
  return fft_of(collapsed, grid_sizes);
}

Complex LaurentPoly::coefficient(const GroupIndex& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void LaurentPoly::add(const GroupIndex& k, Complex c) {
  if (k.arity() != arity_) throw DomainError("Laurent exponent arity mismatch");
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) it->second += c;
  if (it->second == Complex(0.0)) terms_.erase(it);
}

bool LaurentPoly::has_negative_exponents() const {
  for (const auto& [k, c] : terms_) {
    if (!in_causal_cone(k)) return true;
  }
  return false;
}

Complex LaurentPoly::evaluate(std::span<const Complex> zs) const {
  if (zs.size() != arity_) throw DomainError("Laurent evaluation point has wrong arity");
  Complex acc = 0;
  for (const auto& [k, c] : terms_) {
    Complex mono = 1.0;
    for (std::size_t i = 0; i < arity_; ++i) mono *= std::pow(zs[i], k[i]);
    acc += c * mono;
  }
  return acc;
}

LaurentPoly operator*(const LaurentPoly& x, const LaurentPoly& y) {
  if (x.arity_ != y.arity_) throw DomainError("Laurent product arity mismatch");
  LaurentPoly out(x.arity_);
  for (const auto& [i, a] : x.terms_) {
    for (const auto& [j, b] : y.terms_) out.add(i + j, a * b);
  }
  return out;
}

LaurentPoly hermite_transform(const ScaleSignal& x) {
  LaurentPoly out(x.arity());
  for (const auto& [k, v] : x) out.add(k, v);
  return out;
}

Complex gtf_eval(const ScaleTimeSignal& h, Complex z, std::span<const Complex> zs) {
  if (zs.size() != h.arity()) throw DomainError("generalized transfer function needs p scale variables");
  bool laurent = false;
  for (const auto& slice : h.slices()) laurent = laurent || !is_cone_supported(slice);
  if (laurent) {
    for (Complex zi : zs) {
      if (std::abs(std::abs(zi) - 1.0) > 1e-12) {
        throw DomainError("Laurent evaluation requires torus points");
      }
    }
  }
  // Horner in z over the per-slice Hermite transforms.
  Complex acc = 0;
  for (std::size_t n = h.length(); n-- > 0;) {
    acc = acc * z + hermite_transform(h[n]).evaluate(zs);
  }
  return acc;
}

Complex haar_moments(const ScaleGroup& g, const GroupIndex& idx) {
  if (idx.arity() != g.arity()) throw DomainError("group index arity mismatch");
  return idx.is_zero() ? Complex(1.0) : Complex(0.0);
}

}  // namespace scalekit
