#include "torus_fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace scalekit::detail {

namespace {

// The FFTW planner is not reentrant; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

TorusFft::TorusFft(std::vector<int> grid_sizes, FftDirection direction)
    : grid_sizes_(std::move(grid_sizes)) {
  for (int g : grid_sizes_) {
    if (g < 1) throw DomainError("grid sizes must be positive");
    size_ *= static_cast<std::size_t>(g);
  }
  const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::vector<Complex> a(size_), b(size_);
  std::lock_guard lock(planner_mutex());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  const int rank = static_cast<int>(grid_sizes_.size());
  plan_inplace_ = fftw_plan_dft(rank, grid_sizes_.data(), pa, pa, sign, flags);
  plan_outofplace_ = fftw_plan_dft(rank, grid_sizes_.data(), pa, pb, sign, flags);
}

TorusFft::~TorusFft() {
  std::lock_guard lock(planner_mutex());
  if (plan_inplace_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inplace_));
  if (plan_outofplace_) fftw_destroy_plan(static_cast<fftw_plan>(plan_outofplace_));
}

void TorusFft::execute(std::vector<Complex>& in, std::vector<Complex>& out) const {
  if (in.size() != size_ || out.size() != size_) {
    throw DomainError("FFT buffer size mismatch");
  }
  auto* pi = reinterpret_cast<fftw_complex*>(in.data());
  auto* po = reinterpret_cast<fftw_complex*>(out.data());
  const bool same = in.data() == out.data();
  fftw_execute_dft(static_cast<fftw_plan>(same ? plan_inplace_ : plan_outofplace_), pi, po);
}

std::size_t wrapped_offset(const std::vector<int>& k, const std::vector<int>& grid_sizes) {
  std::size_t off = 0;
  for (std::size_t i = 0; i < grid_sizes.size(); ++i) {
    const int g = grid_sizes[i];
    int r = k[i] % g;
    if (r < 0) r += g;
    off = off * static_cast<std::size_t>(g) + static_cast<std::size_t>(r);
  }
  return off;
}

}  // namespace scalekit::detail
