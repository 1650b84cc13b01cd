#pragma once

// Multi-dimensional DFT on a uniform torus grid, backed by FFTW.
//
// forward:  X[j] = sum_k x[k] exp(-2 pi i <k, j / G>)
// backward: x[k] = sum_j X[j] exp(+2 pi i <k, j / G>)   (unnormalized)

#include <vector>

#include "scalekit/types.hpp"

namespace scalekit::detail {

enum class FftDirection { forward, backward };

class TorusFft {
 public:
  TorusFft(std::vector<int> grid_sizes, FftDirection direction);
  ~TorusFft();
  TorusFft(const TorusFft&) = delete;
  TorusFft& operator=(const TorusFft&) = delete;

  std::size_t size() const { return size_; }
  const std::vector<int>& grid_sizes() const { return grid_sizes_; }

  /// in and out must both hold size() values; they may alias.
  /// Safe to call concurrently on one plan.
  void execute(std::vector<Complex>& in, std::vector<Complex>& out) const;
  void execute_inplace(std::vector<Complex>& data) const { execute(data, data); }

 private:
  std::vector<int> grid_sizes_;
  std::size_t size_ = 1;
  void* plan_inplace_ = nullptr;
  void* plan_outofplace_ = nullptr;
};

/// Row-major linear offset of the grid point whose coordinate on axis i is
/// the exponent k_i reduced modulo grid_sizes[i].
std::size_t wrapped_offset(const std::vector<int>& k, const std::vector<int>& grid_sizes);

}  // namespace scalekit::detail
