#pragma once

// Dense row-major storage over an IndexBox (last axis fastest).

#include <cstddef>
#include <vector>

#include "scalekit/signal.hpp"

namespace scalekit::detail {

class DenseBox {
 public:
  explicit DenseBox(IndexBox box) : box_(std::move(box)), strides_(box_.arity()) {
    std::size_t s = 1;
    for (std::size_t i = box_.arity(); i-- > 0;) {
      strides_[i] = s;
      s *= static_cast<std::size_t>(box_.width(i));
    }
    data_.assign(s, Complex(0.0));
  }

  const IndexBox& box() const { return box_; }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& strides() const { return strides_; }
  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  std::size_t offset(const GroupIndex& k) const {
    std::size_t off = 0;
    for (std::size_t i = 0; i < box_.arity(); ++i) {
      off += static_cast<std::size_t>(k[i] - box_.lo[i]) * strides_[i];
    }
    return off;
  }

  GroupIndex index_of(std::size_t off) const {
    GroupIndex k = box_.lo;
    for (std::size_t i = 0; i < box_.arity(); ++i) {
      k[i] += static_cast<int>(off / strides_[i]);
      off %= strides_[i];
    }
    return k;
  }

  void scatter(const ScaleSignal& s) {
    for (const auto& [k, v] : s) data_[offset(k)] += v;
  }

  /// Sparse copy; entries with |v| <= drop_below are omitted.
  ScaleSignal to_signal(double drop_below = 0.0) const {
    ScaleSignal out(box_.arity());
    for (std::size_t off = 0; off < data_.size(); ++off) {
      if (std::abs(data_[off]) > drop_below) out.set(index_of(off), data_[off]);
    }
    return out;
  }

 private:
  IndexBox box_;
  std::vector<std::size_t> strides_;
  std::vector<Complex> data_;
};

/// Minkowski sum of two boxes (support of a non-circular convolution).
inline IndexBox sum_box(const IndexBox& x, const IndexBox& y) {
  return IndexBox{x.lo + y.lo, x.hi + y.hi};
}

}  // namespace scalekit::detail
