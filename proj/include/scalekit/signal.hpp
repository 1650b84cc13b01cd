#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "scalekit/group_index.hpp"
#include "scalekit/types.hpp"

namespace scalekit {

/// Inclusive bounding box lo..hi of a set of group indices.
struct IndexBox {
  GroupIndex lo;
  GroupIndex hi;

  std::size_t arity() const { return lo.arity(); }
  int width(std::size_t axis) const { return hi[axis] - lo[axis] + 1; }
  std::size_t volume() const;
  bool contains(const GroupIndex& k) const;
  /// Smallest box containing both.
  IndexBox hull(const IndexBox& other) const;
};

/// One time slice u_n(.) in l2(Gamma): a finitely supported map from group
/// indices to complex values. Exact zeros are never stored.
class ScaleSignal {
 public:
  using Map = std::map<GroupIndex, Complex>;

  explicit ScaleSignal(std::size_t arity = 1) : arity_(arity) {}

  static ScaleSignal delta(const GroupIndex& k, Complex value = 1.0);

  std::size_t arity() const { return arity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const Map& entries() const { return entries_; }
  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }

  Complex at(const GroupIndex& k) const;
  void set(const GroupIndex& k, Complex value);
  void add(const GroupIndex& k, Complex value);

  /// l2(Gamma) norm.
  double norm() const;
  /// Sum of moduli.
  double l1() const;
  ScaleSignal scaled(Complex s) const;
  std::optional<IndexBox> bounding_box() const;

 private:
  void check_arity(const GroupIndex& k) const;

  std::size_t arity_;
  Map entries_;
};

/// A time-indexed family of scale signals u_0(.), ..., u_{T-1}(.).
class ScaleTimeSignal {
 public:
  explicit ScaleTimeSignal(std::size_t arity = 1, std::size_t length = 0)
      : arity_(arity), slices_(length, ScaleSignal(arity)) {}

  std::size_t arity() const { return arity_; }
  std::size_t length() const { return slices_.size(); }
  void resize(std::size_t length) { slices_.resize(length, ScaleSignal(arity_)); }

  const ScaleSignal& operator[](std::size_t n) const { return slices_[n]; }
  ScaleSignal& operator[](std::size_t n) { return slices_[n]; }
  const std::vector<ScaleSignal>& slices() const { return slices_; }

  /// Convenience: set entry (n, k), growing the time axis as needed.
  void set(std::size_t n, const GroupIndex& k, Complex value);

  /// Bounding box over all slices; nullopt when every slice is empty.
  std::optional<IndexBox> bounding_box() const;
  /// Number of stored entries over all slices.
  std::size_t nonzeros() const;
  ScaleTimeSignal scaled(Complex s) const;

 private:
  std::size_t arity_;
  std::vector<ScaleSignal> slices_;
};

enum class NormKind { sup_l2, energy, l1_l2 };

/// sup_l2 = max_n |u_n|, energy = sum_n |u_n|^2, l1_l2 = sum_n |u_n|.
double norm(const ScaleTimeSignal& s, NormKind kind);

bool is_cone_supported(const ScaleSignal& s);
bool is_cone_supported(const ScaleTimeSignal& s);

/// Keeps the entries whose index lies in the positive orthant.
ScaleSignal scale_causal_projection(const ScaleSignal& s);
ScaleTimeSignal scale_causal_projection(const ScaleTimeSignal& s);

/// Largest exponent carrying a nonzero value, for cyclic (p = 1) signals
/// supported on k >= 0; nullopt for the zero signal.
std::optional<int> support_bound(const ScaleSignal& u);

/// Inner product sum_k x(k) conj(y(k)).
Complex inner(const ScaleSignal& x, const ScaleSignal& y);

/// Max modulus of x - y over the union of supports (missing entries read 0).
double max_abs_difference(const ScaleSignal& x, const ScaleSignal& y);
/// Same over all slices; the shorter signal is padded with zero slices.
double max_abs_difference(const ScaleTimeSignal& x, const ScaleTimeSignal& y);

}  // namespace scalekit
