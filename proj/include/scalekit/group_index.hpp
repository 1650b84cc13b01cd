#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace scalekit {

/// Exponent vector (k_1, ..., k_p) naming the element g_1^{k_1} ... g_p^{k_p}
/// of a scale group isomorphic to Z^p. Ordered lexicographically.
class GroupIndex {
 public:
  GroupIndex() = default;
  explicit GroupIndex(std::vector<int> k) : k_(std::move(k)) {}
  GroupIndex(std::initializer_list<int> k) : k_(k) {}

  static GroupIndex zero(std::size_t arity) {
    return GroupIndex(std::vector<int>(arity, 0));
  }

  std::size_t arity() const { return k_.size(); }
  int operator[](std::size_t i) const { return k_[i]; }
  int& operator[](std::size_t i) { return k_[i]; }
  const std::vector<int>& exponents() const { return k_; }

  bool is_zero() const;
  /// Sum of |k_i|.
  long l1() const;

  friend auto operator<=>(const GroupIndex&, const GroupIndex&) = default;
  friend bool operator==(const GroupIndex&, const GroupIndex&) = default;

  friend GroupIndex operator+(const GroupIndex& x, const GroupIndex& y);
  friend GroupIndex operator-(const GroupIndex& x, const GroupIndex& y);
  friend GroupIndex operator-(const GroupIndex& x);

 private:
  std::vector<int> k_;
};

/// Membership in the scale-causal cone: the positive orthant, all k_i >= 0.
bool in_causal_cone(const GroupIndex& idx);

std::string to_string(const GroupIndex& idx);

}  // namespace scalekit
