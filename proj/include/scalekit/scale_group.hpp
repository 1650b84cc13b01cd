#pragma once

#include <span>
#include <vector>

#include "scalekit/group_index.hpp"
#include "scalekit/moebius.hpp"

namespace scalekit {

/// A finitely generated Abelian group of hyperbolic disc maps with p
/// commuting generators. Every generator is stored in the orientation that
/// shares the first generator's attracting fixed point, so positive
/// exponents correspond to zooming.
///
/// Multiplicative independence of the multipliers (needed for the group to
/// be free Abelian of rank p) cannot be decided in floating point; the
/// constructor only rejects duplicated multipliers.
class ScaleGroup {
 public:
  std::size_t arity() const { return generators_.size(); }
  const std::vector<SuMatrix>& generators() const { return generators_; }
  /// log(alpha_i), each < 0.
  const std::vector<double>& log_multipliers() const { return log_multipliers_; }
  /// Whether generator i was replaced by its inverse during construction.
  const std::vector<bool>& reoriented() const { return reoriented_; }

 private:
  friend ScaleGroup make_group(std::span<const SuMatrix> generators);
  std::vector<SuMatrix> generators_;
  std::vector<double> log_multipliers_;
  std::vector<bool> reoriented_;
};

/// Validates and orients a generator list. Throws DomainError on an empty
/// list, a non-hyperbolic generator, a non-commuting pair (commutator above
/// 1e-10), or a duplicated multiplier (1e-12 in log scale).
ScaleGroup make_group(std::span<const SuMatrix> generators);

inline constexpr int kMaxExponent = 64;

/// g_1^{k_1} ... g_p^{k_p} by binary exponentiation. |k_i| <= 64.
SuMatrix element_at(const ScaleGroup& g, const GroupIndex& idx);

/// Signed log-scale sum_i k_i log(alpha_i).
double order_key(const ScaleGroup& g, const GroupIndex& idx);

/// lhs precedes rhs when order_key(rhs - lhs) <= 0.
bool precedes(const ScaleGroup& g, const GroupIndex& lhs, const GroupIndex& rhs);

/// Half-space notion of the causal cone: identity, or strictly contracting
/// (order_key < 0). Compare in_causal_cone() for the orthant used elsewhere.
bool in_half_space_cone(const ScaleGroup& g, const GroupIndex& idx);

}  // namespace scalekit
