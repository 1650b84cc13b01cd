#include "scalekit/scale_group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace scalekit {

bool GroupIndex::is_zero() const {
  return std::all_of(k_.begin(), k_.end(), [](int v) { return v == 0; });
}

long GroupIndex::l1() const {
  long s = 0;
  for (int v : k_) s += std::labs(v);
  return s;
}

GroupIndex operator+(const GroupIndex& x, const GroupIndex& y) {
  if (x.arity() != y.arity()) throw DomainError("group index arity mismatch");
  GroupIndex out = x;
  for (std::size_t i = 0; i < x.arity(); ++i) out.k_[i] += y.k_[i];
  return out;
}

GroupIndex operator-(const GroupIndex& x, const GroupIndex& y) {
  if (x.arity() != y.arity()) throw DomainError("group index arity mismatch");
  GroupIndex out = x;
  for (std::size_t i = 0; i < x.arity(); ++i) out.k_[i] -= y.k_[i];
  return out;
}

GroupIndex operator-(const GroupIndex& x) {
  GroupIndex out = x;
  for (int& v : out.k_) v = -v;
  return out;
}

bool in_causal_cone(const GroupIndex& idx) {
  const auto& k = idx.exponents();
  return std::all_of(k.begin(), k.end(), [](int v) { return v >= 0; });
}

std::string to_string(const GroupIndex& idx) {
  std::string s = "(";
  for (std::size_t i = 0; i < idx.arity(); ++i) {
    if (i) s += ",";
    s += std::to_string(idx[i]);
  }
  return s + ")";
}

ScaleGroup make_group(std::span<const SuMatrix> generators) {
  if (generators.empty()) throw DomainError("scale group needs at least one generator");
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (classify(generators[i]) != MapClass::hyperbolic) {
      throw DomainError("generator " + std::to_string(i) + " is not hyperbolic");
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      const SuMatrix ij = compose(generators[i], generators[j]);
      const SuMatrix ji = compose(generators[j], generators[i]);
      const double scale = std::max(1.0, std::abs(ij.a()));
      if (distance(ij, ji) > 1e-10 * scale) {
        throw DomainError("generators " + std::to_string(i) + " and " +
                          std::to_string(j) + " do not commute");
      }
    }
  }

  ScaleGroup g;
  const Complex attracting = fixed_points(generators.front()).xi1;
  for (const SuMatrix& gen : generators) {
    const HyperbolicData fp = fixed_points(gen);
    const bool flip = std::abs(fp.xi2 - attracting) < std::abs(fp.xi1 - attracting);
    g.generators_.push_back(flip ? inverse(gen) : gen);
    g.reoriented_.push_back(flip);
    g.log_multipliers_.push_back(std::log(fp.multiplier));
  }
  for (std::size_t i = 0; i < g.log_multipliers_.size(); ++i) {
    for (std::size_t j = i + 1; j < g.log_multipliers_.size(); ++j) {
      if (std::abs(g.log_multipliers_[i] - g.log_multipliers_[j]) <= 1e-12) {
        throw DomainError("generators " + std::to_string(i) + " and " +
                          std::to_string(j) + " share a multiplier");
      }
    }
  }
  return g;
}

namespace {

SuMatrix power(SuMatrix base, int exponent) {
  if (exponent < 0) {
    base = inverse(base);
    exponent = -exponent;
  }
  SuMatrix acc;
  while (exponent > 0) {
    if (exponent & 1) acc = compose(acc, base);
    exponent >>= 1;
    if (exponent > 0) base = compose(base, base);
  }
  return acc;
}

}  // namespace

SuMatrix element_at(const ScaleGroup& g, const GroupIndex& idx) {
  if (idx.arity() != g.arity()) throw DomainError("group index arity mismatch");
  SuMatrix out;
  for (std::size_t i = 0; i < g.arity(); ++i) {
    if (std::abs(idx[i]) > kMaxExponent) {
      throw DomainError("exponent guard exceeded: |k_" + std::to_string(i + 1) +
                        "| > " + std::to_string(kMaxExponent));
    }
    out = compose(out, power(g.generators()[i], idx[i]));
  }
  return out;
}

double order_key(const ScaleGroup& g, const GroupIndex& idx) {
  if (idx.arity() != g.arity()) throw DomainError("group index arity mismatch");
  double s = 0;
  for (std::size_t i = 0; i < g.arity(); ++i) s += idx[i] * g.log_multipliers()[i];
  return s;
}

bool precedes(const ScaleGroup& g, const GroupIndex& lhs, const GroupIndex& rhs) {
  return order_key(g, rhs - lhs) <= 0;
}

bool in_half_space_cone(const ScaleGroup& g, const GroupIndex& idx) {
  return idx.is_zero() || order_key(g, idx) < 0;
}

}  // namespace scalekit
