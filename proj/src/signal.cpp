#include "scalekit/signal.hpp"

#include <algorithm>
#include <cmath>

namespace scalekit {

std::size_t IndexBox::volume() const {
  std::size_t v = 1;
  for (std::size_t i = 0; i < arity(); ++i) v *= static_cast<std::size_t>(width(i));
  return v;
}

bool IndexBox::contains(const GroupIndex& k) const {
  for (std::size_t i = 0; i < arity(); ++i) {
    if (k[i] < lo[i] || k[i] > hi[i]) return false;
  }
  return true;
}

IndexBox IndexBox::hull(const IndexBox& other) const {
  IndexBox out = *this;
  for (std::size_t i = 0; i < arity(); ++i) {
    out.lo[i] = std::min(lo[i], other.lo[i]);
    out.hi[i] = std::max(hi[i], other.hi[i]);
  }
  return out;
}

ScaleSignal ScaleSignal::delta(const GroupIndex& k, Complex value) {
  ScaleSignal s(k.arity());
  s.set(k, value);
  return s;
}

void ScaleSignal::check_arity(const GroupIndex& k) const {
  if (k.arity() != arity_) {
    throw DomainError("group index " + to_string(k) + " does not match arity " +
                      std::to_string(arity_));
  }
}

Complex ScaleSignal::at(const GroupIndex& k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? Complex(0.0) : it->second;
}

void ScaleSignal::set(const GroupIndex& k, Complex value) {
  check_arity(k);
  if (value == Complex(0.0)) {
    entries_.erase(k);
  } else {
    entries_[k] = value;
  }
}

void ScaleSignal::add(const GroupIndex& k, Complex value) {
  check_arity(k);
  auto [it, inserted] = entries_.try_emplace(k, value);
  if (!inserted) {
    it->second += value;
    if (it->second == Complex(0.0)) entries_.erase(it);
  } else if (value == Complex(0.0)) {
    entries_.erase(it);
  }
}

double ScaleSignal::norm() const {
  double s = 0;
  for (const auto& [k, v] : entries_) s += std::norm(v);
  return std::sqrt(s);
}

double ScaleSignal::l1() const {
  double s = 0;
  for (const auto& [k, v] : entries_) s += std::abs(v);
  return s;
}

ScaleSignal ScaleSignal::scaled(Complex s) const {
  ScaleSignal out(arity_);
  for (const auto& [k, v] : entries_) out.set(k, s * v);
  return out;
}

std::optional<IndexBox> ScaleSignal::bounding_box() const {
  if (entries_.empty()) return std::nullopt;
  IndexBox box{entries_.begin()->first, entries_.begin()->first};
  for (const auto& [k, v] : entries_) {
    for (std::size_t i = 0; i < arity_; ++i) {
      box.lo[i] = std::min(box.lo[i], k[i]);
      box.hi[i] = std::max(box.hi[i], k[i]);
    }
  }
  return box;
}

void ScaleTimeSignal::set(std::size_t n, const GroupIndex& k, Complex value) {
  if (n >= slices_.size()) resize(n + 1);
  slices_[n].set(k, value);
}

std::optional<IndexBox> ScaleTimeSignal::bounding_box() const {
  std::optional<IndexBox> box;
  for (const auto& s : slices_) {
    if (auto b = s.bounding_box()) box = box ? box->hull(*b) : *b;
  }
  return box;
}

std::size_t ScaleTimeSignal::nonzeros() const {
  std::size_t n = 0;
  for (const auto& s : slices_) n += s.size();
  return n;
}

ScaleTimeSignal ScaleTimeSignal::scaled(Complex s) const {
  ScaleTimeSignal out(arity_, length());
  for (std::size_t n = 0; n < length(); ++n) out[n] = slices_[n].scaled(s);
  return out;
}

double norm(const ScaleTimeSignal& s, NormKind kind) {
  double acc = 0;
  for (const auto& slice : s.slices()) {
    const double v = slice.norm();
    switch (kind) {
      case NormKind::sup_l2: acc = std::max(acc, v); break;
      case NormKind::energy: acc += v * v; break;
      case NormKind::l1_l2: acc += v; break;
    }
  }
  return acc;
}

bool is_cone_supported(const ScaleSignal& s) {
  return std::all_of(s.begin(), s.end(),
                     [](const auto& e) { return in_causal_cone(e.first); });
}

bool is_cone_supported(const ScaleTimeSignal& s) {
  return std::all_of(s.slices().begin(), s.slices().end(),
                     [](const ScaleSignal& x) { return is_cone_supported(x); });
}

ScaleSignal scale_causal_projection(const ScaleSignal& s) {
  ScaleSignal out(s.arity());
  for (const auto& [k, v] : s) {
    if (in_causal_cone(k)) out.set(k, v);
  }
  return out;
}

ScaleTimeSignal scale_causal_projection(const ScaleTimeSignal& s) {
  ScaleTimeSignal out(s.arity(), s.length());
  for (std::size_t n = 0; n < s.length(); ++n) out[n] = scale_causal_projection(s[n]);
  return out;
}

std::optional<int> support_bound(const ScaleSignal& u) {
  if (u.arity() != 1 || !is_cone_supported(u)) {
    throw DomainError("support bound defined on ordered cyclic cone");
  }
  if (u.empty()) return std::nullopt;
  return u.entries().rbegin()->first[0];
}

Complex inner(const ScaleSignal& x, const ScaleSignal& y) {
  Complex s = 0;
  for (const auto& [k, v] : x) s += v * std::conj(y.at(k));
  return s;
}

double max_abs_difference(const ScaleSignal& x, const ScaleSignal& y) {
  double m = 0;
  for (const auto& [k, v] : x) m = std::max(m, std::abs(v - y.at(k)));
  for (const auto& [k, v] : y) {
    if (!x.entries().contains(k)) m = std::max(m, std::abs(v));
  }
  return m;
}

double max_abs_difference(const ScaleTimeSignal& x, const ScaleTimeSignal& y) {
  const ScaleSignal empty(x.arity());
  double m = 0;
  for (std::size_t n = 0; n < std::max(x.length(), y.length()); ++n) {
    const ScaleSignal& xs = n < x.length() ? x[n] : empty;
    const ScaleSignal& ys = n < y.length() ? y[n] : empty;
    m = std::max(m, max_abs_difference(xs, ys));
  }
  return m;
}

}  // namespace scalekit
