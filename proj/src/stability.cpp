#include "scalekit/stability.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>

#include "dense.hpp"
#include "scalekit/convolution.hpp"
#include "scalekit/spectral.hpp"
#include "sup_certify.hpp"
#include "torus_fft.hpp"

namespace scalekit {

namespace {

constexpr double kReplaySlack = 1e-8;
constexpr double kGainSlack = 1e-9;

detail::TrigSystem scale_symbol(const ScaleSignal& h) {
  detail::TrigSystem sys;
  sys.dims = h.arity();
  for (const auto& [k, v] : h) sys.terms.push_back({k.exponents(), 0, v});
  return sys;
}

// Time on axis 0, scale on axes 1..p, one channel.
detail::TrigSystem full_symbol(const ScaleTimeSignal& h) {
  detail::TrigSystem sys;
  sys.dims = h.arity() + 1;
  for (std::size_t n = 0; n < h.length(); ++n) {
    for (const auto& [k, v] : h[n]) {
      std::vector<int> e{static_cast<int>(n)};
      e.insert(e.end(), k.exponents().begin(), k.exponents().end());
      sys.terms.push_back({std::move(e), 0, v});
    }
  }
  return sys;
}

// One channel per time slice.
detail::TrigSystem stacked_symbol(const ScaleTimeSignal& h) {
  detail::TrigSystem sys;
  sys.dims = h.arity();
  sys.channels = std::max<std::size_t>(h.length(), 1);
  for (std::size_t n = 0; n < h.length(); ++n) {
    for (const auto& [k, v] : h[n]) sys.terms.push_back({k.exponents(), n, v});
  }
  return sys;
}

// h~(k) = conj(h(-k)), the symbol of the adjoint.
ScaleSignal adjoint_kernel(const ScaleSignal& h) {
  ScaleSignal out(h.arity());
  for (const auto& [k, v] : h) out.set(-k, std::conj(v));
  return out;
}

IndexBox window_box(std::size_t arity, int width, bool cone) {
  GroupIndex lo = GroupIndex::zero(arity), hi = GroupIndex::zero(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    lo[i] = cone ? 0 : -(width / 2);
    hi[i] = lo[i] + width - 1;
  }
  return IndexBox{lo, hi};
}

// Sparse kernel times dense field; output over the Minkowski sum box.
detail::DenseBox convolve_dense(const ScaleSignal& h, const detail::DenseBox& x) {
  const auto hb = h.bounding_box();
  if (!hb) return detail::DenseBox(x.box());
  detail::DenseBox out(detail::sum_box(*hb, x.box()));
  const auto& strides = out.strides();
  std::vector<std::pair<std::size_t, Complex>> xs;
  for (std::size_t off = 0; off < x.size(); ++off) {
    const Complex v = x.data()[off];
    if (v == Complex(0.0)) continue;
    const GroupIndex k = x.index_of(off);
    std::size_t o = 0;
    for (std::size_t i = 0; i < strides.size(); ++i) {
      o += static_cast<std::size_t>(k[i] - x.box().lo[i]) * strides[i];
    }
    xs.emplace_back(o, v);
  }
  auto& data = out.data();
  for (const auto& [k, a] : h) {
    std::size_t o = 0;
    for (std::size_t i = 0; i < strides.size(); ++i) {
      o += static_cast<std::size_t>(k[i] - hb->lo[i]) * strides[i];
    }
    for (const auto& [ox, v] : xs) data[o + ox] += a * v;
  }
  return out;
}

void project_cone(detail::DenseBox& x) {
  for (std::size_t off = 0; off < x.size(); ++off) {
    if (!in_causal_cone(x.index_of(off))) x.data()[off] = 0.0;
  }
}

double dense_norm(const detail::DenseBox& x) {
  double s = 0;
  for (Complex v : x.data()) s += std::norm(v);
  return std::sqrt(s);
}

// J(v) = sum_n |P M*_n v| and its ascent direction restricted to the
// window, for the BIBO lower bound.
class AdjointObjective {
 public:
  AdjointObjective(const ScaleTimeSignal& h, IndexBox window, bool cone)
      : window_(std::move(window)), cone_(cone) {
    for (const auto& s : h.slices()) {
      if (s.empty()) continue;
      kernels_.push_back(s);
      adjoints_.push_back(adjoint_kernel(s));
    }
  }

  const IndexBox& window() const { return window_; }

  double value(const detail::DenseBox& v) const {
    double j = 0;
    for (const auto& a : adjoints_) {
      auto w = convolve_dense(a, v);
      if (cone_) project_cone(w);
      j += dense_norm(w);
    }
    return j;
  }

  detail::DenseBox ascent(const detail::DenseBox& v) const {
    detail::DenseBox grad(window_);
    for (std::size_t n = 0; n < kernels_.size(); ++n) {
      auto w = convolve_dense(adjoints_[n], v);
      if (cone_) project_cone(w);
      const double nw = dense_norm(w);
      if (nw == 0.0) continue;
      for (auto& x : w.data()) x /= nw;
      const auto back = convolve_dense(kernels_[n], w);
      for (std::size_t off = 0; off < grad.size(); ++off) {
        const GroupIndex k = grad.index_of(off);
        if (back.box().contains(k)) grad.data()[off] += back.data()[back.offset(k)];
      }
    }
    if (cone_) project_cone(grad);
    return grad;
  }

 private:
  IndexBox window_;
  bool cone_;
  std::vector<ScaleSignal> kernels_;
  std::vector<ScaleSignal> adjoints_;
};

bool normalize(detail::DenseBox& v) {
  const double n = dense_norm(v);
  if (n == 0.0 || !std::isfinite(n)) return false;
  for (auto& x : v.data()) x /= n;
  return true;
}

// Monotone for the convex, 1-homogeneous J: J(v') >= <grad J(v), v'> >=
// <grad J(v), v> = J(v).
double ascend(const AdjointObjective& obj, detail::DenseBox& v, double stop_at) {
  double j = obj.value(v);
  for (int it = 0; it < 200 && j < stop_at; ++it) {
    auto next = obj.ascent(v);
    if (!normalize(next)) break;
    const double jn = obj.value(next);
    if (!(jn > j)) break;
    const bool stalled = jn - j <= 1e-15 * jn;
    v = std::move(next);
    j = jn;
    if (stalled) break;
  }
  return j;
}

// Grid points where sum_n |h_n_hat| is largest, as start directions.
struct SymbolScan {
  double best = 0.0;
  std::vector<std::vector<double>> peaks;
};

SymbolScan scan_symbol_sum(const ScaleTimeSignal& h, std::size_t peaks) {
  const std::size_t p = h.arity();
  const int g = std::max(4, static_cast<int>(std::pow(4096.0, 1.0 / static_cast<double>(p))));
  const std::vector<int> grid(p, g);
  const detail::TorusFft fft(grid, detail::FftDirection::forward);
  std::vector<double> total(fft.size(), 0.0);
  std::vector<Complex> buf(fft.size());
  for (const auto& s : h.slices()) {
    if (s.empty()) continue;
    std::fill(buf.begin(), buf.end(), Complex(0.0));
    for (const auto& [k, v] : s) buf[detail::wrapped_offset(k.exponents(), grid)] += v;
    fft.execute_inplace(buf);
    for (std::size_t j = 0; j < buf.size(); ++j) total[j] += std::abs(buf[j]);
  }
  std::vector<std::size_t> order(total.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  const std::size_t keep = std::min(peaks, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(keep), order.end(),
                    [&](std::size_t x, std::size_t y) {
                      return total[x] != total[y] ? total[x] > total[y] : x < y;
                    });
  SymbolScan scan;
  scan.best = total[order.front()];
  for (std::size_t r = 0; r < keep; ++r) {
    std::size_t off = order[r];
    std::vector<double> th(p);
    for (std::size_t i = p; i-- > 0;) {
      th[i] = 2.0 * std::numbers::pi * static_cast<double>(off % static_cast<std::size_t>(g)) / g;
      off /= static_cast<std::size_t>(g);
    }
    scan.peaks.push_back(std::move(th));
  }
  return scan;
}

// Sine-tapered character exp(i <k, theta>) over the window.
detail::DenseBox windowed_character(const IndexBox& window, const std::vector<double>& theta) {
  detail::DenseBox v(window);
  for (std::size_t off = 0; off < v.size(); ++off) {
    const GroupIndex k = v.index_of(off);
    double taper = 1.0, phase = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const int pos = k[i] - window.lo[i] + 1;
      taper *= std::sin(std::numbers::pi * pos / (window.width(i) + 1));
      phase += k[i] * theta[i];
    }
    v.data()[off] = std::polar(taper, phase);
  }
  normalize(v);
  return v;
}

ScaleSignal sparse(const detail::DenseBox& v) { return v.to_signal(); }

double sum_energy(const ScaleTimeSignal& h) {
  double s = 0;
  for (const auto& slice : h.slices()) s += slice.norm() * slice.norm();
  return s;
}

void check_lower_upper(double& lower, double upper, const char* what) {
  if (lower <= upper) return;
  const double scale = std::max({1.0, std::abs(lower), std::abs(upper)});
  if (lower - upper > 1e-12 * scale) {
    throw std::logic_error(std::string(what) + ": lower bound exceeds upper bound");
  }
  lower = upper;  // rounding only
}

std::vector<Complex> torus_point(const std::vector<double>& theta) {
  std::vector<Complex> z;
  for (double t : theta) z.push_back(std::polar(1.0, -t));
  return z;
}

double energy_ratio(const ScaleTimeSignal& h, const ScaleTimeSignal& u) {
  const double eu = norm(u, NormKind::energy);
  if (eu == 0.0) return 0.0;
  return norm(double_convolve(h, u), NormKind::energy) / eu;
}

ResonantWitness build_resonant(const ScaleTimeSignal& h, const std::vector<double>& theta,
                               bool cone) {
  ResonantWitness w;
  w.point = torus_point(theta);
  w.value = gtf_eval(h, w.point.front(),
                     std::span<const Complex>(w.point.data() + 1, w.point.size() - 1));
  const auto hb = h.bounding_box();
  std::size_t len = std::max<std::size_t>(32, 8 * h.length());
  int width = 8;
  if (hb) {
    for (std::size_t i = 0; i < h.arity(); ++i) width = std::max(width, 8 * hb->width(i));
  }
  constexpr double kVolumeCap = 1 << 21;
  for (;;) {
    w.time_len = len;
    w.box = window_box(h.arity(), width, cone);
    w.energy_ratio = energy_ratio(h, resonant_input(w.point, w.time_len, w.box));
    const double next_volume = 2.0 * static_cast<double>(len) *
                               std::pow(2.0 * width, static_cast<double>(h.arity()));
    if (w.energy_ratio > 1.0 || next_volume > kVolumeCap) break;
    len *= 2;
    width *= 2;
  }
  return w;
}

GramCheck gram_check(const ScaleTimeSignal& h, std::size_t count, std::uint64_t seed,
                     double tol) {
  GramCheck gc;
  gc.sample_count = count;
  gc.seed = seed;
  const std::size_t dims = h.arity() + 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<Complex>> pts(count, std::vector<Complex>(dims));
  std::vector<Complex> values(count);
  for (std::size_t j = 0; j < count; ++j) {
    for (auto& z : pts[j]) {
      const double r = gc.radius * std::sqrt(unif(rng));
      z = std::polar(r, 2.0 * std::numbers::pi * unif(rng));
    }
    values[j] = gtf_eval(h, pts[j].front(),
                         std::span<const Complex>(pts[j].data() + 1, dims - 1));
  }
  const auto n = static_cast<Eigen::Index>(count);
  Eigen::MatrixXcd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& x = pts[static_cast<std::size_t>(i)];
      const auto& y = pts[static_cast<std::size_t>(j)];
      Complex szego = 1.0;
      for (std::size_t l = 0; l < dims; ++l) szego /= 1.0 - x[l] * std::conj(y[l]);
      k(i, j) = (1.0 - values[static_cast<std::size_t>(i)] *
                           std::conj(values[static_cast<std::size_t>(j)])) * szego;
    }
  }
  if (count > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(k, Eigen::EigenvaluesOnly);
    gc.min_eigenvalue = solver.eigenvalues().minCoeff();
  }
  gc.psd = gc.min_eigenvalue >= -tol;
  return gc;
}

ScaleTimeSignal random_input(std::size_t arity, std::size_t len, bool cone, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const IndexBox box = cone ? window_box(arity, 5, true) : window_box(arity, 5, false);
  ScaleTimeSignal u(arity, len);
  detail::DenseBox layout(box);
  for (std::size_t n = 0; n < len; ++n) {
    for (std::size_t off = 0; off < layout.size(); ++off) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      u[n].set(layout.index_of(off), Complex(re, im));
    }
  }
  return u;
}

}  // namespace

std::size_t default_grid_budget() {
  if (const char* env = std::getenv("SCALEKIT_MAX_GRID")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxGrid;
}

std::string to_string(Property p) {
  switch (p) {
    case Property::bibo: return "bibo";
    case Property::dissipative: return "dissipative";
    case Property::l1_l2: return "l1_l2";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

OperatorNormBracket mult_operator_norm(const ScaleSignal& h, bool cone, const CertifyOptions& opt) {
  if (cone && !is_cone_supported(h)) throw DomainError("impulse response not scale-causal");
  const auto cert = detail::certify_sup(scale_symbol(h), opt.tol, opt.max_points);
  return OperatorNormBracket{cert.lower, cert.upper, cert.certified, cert.argmax};
}

StabilityReport bibo_analysis(const ScaleTimeSignal& h, bool cone, const CertifyOptions& opt) {
  if (cone && !is_cone_supported(h)) throw DomainError("impulse response not scale-causal");
  StabilityReport rep;
  rep.property = Property::bibo;
  rep.cone = cone;
  rep.tol = opt.tol;

  double upper = 0;
  for (const auto& s : h.slices()) {
    rep.slice_norms.push_back(mult_operator_norm(s, cone, opt));
    upper += rep.slice_norms.back().upper;
    rep.certified = rep.certified && rep.slice_norms.back().certified;
  }
  rep.sufficient_upper = upper;

  const std::size_t p = h.arity();
  const int width = std::max(4, static_cast<int>(std::pow(2048.0, 1.0 / static_cast<double>(p))));
  const AdjointObjective obj(h, window_box(p, width, cone), cone);

  BiboWitness best;
  best.n = h.length() == 0 ? 0 : h.length() - 1;
  detail::DenseBox best_v(obj.window());
  double best_j = -1.0;
  const double stop_at = upper * (1.0 - 1e-15);

  auto consider = [&](detail::DenseBox v, const std::string& origin) {
    if (best_j >= stop_at && best_j >= 0) return;
    const double j = ascend(obj, v, stop_at);
    if (j > best_j) {
      best_j = j;
      best_v = std::move(v);
      best.origin = origin;
    }
  };

  detail::DenseBox impulse(obj.window());
  impulse.data()[impulse.offset(GroupIndex::zero(p))] = 1.0;
  consider(std::move(impulse), "impulse");

  if (h.nonzeros() > 0) {
    const SymbolScan scan = scan_symbol_sum(h, 3);
    rep.symbol_lower = scan.best;
    for (const auto& th : scan.peaks) {
      std::string origin = "character at theta = (";
      for (std::size_t i = 0; i < th.size(); ++i) {
        origin += (i ? ", " : "") + std::to_string(th[i]);
      }
      consider(windowed_character(obj.window(), th), origin + ")");
    }
  } else {
    rep.symbol_lower = 0.0;
  }

  best.v = sparse(best_v);
  best.value = std::max(best_j, 0.0);
  double lower = best.value;
  check_lower_upper(lower, upper, "bibo_analysis");
  rep.necessary_lower = lower;
  rep.bibo_witness = std::move(best);
  rep.verdict = Verdict::pass;  // finite support: sum_n |M_{h_n}| < inf
  return rep;
}

ScaleTimeSignal adversarial_input(const ScaleTimeSignal& h, std::size_t n, const ScaleSignal& v,
                                  bool cone) {
  if (v.arity() != h.arity()) throw DomainError("witness arity does not match system");
  if (std::abs(v.norm() - 1.0) > 1e-12) throw DomainError("witness vector must have unit norm");
  ScaleTimeSignal u(h.arity(), n + 1);
  for (std::size_t m = 0; m <= n; ++m) {
    const std::size_t lag = n - m;
    if (lag >= h.length()) continue;
    ScaleSignal w = group_convolve(adjoint_kernel(h[lag]), v);
    if (cone) w = scale_causal_projection(w);
    const double nw = w.norm();
    if (nw > 0) u[m] = w.scaled(1.0 / nw);
  }
  return u;
}

ScaleTimeSignal resonant_input(const std::vector<Complex>& point, std::size_t time_len,
                               const IndexBox& box) {
  if (point.size() != box.arity() + 1) throw DomainError("resonant point has wrong arity");
  ScaleTimeSignal u(box.arity(), time_len);
  const detail::DenseBox layout(box);
  for (std::size_t m = 0; m < time_len; ++m) {
    const Complex zt = std::pow(std::conj(point[0]), static_cast<int>(m));
    for (std::size_t off = 0; off < layout.size(); ++off) {
      const GroupIndex k = layout.index_of(off);
      Complex v = zt;
      for (std::size_t i = 0; i < box.arity(); ++i) v *= std::pow(std::conj(point[i + 1]), k[i]);
      u[m].set(k, v);
    }
  }
  return u;
}

StabilityReport dissipativity_check(const ScaleTimeSignal& h, std::size_t sample_count,
                                    std::uint64_t seed, const CertifyOptions& opt) {
  StabilityReport rep;
  rep.property = Property::dissipative;
  rep.tol = opt.tol;
  rep.cone = is_cone_supported(h);

  const auto cert = detail::certify_sup(full_symbol(h), opt.tol, opt.max_points);
  rep.certified = cert.certified;
  rep.sufficient_upper = cert.upper;
  rep.necessary_lower = cert.lower;
  rep.sup_lower = cert.lower;
  rep.argmax_theta = cert.argmax;
  rep.grid_sizes = cert.initial_grid;

  if (cert.upper <= 1.0 + opt.tol) {
    rep.verdict = Verdict::pass;
  } else if (cert.lower > 1.0 + opt.tol) {
    rep.verdict = Verdict::fail;
    rep.resonant = build_resonant(h, cert.argmax, rep.cone);
  } else {
    rep.verdict = Verdict::inconclusive;
  }
  // The kernel form is stated for power series; Laurent symbols skip it.
  if (rep.cone) rep.gram = gram_check(h, sample_count, seed, opt.tol);
  return rep;
}

StabilityReport l1l2_gain(const ScaleTimeSignal& h, const CertifyOptions& opt) {
  StabilityReport rep;
  rep.property = Property::l1_l2;
  rep.tol = opt.tol;
  rep.cone = is_cone_supported(h);

  const auto cert = detail::certify_sup(stacked_symbol(h), opt.tol, opt.max_points);
  rep.certified = cert.certified;
  rep.sufficient_upper = cert.upper;
  rep.sup_lower = cert.lower;
  rep.argmax_theta = cert.argmax;
  rep.grid_sizes = cert.initial_grid;

  double h2 = std::sqrt(sum_energy(h));
  rep.h2_norm = h2;
  check_lower_upper(h2, cert.upper, "l1l2_gain");
  rep.necessary_lower = h2;
  rep.verdict = Verdict::pass;
  return rep;
}

VerifyReport empirical_verify(const ScaleTimeSignal& h, const StabilityReport& report,
                              std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("empirical verification needs at least one trial");
  if (!report.sufficient_upper) throw DomainError("report carries no upper bound");
  VerifyReport vr;
  vr.property = report.property;
  vr.trials = trials;
  vr.seed = seed;
  const double upper = *report.sufficient_upper;
  vr.bound = report.property == Property::dissipative ? upper * upper : upper;

  const bool cone = report.cone && is_cone_supported(h);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    ScaleTimeSignal u = random_input(h.arity(), h.length() + 8, cone, rng);
    double gain = 0;
    switch (report.property) {
      case Property::bibo: {
        u = u.scaled(1.0 / norm(u, NormKind::sup_l2));
        gain = norm(double_convolve(h, u), NormKind::sup_l2);
        break;
      }
      case Property::dissipative: {
        u = u.scaled(1.0 / std::sqrt(norm(u, NormKind::energy)));
        gain = norm(double_convolve(h, u), NormKind::energy);
        break;
      }
      case Property::l1_l2: {
        u = u.scaled(1.0 / norm(u, NormKind::l1_l2));
        gain = std::sqrt(norm(double_convolve(h, u), NormKind::energy));
        break;
      }
    }
    vr.max_gain = std::max(vr.max_gain, gain);
  }
  if (vr.bound > 0) {
    vr.max_ratio = vr.max_gain / vr.bound;
  } else {
    vr.max_ratio = vr.max_gain > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  vr.within_bound = vr.max_ratio <= 1.0 + kGainSlack;

  if (report.property == Property::bibo && report.bibo_witness && report.necessary_lower) {
    const auto& w = *report.bibo_witness;
    if (w.v.norm() > 0) {
      const auto u = adversarial_input(h, w.n, w.v, report.cone);
      const auto y = double_convolve(h, u);
      const double got = w.n < y.length() ? inner(y[w.n], w.v).real() : 0.0;
      vr.replay = ReplayResult{"adversarial", got, *report.necessary_lower,
                               got >= *report.necessary_lower - kReplaySlack};
    }
  } else if (report.property == Property::dissipative && report.resonant) {
    const auto& w = *report.resonant;
    const double ratio = energy_ratio(h, resonant_input(w.point, w.time_len, w.box));
    vr.replay = ReplayResult{"resonant", ratio, 1.0, ratio > 1.0};
  } else if (report.property == Property::l1_l2 && report.necessary_lower) {
    ScaleTimeSignal u(h.arity(), 1);
    u[0] = ScaleSignal::delta(GroupIndex::zero(h.arity()));
    const double got = std::sqrt(norm(double_convolve(h, u), NormKind::energy));
    const double target = *report.necessary_lower;
    vr.replay = ReplayResult{"impulse", got, target,
                             std::abs(got - target) <= 1e-10 * std::max(1.0, target)};
  }

  const bool replay_ok = !vr.replay || vr.replay->reached;
  switch (report.verdict) {
    case Verdict::pass: vr.ok = vr.within_bound && replay_ok; break;
    case Verdict::fail: vr.ok = vr.replay.has_value() && vr.replay->reached; break;
    case Verdict::inconclusive: vr.ok = vr.within_bound; break;
  }
  return vr;
}

}  // namespace scalekit
