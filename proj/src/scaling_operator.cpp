#include "scalekit/scaling_operator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace scalekit {

double CoeffSeq::norm() const {
  double s = 0;
  for (Complex c : coeffs) s += std::norm(c);
  return std::sqrt(s);
}

namespace {

// Bound on the l2 norm of coefficients n >= N of g(z) = f(m(z))/(c z + d),
// from |g_n| <= max_{|z|=rho} |g| * rho^{-n}. The image of |z| = rho under m
// is a circle with the closed-form center and radius below.
struct CauchyTail {
  const SuMatrix& m;
  std::span<const double> f_abs;

  // log of max_{|z|=rho} |g(z)|, or +inf when rho is outside the safe range.
  double log_sup(double rho) const {
    const double ac = std::abs(m.c());
    const double ad = std::abs(m.d());
    const double den_min = ad - ac * rho;
    if (!(den_min > 0)) return std::numeric_limits<double>::infinity();
    const double q = ad * ad - ac * ac * rho * rho;
    const Complex center = (m.b() * std::conj(m.d()) - m.a() * std::conj(m.c()) * rho * rho) / q;
    const double radius = rho / q;
    const double r = std::abs(center) + radius;
    // sum |f_n| r^n evaluated in log space
    double log_acc = -std::numeric_limits<double>::infinity();
    const double log_r = std::log(r);
    for (std::size_t n = 0; n < f_abs.size(); ++n) {
      if (f_abs[n] == 0) continue;
      const double t = std::log(f_abs[n]) + static_cast<double>(n) * log_r;
      const double hi = std::max(log_acc, t);
      log_acc = hi + std::log(std::exp(log_acc - hi) + std::exp(t - hi));
    }
    return log_acc - std::log(den_min);
  }

  double log_bound(double rho, double length) const {
    return log_sup(rho) - length * std::log(rho) - 0.5 * std::log1p(-1.0 / (rho * rho));
  }
};

std::vector<double> radius_candidates(double pole_radius) {
  std::vector<double> out;
  constexpr int kCount = 400;
  const double span = std::isfinite(pole_radius) ? pole_radius - 1.0 : 1e6;
  for (int j = 0; j < kCount; ++j) {
    // geometric spread of t in [1e-6, 0.999]
    const double t = 1e-6 * std::pow(0.999 / 1e-6, static_cast<double>(j) / (kCount - 1));
    out.push_back(1.0 + span * t);
  }
  return out;
}

}  // namespace

CoeffSeq transform_coeffs(const SuMatrix& m, const CoeffSeq& f, double tol,
                          const TransformOptions& options) {
  if (!(tol > 0)) throw DomainError("transform tolerance must be positive");
  for (Complex v : f.coeffs) {
    if (!is_finite(v)) throw DomainError("coefficient sequence must be finite");
  }

  std::size_t degree_plus_one = f.coeffs.size();
  while (degree_plus_one > 0 && f.coeffs[degree_plus_one - 1] == Complex(0.0)) {
    --degree_plus_one;
  }
  if (degree_plus_one == 0) return CoeffSeq{{}, f.tail_bound};

  const Complex a = m.a(), b = m.b(), c = m.c(), d = m.d();

  if (c == Complex(0.0)) {
    // |a| = 1 and m(z) = (a/d) z: exact diagonal action.
    CoeffSeq out;
    out.coeffs.resize(degree_plus_one);
    const Complex rot = a / d;
    Complex pw = 1.0 / d;
    for (std::size_t n = 0; n < degree_plus_one; ++n) {
      out.coeffs[n] = pw * f.coeffs[n];
      pw *= rot;
    }
    out.tail_bound = f.tail_bound;
    return out;
  }

  std::vector<double> f_abs(degree_plus_one);
  for (std::size_t n = 0; n < degree_plus_one; ++n) f_abs[n] = std::abs(f.coeffs[n]);
  const CauchyTail tail{m, f_abs};
  const double pole_radius = std::abs(d) / std::abs(c);
  const auto radii = radius_candidates(pole_radius);

  const double log_tol = std::log(tol);
  double best_len = std::numeric_limits<double>::infinity();
  for (double rho : radii) {
    const double base = tail.log_bound(rho, 0.0);
    if (!std::isfinite(base)) continue;
    best_len = std::min(best_len, std::max(1.0, std::ceil((base - log_tol) / std::log(rho))));
  }
  const auto max_len = static_cast<double>(options.max_length);
  if (!(best_len <= max_len)) {
    double achieved = std::numeric_limits<double>::infinity();
    for (double rho : radii) achieved = std::min(achieved, std::exp(tail.log_bound(rho, max_len)));
    throw ConvergenceError("truncation not converged: tail bound " + std::to_string(achieved) +
                               " at max length " + std::to_string(options.max_length),
                           achieved);
  }
  const auto length = static_cast<std::size_t>(best_len);

  // Horner: g <- f_n + m(z) g, with m(z) g = (a z + b) g / (c z + d).
  std::vector<Complex> g(length, Complex(0.0));
  g[0] = f.coeffs[degree_plus_one - 1];
  for (std::size_t step = degree_plus_one - 1; step-- > 0;) {
    Complex prev_g = 0.0, prev_s = 0.0;
    for (std::size_t j = 0; j < length; ++j) {
      const Complex gj = g[j];
      const Complex s = (a * prev_g + b * gj - c * prev_s) / d;
      g[j] = s;
      prev_g = gj;
      prev_s = s;
    }
    g[0] += f.coeffs[step];
  }
  Complex prev_s = 0.0;
  for (std::size_t j = 0; j < length; ++j) {
    g[j] = (g[j] - c * prev_s) / d;
    prev_s = g[j];
  }

  double bound = std::numeric_limits<double>::infinity();
  for (double rho : radii) bound = std::min(bound, std::exp(tail.log_bound(rho, best_len)));

  // Safety estimate from the last computed coefficients, extrapolated with the
  // pole ratio inflated by the (n + 1)^degree growth of a pole of that order.
  const double growth = std::exp(static_cast<double>(degree_plus_one) / best_len) / pole_radius;
  if (growth < 1.0) {
    const std::size_t first = length > 8 ? length - 8 : 0;
    double est = 0;
    for (std::size_t j = first; j < length; ++j) {
      est = std::max(est, std::abs(g[j]) * std::pow(growth, static_cast<double>(length - j)));
    }
    bound = std::max(bound, est / std::sqrt(1.0 - growth * growth));
  }

  return CoeffSeq{std::move(g), bound + f.tail_bound};
}

std::vector<CoeffSeq> scale_transform_columns(const ScaleGroup& g, const CoeffSeq& x,
                                              std::span<const GroupIndex> scale_window,
                                              double tol, const TransformOptions& options) {
  if (scale_window.empty()) throw DomainError("scale window must be nonempty");
  const auto count = static_cast<long>(scale_window.size());
  std::vector<CoeffSeq> columns(scale_window.size());
  std::vector<std::exception_ptr> errors(scale_window.size());

#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      columns[i] = transform_coeffs(element_at(g, scale_window[i]), x, tol, options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where = "scale index " + to_string(scale_window[i]) + ": ";
    try {
      std::rethrow_exception(errors[i]);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError(where + e.what(), e.achieved());
    } catch (const DomainError& e) {
      throw DomainError(where + e.what());
    }
  }
  return columns;
}

ScaleTimeSignal scale_transform(const ScaleGroup& g, const CoeffSeq& x,
                                std::span<const GroupIndex> scale_window,
                                std::size_t time_len, double tol,
                                const TransformOptions& options) {
  if (time_len == 0) throw DomainError("time length must be at least 1");
  const auto columns = scale_transform_columns(g, x, scale_window, tol, options);
  ScaleTimeSignal out(g.arity(), time_len);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const auto& col = columns[i].coeffs;
    for (std::size_t n = 0; n < std::min(time_len, col.size()); ++n) {
      out[n].set(scale_window[i], col[n]);
    }
  }
  return out;
}

}  // namespace scalekit
