#include "scalekit/moments.hpp"

#include <Eigen/Dense>

#include <numbers>

namespace scalekit {

namespace {

void check_sequence(const MomentSequence& ms) {
  if (ms.t.empty()) throw DomainError("moment sequence is empty");
  for (Complex v : ms.t) {
    if (!is_finite(v)) throw DomainError("moment sequence has a non-finite entry");
  }
  const Complex t0 = ms.t.front();
  if (std::abs(t0.imag()) > 1e-12 * std::max(1.0, std::abs(t0))) {
    throw DomainError("t_0 must be real");
  }
}

}  // namespace

PsdReport toeplitz_psd_check(const MomentSequence& ms, double tol) {
  check_sequence(ms);
  const double t0 = ms.t.front().real();
  if (t0 < 0) return PsdReport{false, t0, 0};

  const auto n = static_cast<Eigen::Index>(ms.t.size());
  Eigen::MatrixXcd tm(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = ms.t[static_cast<std::size_t>(std::abs(i - j))];
      tm(i, j) = i >= j ? v : std::conj(v);
    }
    tm(i, i) = t0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(tm, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  return PsdReport{min_eig >= -tol, min_eig, ms.t.size()};
}

HerglotzValue herglotz_eval(const MomentSequence& ms, Complex z) {
  check_sequence(ms);
  if (!is_finite(z) || std::abs(z) >= 1.0) throw DomainError("Herglotz evaluation requires |z| < 1");
  Complex acc = 0;
  for (std::size_t n = ms.t.size(); n-- > 1;) acc = (acc + ms.t[n]) * z;
  return HerglotzValue{ms.t.front().real() + 2.0 * acc, ms.degree()};
}

IntervalMass stieltjes_invert(const MomentSequence& ms, double a, double b, double r,
                              std::size_t quad_points) {
  check_sequence(ms);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (!(a < b)) throw DomainError("Stieltjes interval needs a < b");
  if (a < -two_pi || b > two_pi || b - a > two_pi * (1.0 + 1e-15)) {
    throw DomainError("Stieltjes interval must lie within one turn of [-2pi, 2pi]");
  }
  if (!(r > 0.0 && r < 1.0)) throw DomainError("Stieltjes radius must lie in (0, 1)");
  if (quad_points < 16) throw DomainError("Stieltjes quadrature needs at least 16 points");

  const std::size_t nodes = quad_points % 2 == 1 ? quad_points : quad_points + 1;
  const double h = (b - a) / static_cast<double>(nodes - 1);
  std::vector<double> re_phi(nodes);
  const long count = static_cast<long>(nodes);
#pragma omp parallel for schedule(static)
  for (long j = 0; j < count; ++j) {
    const double theta = a + h * static_cast<double>(j);
    re_phi[static_cast<std::size_t>(j)] = herglotz_eval(ms, std::polar(r, theta)).value.real();
  }

  double sum = re_phi.front() + re_phi.back();
  for (std::size_t j = 1; j + 1 < nodes; ++j) sum += (j % 2 == 1 ? 4.0 : 2.0) * re_phi[j];
  const double mass = sum * h / 3.0 / two_pi;
  const double uncertainty = h / two_pi * (std::abs(re_phi.front()) + std::abs(re_phi.back()));
  return IntervalMass{mass, uncertainty};
}

}  // namespace scalekit
