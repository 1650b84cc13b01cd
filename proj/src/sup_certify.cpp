#include "sup_certify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>

#include "torus_fft.hpp"

namespace scalekit::detail {

namespace {

struct Cell {
  std::vector<double> center;
  int level = 0;
  double bound = 0.0;  // upper bound for g over the cell
};

struct CellOrder {
  bool operator()(const Cell& x, const Cell& y) const { return x.bound < y.bound; }
};

// Constants of the cell bound at level 0; level L divides Q by 9^L and the
// Lipschitz term by 3^L.
struct BoundConstants {
  std::vector<double> delta0;
  double q0 = 0.0;
  double lip0 = 0.0;
};

BoundConstants bound_constants(const TrigSystem& sys, const std::vector<int>& grid) {
  BoundConstants bc;
  bc.delta0.resize(sys.dims);
  for (std::size_t i = 0; i < sys.dims; ++i) bc.delta0[i] = std::numbers::pi / grid[i];

  auto weighted = [&](const std::vector<int>& m) {
    double s = 0;
    for (std::size_t i = 0; i < sys.dims; ++i) s += std::abs(m[i]) * bc.delta0[i];
    return s;
  };

  std::vector<double> lip(sys.channels, 0.0);
  for (const auto& t : sys.terms) lip[t.channel] += std::abs(t.a) * weighted(t.k);
  for (double l : lip) bc.lip0 += l * l;
  bc.lip0 = std::sqrt(bc.lip0);

  std::vector<std::vector<const TrigTerm*>> by_channel(sys.channels);
  for (const auto& t : sys.terms) by_channel[t.channel].push_back(&t);
  std::map<std::vector<int>, Complex> autocorr;
  std::vector<int> m(sys.dims);
  for (const auto& ch : by_channel) {
    for (const TrigTerm* x : ch) {
      for (const TrigTerm* y : ch) {
        for (std::size_t i = 0; i < sys.dims; ++i) m[i] = x->k[i] - y->k[i];
        autocorr[m] += x->a * std::conj(y->a);
      }
    }
  }
  for (const auto& [mm, v] : autocorr) {
    const double w = weighted(mm);
    bc.q0 += std::abs(v) * w * w;
  }
  return bc;
}

struct PointValue {
  double g = 0.0;
  std::vector<double> grad;
};

PointValue evaluate(const TrigSystem& sys, const std::vector<double>& theta) {
  std::vector<Complex> f(sys.channels, 0.0);
  std::vector<Complex> df(sys.channels * sys.dims, 0.0);
  for (const auto& t : sys.terms) {
    double phase = 0;
    for (std::size_t i = 0; i < sys.dims; ++i) phase += t.k[i] * theta[i];
    const Complex e = t.a * std::polar(1.0, -phase);
    f[t.channel] += e;
    for (std::size_t i = 0; i < sys.dims; ++i) {
      df[t.channel * sys.dims + i] += Complex(0.0, -static_cast<double>(t.k[i])) * e;
    }
  }
  PointValue pv;
  pv.grad.assign(sys.dims, 0.0);
  for (std::size_t c = 0; c < sys.channels; ++c) {
    pv.g += std::norm(f[c]);
    for (std::size_t i = 0; i < sys.dims; ++i) {
      pv.grad[i] += 2.0 * (std::conj(f[c]) * df[c * sys.dims + i]).real();
    }
  }
  return pv;
}

double cell_bound(const PointValue& pv, const BoundConstants& bc, int level) {
  const double shrink = std::pow(3.0, -level);
  double lin = 0;
  for (std::size_t i = 0; i < pv.grad.size(); ++i) lin += std::abs(pv.grad[i]) * bc.delta0[i] * shrink;
  const double second = pv.g + lin + 0.5 * bc.q0 * shrink * shrink;
  const double first = std::pow(std::sqrt(pv.g) + bc.lip0 * shrink, 2);
  return std::min(first, second);
}

std::vector<int> initial_grid(const TrigSystem& sys, std::size_t budget) {
  std::vector<int> lo(sys.dims, 0), hi(sys.dims, 0);
  bool first = true;
  for (const auto& t : sys.terms) {
    for (std::size_t i = 0; i < sys.dims; ++i) {
      lo[i] = first ? t.k[i] : std::min(lo[i], t.k[i]);
      hi[i] = first ? t.k[i] : std::max(hi[i], t.k[i]);
    }
    first = false;
  }
  std::vector<int> grid(sys.dims);
  for (std::size_t i = 0; i < sys.dims; ++i) {
    int g = 4;
    while (g < 2 * (hi[i] - lo[i] + 1)) g *= 2;
    grid[i] = g;
  }
  // Keep the sweep to at most a quarter of the budget.
  auto volume = [&] {
    std::size_t v = 1;
    for (int g : grid) v *= static_cast<std::size_t>(g);
    return v;
  };
  while (volume() > std::max<std::size_t>(budget / 4, 1)) {
    auto it = std::max_element(grid.begin(), grid.end());
    if (*it == 1) break;
    *it /= 2;
  }
  return grid;
}

}  // namespace

double trig_energy(const TrigSystem& sys, const std::vector<double>& theta) {
  return evaluate(sys, theta).g;
}

SupCertificate certify_sup(const TrigSystem& sys, double tol, std::size_t budget) {
  if (!(tol > 0)) throw DomainError("certification tolerance must be positive");
  SupCertificate cert;
  cert.argmax.assign(sys.dims, 0.0);
  if (sys.terms.empty()) {
    cert.initial_grid.assign(sys.dims, 1);
    return cert;
  }

  const std::vector<int> grid = initial_grid(sys, budget);
  cert.initial_grid = grid;
  const BoundConstants bc = bound_constants(sys, grid);

  // First sweep: values and gradients of every channel on the grid by FFT.
  const TorusFft fft(grid, FftDirection::forward);
  const std::size_t size = fft.size();
  std::vector<double> g(size, 0.0);
  std::vector<std::vector<double>> grad(sys.dims, std::vector<double>(size, 0.0));
  std::vector<std::vector<const TrigTerm*>> by_channel(sys.channels);
  for (const auto& t : sys.terms) by_channel[t.channel].push_back(&t);
  std::vector<Complex> f(size), df(size);
  for (const auto& ch : by_channel) {
    if (ch.empty()) continue;
    std::fill(f.begin(), f.end(), Complex(0.0));
    for (const TrigTerm* t : ch) f[wrapped_offset(t->k, grid)] += t->a;
    fft.execute_inplace(f);
    for (std::size_t j = 0; j < size; ++j) g[j] += std::norm(f[j]);
    for (std::size_t i = 0; i < sys.dims; ++i) {
      std::fill(df.begin(), df.end(), Complex(0.0));
      for (const TrigTerm* t : ch) {
        df[wrapped_offset(t->k, grid)] += Complex(0.0, -static_cast<double>(t->k[i])) * t->a;
      }
      fft.execute_inplace(df);
      for (std::size_t j = 0; j < size; ++j) grad[i][j] += 2.0 * (std::conj(f[j]) * df[j]).real();
    }
  }
  cert.evaluations = size;

  auto angles_of = [&](std::size_t off) {
    std::vector<double> th(sys.dims);
    for (std::size_t i = sys.dims; i-- > 0;) {
      const auto gi = static_cast<std::size_t>(grid[i]);
      th[i] = 2.0 * std::numbers::pi * static_cast<double>(off % gi) / grid[i];
      off /= gi;
    }
    return th;
  };

  std::size_t best = 0;
  for (std::size_t j = 1; j < size; ++j) {
    if (g[j] > g[best]) best = j;
  }
  double lower_g = g[best];
  cert.argmax = angles_of(best);
  auto threshold = [&] { return lower_g * (1.0 + tol) * (1.0 + tol); };

  std::priority_queue<Cell, std::vector<Cell>, CellOrder> active;
  double dropped = lower_g;
  PointValue pv;
  pv.grad.resize(sys.dims);
  for (std::size_t j = 0; j < size; ++j) {
    pv.g = g[j];
    for (std::size_t i = 0; i < sys.dims; ++i) pv.grad[i] = grad[i][j];
    const double b = cell_bound(pv, bc, 0);
    if (b <= threshold()) {
      dropped = std::max(dropped, b);
    } else {
      active.push(Cell{angles_of(j), 0, b});
    }
  }

  const std::size_t children = static_cast<std::size_t>(std::pow(3.0, static_cast<double>(sys.dims)));
  while (!active.empty() && active.top().bound > threshold()) {
    if (cert.evaluations + children > budget) {
      cert.certified = false;
      break;
    }
    const Cell cell = active.top();
    active.pop();
    const double shrink = std::pow(3.0, -(cell.level + 1));
    std::vector<std::vector<double>> pts(children, std::vector<double>(sys.dims));
    for (std::size_t idx = 0; idx < children; ++idx) {
      std::size_t rest = idx;
      for (std::size_t i = 0; i < sys.dims; ++i) {
        const int step = static_cast<int>(rest % 3) - 1;
        rest /= 3;
        pts[idx][i] = cell.center[i] + 2.0 * step * bc.delta0[i] * shrink;
      }
    }
    std::vector<PointValue> vals(children);
    const long count = static_cast<long>(children);
#pragma omp parallel for schedule(static)
    for (long idx = 0; idx < count; ++idx) {
      vals[static_cast<std::size_t>(idx)] = evaluate(sys, pts[static_cast<std::size_t>(idx)]);
    }
    cert.evaluations += children;
    // merge in index order so the result does not depend on thread count
    for (std::size_t idx = 0; idx < children; ++idx) {
      if (vals[idx].g > lower_g) {
        lower_g = vals[idx].g;
        cert.argmax = pts[idx];
      }
      const double b = cell_bound(vals[idx], bc, cell.level + 1);
      if (b <= threshold()) {
        dropped = std::max(dropped, b);
      } else {
        active.push(Cell{std::move(pts[idx]), cell.level + 1, b});
      }
    }
  }

  double upper_g = std::max(dropped, lower_g);
  if (!active.empty()) upper_g = std::max(upper_g, active.top().bound);
  cert.lower = std::sqrt(lower_g);
  cert.upper = std::sqrt(upper_g);
  if (cert.certified) cert.certified = cert.upper <= cert.lower * (1.0 + tol);
  return cert;
}

}  // namespace scalekit::detail
