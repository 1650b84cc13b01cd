#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scalekit/signal.hpp"

namespace scalekit {

inline constexpr std::size_t kDefaultMaxGrid = std::size_t{1} << 24;

/// Point-evaluation budget for torus sup certification: SCALEKIT_MAX_GRID
/// when set to a positive integer, else 2^24.
std::size_t default_grid_budget();

struct CertifyOptions {
  double tol = 1e-9;
  std::size_t max_points = default_grid_budget();
};

/// lower <= sup <= upper. `certified` means upper <= lower * (1 + tol);
/// an uncertified bracket is still sound, just loose.
struct OperatorNormBracket {
  double lower = 0.0;
  double upper = 0.0;
  bool certified = true;
  std::vector<double> argmax_theta;  // where lower was attained
};

/// Norm of u -> h * u on l2(Z^p), i.e. sup over the torus of |h_hat|.
/// With cone = true, h must be cone-supported (the polydisc sup equals the
/// torus sup by the maximum principle).
OperatorNormBracket mult_operator_norm(const ScaleSignal& h, bool cone,
                                       const CertifyOptions& opt = {});

enum class Property { bibo, dissipative, l1_l2 };
enum class Verdict { pass, fail, inconclusive };

std::string to_string(Property p);
std::string to_string(Verdict v);

struct BiboWitness {
  std::size_t n = 0;     // output time at which <y_n, v> is evaluated
  ScaleSignal v;         // unit vector
  double value = 0.0;    // sum_m |P M*_{h_{n-m}} v|, reached by adversarial_input
  std::string origin;    // which start of the search produced v
};

struct GramCheck {
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  double radius = 0.95;
  double min_eigenvalue = 0.0;
  bool psd = false;
};

/// Input u_m(k) = conj(zeta_0)^m conj(zeta)^k on a time x scale box: away
/// from the box edges the system multiplies it by H(zeta).
struct ResonantWitness {
  std::vector<Complex> point;  // (z, z_1, ..., z_p) on the torus
  Complex value;               // H at `point`
  std::size_t time_len = 0;
  IndexBox box;
  double energy_ratio = 0.0;   // energy(y) / energy(u) for that input
};

struct StabilityReport {
  Property property = Property::bibo;
  Verdict verdict = Verdict::inconclusive;
  bool certified = true;
  bool cone = false;
  double tol = 1e-9;
  std::optional<double> sufficient_upper;
  std::optional<double> necessary_lower;

  // bibo
  std::vector<OperatorNormBracket> slice_norms;
  std::optional<double> symbol_lower;  // max over a grid of sum_n |h_n_hat|
  std::optional<BiboWitness> bibo_witness;

  // dissipative
  std::optional<double> sup_lower;
  std::vector<double> argmax_theta;    // torus angles of the certified sup
  std::vector<int> grid_sizes;
  std::optional<GramCheck> gram;
  std::optional<ResonantWitness> resonant;

  // l1_l2
  std::optional<double> h2_norm;
};

/// Bracket for the BIBO gain sup |y_n| / sup |u_m|.
/// sufficient_upper = sum_n |M_{h_n}|; necessary_lower = best value of
/// sum_n |P M*_{h_n} v| over unit v found by a start bank (impulse and
/// windowed characters) followed by projected ascent, with P the orthant
/// projection in cone mode and the identity otherwise.
StabilityReport bibo_analysis(const ScaleTimeSignal& h, bool cone,
                              const CertifyOptions& opt = {});

/// u_m = P M*_{h_{n-m}} v / |P M*_{h_{n-m}} v| for m = 0..n (zero slices where
/// the image vanishes), so that <y_n, v> = sum_m |P M*_{h_{n-m}} v|.
ScaleTimeSignal adversarial_input(const ScaleTimeSignal& h, std::size_t n, const ScaleSignal& v,
                                  bool cone = false);

/// Contractivity of H(z, z_1..z_p) = sum_n z^n sum_k h_n(k) z^k on the
/// closed polydisc, through its certified sup over the (p+1)-torus (time is
/// axis 0 of argmax_theta). pass when upper <= 1 + tol, fail when
/// lower > 1 + tol (with a resonant input), otherwise inconclusive.
/// For cone-supported h the kernel
///   (1 - H(x) conj(H(y))) prod_l 1 / (1 - x_l conj(y_l))
/// is sampled on `sample_count` seeded points of the polydisc of radius
/// 0.95 and its Gram matrix's smallest eigenvalue reported.
/// The first FFT sweep grid is reported in grid_sizes.
StabilityReport dissipativity_check(const ScaleTimeSignal& h, std::size_t sample_count,
                                    std::uint64_t seed, const CertifyOptions& opt = {});

/// Gain sqrt(energy(y)) / l1_l2(u). The true gain is
/// sup_theta sqrt(sum_n |h_n_hat(theta)|^2): sufficient_upper is its
/// certified upper end. necessary_lower is |h|_2 = sqrt(sum |h_n(k)|^2),
/// which the unit impulse attains exactly.
StabilityReport l1l2_gain(const ScaleTimeSignal& h, const CertifyOptions& opt = {});

/// The input described by a ResonantWitness.
ScaleTimeSignal resonant_input(const std::vector<Complex>& point, std::size_t time_len,
                               const IndexBox& box);

struct ReplayResult {
  std::string kind;      // "adversarial", "resonant" or "impulse"
  double observed = 0.0;
  double target = 0.0;   // the report quantity the replay must reach
  bool reached = false;
};

struct VerifyReport {
  Property property = Property::bibo;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double bound = 0.0;      // gain bound the trials are compared against
  double max_gain = 0.0;   // largest observed gain
  double max_ratio = 0.0;  // max_gain / bound (0 when bound is 0 and gains are 0)
  bool within_bound = true;
  std::optional<ReplayResult> replay;
  /// Pass verdicts: every trial within bound (1e-9 slack) and the replay
  /// reached. Fail verdicts: the replay reached.
  bool ok = true;
};

/// Monte-Carlo check of a report: seeded complex Gaussian inputs on fixed
/// supports (T_h + 8 time steps, scale box [0,4]^p in cone mode, [-2,2]^p
/// otherwise), normalized in the property's input norm, run through
/// double_convolve. Also replays the report's witness.
VerifyReport empirical_verify(const ScaleTimeSignal& h, const StabilityReport& report,
                              std::size_t trials, std::uint64_t seed);

}  // namespace scalekit
