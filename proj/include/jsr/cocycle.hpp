#pragma once

// Numerical realization of the invariant splitting V (+) W of a bounded
// cocycle on periodic orbits of the shift, the cone estimates built on top of
// the splitting, and lower-bound certificates from periodic products.
//
// Conventions: x is a PeriodicWord, A(x, n) = A(x_{n-1}) ... A(x_0), T is the
// left shift, and T^{-n} x is a rotation of the cycle.

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "jsr/linalg.hpp"
#include "jsr/matrix_set.hpp"
#include "jsr/norm.hpp"

namespace jsr {

// |slope| below this (per symbol) counts as a zero exponent; between 1x and 2x
// the classification is ambiguous.
inline constexpr double kExponentThreshold = 0.02 * std::numbers::ln2;

struct ExponentEstimate {
  std::size_t p = 0;           // number of zero exponents
  std::vector<double> theta;   // theta[l-1]: growth rate of sum_{i<=l} log sigma_i(A(x, n))
};

// theta_l is the least-squares slope of sum_{i<=l} log sigma_i(A(x, n)) against
// n over n = r, 2r, ... <= horizon, discarding the first quarter of the
// horizon as transient. Requires horizon >= 4r. Throws AmbiguityError naming l
// when some |theta_l| falls in [threshold, 2 threshold), NormalizationError
// when theta_1 is clearly positive.
ExponentEstimate detect_p(const MatrixSet& set, const PeriodicWord& x, std::size_t horizon);

struct SplittingResult {
  std::size_t p = 0;
  std::size_t horizon = 0;
  Subspace v_space;   // A(T^{-n}x, n) applied to the top-p right singular space of A(T^{-n}x, 2n)
  Subspace w_space;   // bottom (d - p) right singular space of A(x, n)
  ProjectionPair projection;
  double principal_angle = 0.0;  // smallest angle between v_space and w_space
};

// Throws DegenerateSplittingError if the push-forward loses rank or the two
// spaces meet at an angle below 1e-8.
SplittingResult finite_splitting(const MatrixSet& set, const PeriodicWord& x, std::size_t p, std::size_t n);

// The splitting at every phase T^k x, k = 0..r-1.
std::vector<SplittingResult> splitting_family(const MatrixSet& set, const PeriodicWord& x, std::size_t p,
                                              std::size_t n);

struct LogLinearFit {
  std::optional<double> rate;      // exp(slope): the per-step factor xi
  std::optional<double> constant;  // smallest C with value_n <= C rate^n on every sample
  std::optional<double> r_squared;
  bool exact = false;              // every value below the roundoff floor
};

// Fits log(values[i]) against steps[i], ignoring values <= floor.
LogLinearFit fit_exponential(const std::vector<double>& steps, const std::vector<double>& values,
                             double floor = 1e-11);

struct SplittingDiagnostics {
  // max_k d_Gr(A(T^k x) V_n(T^k x), V_{n+1}(T^{k+1} x)): one application of
  // A maps the horizon-n space to the horizon-(n+1) space of the next phase.
  double invariance_residual = 0.0;
  // Same with both sides at horizon n; bounded by the distance of V_n from its limit.
  double fixed_horizon_invariance = 0.0;
  // max_k ||A(T^k x) P(T^k x) - P(T^{k+1} x) A(T^k x)|| over one period.
  double commutation_residual = 0.0;
  // min over n <= n_max and unit v in V of ||A(x, n) v||.
  double delta_hat = 0.0;
  // min over phases and n <= n_max of sigma_p(A(T^k x, n)).
  double delta0_hat = 0.0;
  // max over unit w in W of ||A(x, n) w||, n = 1..n_max, and its fit.
  std::vector<double> contraction;
  LogLinearFit contraction_fit;
  // d_Gr(V_m, V_{m+r}) for m = 1..n_max, and its fit.
  std::vector<double> cauchy;
  LogLinearFit cauchy_fit;
};

SplittingDiagnostics splitting_residuals(const MatrixSet& set, const PeriodicWord& x,
                                         const SplittingResult& result, std::size_t n_max);

// Cone c(x, theta) = {v : theta |||P v||| >= |||Q v|||}, Q = I - P, with one
// projection per orbit position.
struct ConeParams {
  double theta = 0.0;
  std::vector<ProjectionPair> projections;  // index: position mod period
  NormSpec norm;
};

struct ConeMembership {
  bool member = false;
  double margin = 0.0;  // theta |||P v||| - |||Q v|||
};

ConeMembership cone_contains(const ConeParams& params, std::size_t position, const ComplexVector& v);

struct ConeCounterexample {
  ComplexVector vector;
  std::size_t position = 0;
  std::size_t block = 0;
  double slack = 0.0;
  bool membership = true;  // false: the norm lower bound failed
};

struct ConePropagationReport {
  bool passed = true;
  // Fitted constants (K1 is reported after the 10% inflation).
  double xi_hat = 0.0;
  double c_hat = 0.0;
  double q_norm = 0.0;
  double k1 = 0.0;
  double aperture_factor = 0.0;   // K1 xi^N
  double worst_membership_slack = 0.0;
  double worst_norm_slack = 0.0;
  double max_aperture_ratio = 0.0;  // observed (|||Qv|||/|||Pv|||) after a block / aperture before
  std::size_t checks = 0;
  std::optional<ConeCounterexample> counterexample;
};

// Pushes cone vectors (boundary and interior, every block-start phase)
// through consecutive N-step blocks for `laps` full returns of the block
// phase, checking after each block
//   A(x, N) v in c(T^N x, K1 xi^N theta)  and  |||A(x, N) v||| >= (1 - theta - K1 xi^N theta) |||v|||
// with xi, C fitted from the contraction on W and K1 = 1.1 * 2 C max|||Q|||.
// Throws std::invalid_argument when K1 xi^N >= 1 (N too short) or when the
// projection family does not match the period.
ConePropagationReport cone_propagation_check(const MatrixSet& set, const PeriodicWord& x,
                                             const ConeParams& params, std::size_t block, std::size_t laps);

struct ContainmentReport {
  double projection_distance = 0.0;  // |||P(x) - P(y)|||
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;         // min over samples of 3 theta |||P(y)v||| - |||Q(y)v|||
};

// Samples vectors of c(x, theta) and checks membership in c(y, 3 theta).
// Requires |||P(x) - P(y)||| <= theta < 1/5 (std::invalid_argument otherwise).
ContainmentReport cone_containment_check(const ProjectionPair& px, const ProjectionPair& py,
                                         const NormSpec& norm, double theta, std::size_t samples,
                                         std::uint64_t seed);

struct LowerBoundCertificate {
  Word word;
  double value = 0.0;                 // rho(A_w)^{1/|w|}
  bool vacuous = false;               // A_w nilpotent
  std::vector<double> gelfand_trace;  // ||A_w^k||^{1/(k|w|)}, k = 1..8
  bool gelfand_monotone = true;       // |trace_k - value| non-increasing in k
};

// Throws std::invalid_argument on an empty word.
LowerBoundCertificate certify_lower(const MatrixSet& set, const Word& w);

}  // namespace jsr
