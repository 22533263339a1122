#pragma once

// Diagnostics for approximate extremal norms: how far a norm is from being
// extremal, whether a set looks product bounded, and finite-depth membership
// tests for the extremal set Y = {x : |||A(x,n)||| = 1 for all n}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jsr/matrix_set.hpp"
#include "jsr/norm.hpp"

namespace jsr {

struct ExtremalityResidual {
  double residual = 0.0;    // max (|||A v||| / |||v||| - rho_hat) / rho_hat, clipped at 0
  std::size_t samples = 0;  // number of vectors actually tested
};

// Samples `samples` seeded unit vectors plus every singular vector of every
// A in the set. rho_hat comes from the NormSpec for adapted norms; for the
// Euclidean norm it is `euclidean_rho_hat`.
ExtremalityResidual extremality_residual(const MatrixSet& set, const NormSpec& spec,
                                         std::size_t samples = 4096, double euclidean_rho_hat = 1.0);

enum class Boundedness { bounded_up_to_depth, growth_detected, inconclusive };

struct BoundednessReport {
  Boundedness verdict = Boundedness::inconclusive;
  std::vector<double> level_max;  // max_{|w|=k} ||A_w|| for k = 1..depth
};

// growth_detected iff some word norm exceeds bound_guess and the level maxima
// strictly increase over the last third of the levels; bounded_up_to_depth iff
// every level maximum stays <= bound_guess. A blown budget is inconclusive.
BoundednessReport is_product_bounded(const MatrixSet& set, std::size_t depth, double bound_guess,
                                     std::uint64_t budget = kDefaultMultiplicationBudget);

// consistent: every value within tol of 1. rejected: some value < 1 - tol.
// norm_not_extremal: no rejection, but some value > 1 + tol.
enum class YVerdict { consistent, rejected, norm_not_extremal };

struct YMembershipReport {
  Word word;                    // x_0 .. x_{depth-1}
  std::size_t depth = 0;
  std::vector<double> values;   // |||A(x,n)||| for n = 1..depth
  std::vector<double> margins;  // 1 - values[n-1]
  YVerdict verdict = YVerdict::consistent;
  std::optional<std::size_t> rejected_at;  // first n with value < 1 - tol
  std::vector<std::size_t> above_one;      // n with value > 1 + tol: the norm is not extremal there
  double coarse_lower = 0.0;               // normalization check interval
  double coarse_upper = 0.0;
};

inline constexpr double kYMembershipTolerance = 1e-6;

// The set must be scaled so that its joint spectral radius is about 1: a coarse
// Euclidean sandwich whose interval misses [0.8, 1.2] raises NormalizationError.
YMembershipReport y_membership(const MatrixSet& set, const NormSpec& spec, const PeriodicWord& x,
                               std::size_t depth, double tol = kYMembershipTolerance);

}  // namespace jsr
