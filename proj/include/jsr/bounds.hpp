#pragma once

// Exhaustive bound sequences for the joint spectral radius:
//
//   rho_plus_n  = max_{|w|=n} |||A_w|||^{1/n}   (non-increasing after taking running minima)
//   rho_minus_n = max_{|w|=n} rho(A_w)^{1/n}    (lower bounds)
//
// plus a pruned word-tree search and an empirical convergence-rate fit.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jsr/matrix_set.hpp"
#include "jsr/norm.hpp"

namespace jsr {

struct EnumerationOptions {
  std::uint64_t budget = kDefaultMultiplicationBudget;
  // Parallel workers for the word-tree walk. Results are identical for every
  // worker count: the reduction is max with lexicographic tie-break.
  std::size_t workers = 1;
  // Also return every word whose value lies within 1e-12 (relative) of the max.
  bool collect_ties = false;
};

struct LevelMaximum {
  double value = 0.0;
  Word argmax;              // lexicographically smallest maximizing word
  std::vector<Word> ties;   // filled only when collect_ties is set
};

// Throw BudgetExceeded when |A| + ... + |A|^n exceeds options.budget.
LevelMaximum rho_plus_n(const MatrixSet& set, std::size_t n, const NormSpec& norm,
                        const EnumerationOptions& options = {});
LevelMaximum rho_minus_n(const MatrixSet& set, std::size_t n, const EnumerationOptions& options = {});

struct BoundsRow {
  std::size_t n = 0;
  double rho_plus = 0.0;
  double rho_minus = 0.0;
  double best_lower = 0.0;  // max_{k<=n} rho_minus_k
  double best_upper = 0.0;  // min_{k<=n} rho_plus_k
  double gap = 0.0;         // best_upper - best_lower
  Word argmax_plus;
  Word argmax_minus;
};

struct BoundsReport {
  std::vector<BoundsRow> rows;
  std::string norm_used;
  std::optional<double> fitted_rate;
  std::size_t requested_depth = 0;
  bool truncated = false;  // budget stopped the run before requested_depth
  std::uint64_t multiplications = 0;
};

// Rows for n = 1..max_depth from a single walk of the word tree. When the
// budget does not cover max_depth the report stops at the deepest feasible n
// and sets `truncated`. Throws InvariantViolation if best_lower exceeds
// best_upper by more than 1e-9 relative.
BoundsReport sandwich(const MatrixSet& set, std::size_t max_depth, const NormSpec& norm,
                      const EnumerationOptions& options = {});

struct PrunedBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool conclusive = false;  // upper - lower <= delta was reached
  std::size_t depth_reached = 0;
  std::uint64_t products = 0;
  Word lower_witness;
};

// Level-by-level word-tree search in the Euclidean norm. A branch w stays
// alive while ||A_w||^{1/|w|} > lower * (1 - delta/4). Every word then factors
// into pruned blocks and alive depth-k blocks, so
//   upper_k = max(threshold, max_{alive w} min_{j<=k} ||A_{w_1..w_j}||^{1/j})
// is a valid upper bound at each depth k.
// Hitting max_depth or the budget returns conclusive = false with the
// interval achieved so far.
PrunedBounds pruned_bounds(const MatrixSet& set, double delta, std::size_t max_depth,
                           std::uint64_t budget = kDefaultMultiplicationBudget);

struct RateFit {
  std::optional<double> r_hat;      // -slope of log(gap) against log(n)
  std::optional<double> r_squared;
  bool exact_convergence = false;   // some tail gap <= 1e-13: no fit attempted
  std::size_t points = 0;
};

// Least-squares fit over the last tail_fraction of the rows. Requires at least
// six rows; throws std::invalid_argument otherwise.
RateFit fit_rate(const BoundsReport& report, double tail_fraction = 0.5);

// Same fit on raw (n, gap) pairs.
RateFit fit_power_law(std::span<const double> n, std::span<const double> gap, double tail_fraction);

}  // namespace jsr
