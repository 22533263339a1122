#include "jsr/extremal.hpp"

#include <algorithm>
#include <stdexcept>

#include "jsr/bounds.hpp"
#include "jsr/errors.hpp"

namespace jsr {

ExtremalityResidual extremality_residual(const MatrixSet& set, const NormSpec& spec, std::size_t samples,
                                         double euclidean_rho_hat) {
  const double rho_hat =
      spec.kind() == NormSpec::Kind::adapted ? spec.adapted_norm()->rho_hat() : euclidean_rho_hat;
  if (!(rho_hat > 0.0)) throw std::invalid_argument("extremality_residual: rho_hat must be positive");

  std::vector<ComplexVector> vectors = unit_sphere_sample(set.dim(), samples, 0xe7e);
  for (const auto& a : set.matrices()) {
    const auto svd = singular_decomposition(a);
    for (Eigen::Index c = 0; c < svd.right.cols(); ++c) vectors.push_back(svd.right.col(c));
  }

  ExtremalityResidual out;
  out.samples = vectors.size();
  for (const auto& a : set.matrices()) {
    for (const auto& v : vectors) {
      const double den = spec.eval(v);
      if (den <= 0.0) continue;
      const double r = (spec.eval(a * v) / den - rho_hat) / rho_hat;
      out.residual = std::max(out.residual, r);
    }
  }
  return out;
}

BoundednessReport is_product_bounded(const MatrixSet& set, std::size_t depth, double bound_guess,
                                     std::uint64_t budget) {
  if (depth == 0) throw std::invalid_argument("is_product_bounded: depth must be >= 1");
  BoundednessReport out;
  if (enumeration_cost(set.size(), depth) > budget) return out;

  out.level_max.assign(depth, 0.0);
  for_each_product(set, depth, [&](const Word& w, const ComplexMatrix& p) {
    double& slot = out.level_max[w.size() - 1];
    slot = std::max(slot, euclidean_operator_norm(p));
  });

  const double peak = *std::max_element(out.level_max.begin(), out.level_max.end());
  if (peak <= bound_guess) {
    out.verdict = Boundedness::bounded_up_to_depth;
    return out;
  }
  const std::size_t from = depth - std::max<std::size_t>(depth / 3, 1);
  bool increasing = true;
  for (std::size_t k = from; k + 1 < depth; ++k) increasing = increasing && out.level_max[k + 1] > out.level_max[k];
  if (increasing && depth >= 2) out.verdict = Boundedness::growth_detected;
  return out;
}

YMembershipReport y_membership(const MatrixSet& set, const NormSpec& spec, const PeriodicWord& x,
                               std::size_t depth, double tol) {
  x.validate(set);
  if (depth == 0) throw std::invalid_argument("y_membership: depth must be >= 1");

  YMembershipReport out;
  {
    EnumerationOptions coarse;
    coarse.budget = 200'000;
    const std::size_t k = std::min<std::size_t>(8, std::max<std::size_t>(1, max_depth_within(set.size(), coarse.budget)));
    const BoundsReport r = sandwich(set, k, NormSpec::euclidean(), coarse);
    out.coarse_lower = r.rows.back().best_lower;
    out.coarse_upper = r.rows.back().best_upper;
    if (out.coarse_lower > 1.2 || out.coarse_upper < 0.8) {
      throw NormalizationError("y_membership: set is not normalized (joint spectral radius in [" +
                               std::to_string(out.coarse_lower) + ", " + std::to_string(out.coarse_upper) +
                               "], expected about 1)");
    }
  }

  out.word = x.prefix(depth);
  out.depth = depth;
  ComplexMatrix p = identity(set.dim());
  for (std::size_t n = 1; n <= depth; ++n) {
    p = set[out.word[n - 1]] * p;
    const double value = spec.operator_norm(p);
    out.values.push_back(value);
    out.margins.push_back(1.0 - value);
    if (value > 1.0 + tol) out.above_one.push_back(n);
    if (value < 1.0 - tol && !out.rejected_at) {
      out.rejected_at = n;
      out.verdict = YVerdict::rejected;
    }
  }
  if (out.verdict == YVerdict::consistent && !out.above_one.empty()) out.verdict = YVerdict::norm_not_extremal;
  return out;
}

}  // namespace jsr
