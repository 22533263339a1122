#pragma once

// Vector norms on C^d and their induced operator norms: the Euclidean norm and
// finite-horizon adapted (Rota-Strang) norms approximating an extremal norm.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "jsr/linalg.hpp"
#include "jsr/matrix_set.hpp"

namespace jsr {

// |||v|||_N = max_{0<=k<=N} max_{|w|=k} rho_hat^{-k} ||A_w v||.
//
// The norm is stored as the list of "generator" matrices rho_hat^{-|w|} A_w,
// with every generator whose Gram matrix is dominated (in the Loewner order)
// by another one removed; the maximum is unchanged by the pruning.
class AdaptedNorm {
 public:
  // Throws BudgetExceeded when the depth-N enumeration does not fit `budget`;
  // the message names the largest feasible depth.
  AdaptedNorm(const MatrixSet& set, double rho_hat, std::size_t depth,
              std::uint64_t budget = kDefaultMultiplicationBudget);

  double eval(const ComplexVector& v) const;

  // max over a deterministic search of |||m v||| / |||v|||: a fixed sample of
  // the unit sphere plus singular-vector candidates, followed by compass-search
  // refinement of the best few. The result is a lower estimate of the true
  // induced norm, exact to roughly 1e-9 relative in the dimensions used here.
  double operator_norm(const ComplexMatrix& m) const;

  std::size_t dim() const { return dim_; }
  double rho_hat() const { return rho_hat_; }
  std::size_t depth() const { return depth_; }
  const std::vector<ComplexMatrix>& generators() const { return generators_; }

 private:
  double search(const ComplexMatrix& m) const;
  // max over generator blocks of the norm of the matching segment of column c.
  double block_max(const ComplexMatrix& stacked_image, Eigen::Index c) const;

  std::size_t dim_;
  double rho_hat_;
  std::size_t depth_;
  std::vector<ComplexMatrix> generators_;
  ComplexMatrix stacked_;  // generators on top of each other
  std::vector<ComplexVector> samples_;
  ComplexMatrix sample_matrix_;  // samples as columns
  std::vector<double> sample_norms_;
};

class NormSpec {
 public:
  enum class Kind { euclidean, adapted };

  static NormSpec euclidean();
  static NormSpec adapted(const MatrixSet& set, double rho_hat, std::size_t depth,
                          std::uint64_t budget = kDefaultMultiplicationBudget);

  Kind kind() const { return adapted_ ? Kind::adapted : Kind::euclidean; }
  const AdaptedNorm* adapted_norm() const { return adapted_.get(); }

  double eval(const ComplexVector& v) const;
  double operator_norm(const ComplexMatrix& m) const;

  // "euclidean" or "adapted(depth=N,rho_hat=X)".
  std::string describe() const;

 private:
  std::shared_ptr<const AdaptedNorm> adapted_;
};

// Induced operator norm. Euclidean gives sigma_1; adapted norms use the
// deterministic search of AdaptedNorm::operator_norm. Throws DimensionError
// when m does not match the norm's ambient dimension.
double operator_norm(const ComplexMatrix& m, const NormSpec& norm);

// Throws std::invalid_argument for a non-adapted spec.
double adapted_norm_eval(const NormSpec& spec, const ComplexVector& v);

// Deterministic sample of unit vectors in C^d used by the searches (a
// Bloch-sphere grid for d = 2, seeded Gaussian samples otherwise, plus
// coordinate vectors and their pairwise sums).
std::vector<ComplexVector> unit_sphere_sample(std::size_t d, std::size_t count, std::uint64_t seed);

}  // namespace jsr
