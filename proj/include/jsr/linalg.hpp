#pragma once

// Dense complex linear algebra used throughout the toolkit: spectral radius,
// singular values, subspaces of C^d and the Grassmannian metric, oblique
// projections.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace jsr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

ComplexMatrix identity(std::size_t d);

void require_square(const ComplexMatrix& m, const char* context);
void require_finite(const ComplexMatrix& m, const char* context);

std::vector<Complex> eigenvalues(const ComplexMatrix& m);

// max |lambda| over the eigenvalues of a square matrix.
double spectral_radius(const ComplexMatrix& m);

// Columns of `left` / `right` are ordered to match `values` (descending).
struct SingularDecomposition {
  std::vector<double> values;
  ComplexMatrix left;
  ComplexMatrix right;
};

SingularDecomposition singular_decomposition(const ComplexMatrix& m);
std::vector<double> singular_values(const ComplexMatrix& m);

// sigma_1(m).
double euclidean_operator_norm(const ComplexMatrix& m);

// A p-dimensional subspace of C^d stored as a d x p matrix with orthonormal
// columns. p may be 0.
class Subspace {
 public:
  // The zero subspace of C^1; placeholder for default-constructed aggregates.
  Subspace() : basis_(1, 0) {}

  // `basis` must already have orthonormal columns (checked to 1e-10).
  explicit Subspace(ComplexMatrix basis);

  // Orthonormal basis for the column span of `vectors`; columns whose singular
  // value falls below rank_tol * sigma_1 are discarded.
  static Subspace span(const ComplexMatrix& vectors, double rank_tol = 1e-10);
  static Subspace zero(std::size_t ambient_dim);
  static Subspace whole(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return static_cast<std::size_t>(basis_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  const ComplexMatrix& basis() const { return basis_; }

  // Orthogonal projector onto the subspace.
  ComplexMatrix projector() const;
  Subspace orthogonal_complement() const;

 private:
  ComplexMatrix basis_;
};

// Span of the right singular vectors with indices [first, first + count).
Subspace right_singular_subspace(const SingularDecomposition& svd, std::size_t first,
                                 std::size_t count);

// Image m * s, re-orthonormalized. The result may have lower dimension when m
// is singular on s.
Subspace push_forward(const ComplexMatrix& m, const Subspace& s, double rank_tol = 1e-10);

// || P_U - P_V || in the Euclidean operator norm. Defined for any pair with a
// common ambient dimension; equals 1 whenever the dimensions differ.
double grassmann_distance(const Subspace& u, const Subspace& v);

// max over unit u in U of dist(u, V), evaluated exactly as
// sigma_1((I - P_V) basis_U).
double max_unit_distance(const Subspace& u, const Subspace& v);

// Smallest principal angle (radians) between two subspaces; pi/2 if either is {0}.
double smallest_principal_angle(const Subspace& v, const Subspace& w);

// Oblique projection with image V and kernel W.
struct ProjectionPair {
  Subspace image;
  Subspace kernel;
  ComplexMatrix projection;
};

// Throws DegenerateSplittingError when V + W is not a direct sum of C^d
// (dimensions do not add up, or the concatenated basis is rank deficient at
// tolerance 1e-10).
ProjectionPair projection_from_pair(const Subspace& v, const Subspace& w);

// Column space and null space of a matrix at relative tolerance rank_tol.
Subspace column_space(const ComplexMatrix& m, double rank_tol = 1e-10);
Subspace null_space(const ComplexMatrix& m, double rank_tol = 1e-10);

}  // namespace jsr
