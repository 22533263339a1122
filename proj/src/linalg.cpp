#include "jsr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "jsr/errors.hpp"

namespace jsr {

ComplexMatrix identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return ComplexMatrix::Identity(n, n);
}

void require_square(const ComplexMatrix& m, const char* context) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(context) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_finite(const ComplexMatrix& m, const char* context) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ValueError(std::string(context) + ": non-finite entry at (" + std::to_string(i) +
                         "," + std::to_string(j) + ")");
      }
    }
  }
}

std::vector<Complex> eigenvalues(const ComplexMatrix& m) {
  require_square(m, "eigenvalues");
  if (m.rows() == 1) return {m(0, 0)};
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/false);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const ComplexMatrix& m) {
  double r = 0.0;
  for (const Complex& z : eigenvalues(m)) r = std::max(r, std::abs(z));
  return r;
}

SingularDecomposition singular_decomposition(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("singular_decomposition: empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SingularDecomposition out;
  const auto& s = svd.singularValues();
  out.values.assign(s.data(), s.data() + s.size());
  out.left = svd.matrixU();
  out.right = svd.matrixV();
  return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw DimensionError("singular_values: empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double euclidean_operator_norm(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return singular_values(m).front();
}

Subspace::Subspace(ComplexMatrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() == 0) throw DimensionError("Subspace: ambient dimension must be >= 1");
  if (basis_.cols() > basis_.rows()) throw DimensionError("Subspace: more basis vectors than dimensions");
  if (basis_.cols() > 0) {
    const ComplexMatrix gram = basis_.adjoint() * basis_;
    const double err = (gram - ComplexMatrix::Identity(gram.rows(), gram.cols())).norm();
    if (err > 1e-10) throw DimensionError("Subspace: basis columns are not orthonormal");
  }
}

Subspace Subspace::span(const ComplexMatrix& vectors, double rank_tol) {
  const auto d = vectors.rows();
  if (d == 0) throw DimensionError("Subspace::span: ambient dimension must be >= 1");
  if (vectors.cols() == 0) return Subspace(ComplexMatrix(d, 0));
  Eigen::JacobiSVD<ComplexMatrix> svd(vectors, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (rank < s.size() && s(rank) > rank_tol * s(0)) ++rank;
  }
  return Subspace(svd.matrixU().leftCols(rank));
}

Subspace Subspace::zero(std::size_t ambient_dim) {
  return Subspace(ComplexMatrix(static_cast<Eigen::Index>(ambient_dim), 0));
}

Subspace Subspace::whole(std::size_t ambient_dim) { return Subspace(identity(ambient_dim)); }

ComplexMatrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

Subspace Subspace::orthogonal_complement() const {
  const auto d = basis_.rows();
  if (basis_.cols() == 0) return whole(static_cast<std::size_t>(d));
  Eigen::JacobiSVD<ComplexMatrix> svd(basis_, Eigen::ComputeFullU);
  return Subspace(svd.matrixU().rightCols(d - basis_.cols()));
}

Subspace right_singular_subspace(const SingularDecomposition& svd, std::size_t first,
                                 std::size_t count) {
  const auto cols = static_cast<std::size_t>(svd.right.cols());
  if (first + count > cols) throw DimensionError("right_singular_subspace: index range out of bounds");
  return Subspace(svd.right.middleCols(static_cast<Eigen::Index>(first),
                                       static_cast<Eigen::Index>(count)));
}

Subspace push_forward(const ComplexMatrix& m, const Subspace& s, double rank_tol) {
  if (m.cols() != static_cast<Eigen::Index>(s.ambient_dim())) {
    throw DimensionError("push_forward: matrix and subspace dimensions differ");
  }
  if (s.dim() == 0) return Subspace::zero(static_cast<std::size_t>(m.rows()));
  return Subspace::span(m * s.basis(), rank_tol);
}

double grassmann_distance(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw DimensionError("grassmann_distance: ambient dimensions differ");
  }
  return euclidean_operator_norm(u.projector() - v.projector());
}

double max_unit_distance(const Subspace& u, const Subspace& v) {
  if (u.ambient_dim() != v.ambient_dim()) {
    throw DimensionError("max_unit_distance: ambient dimensions differ");
  }
  if (u.dim() == 0) return 0.0;
  const ComplexMatrix residual = u.basis() - v.projector() * u.basis();
  return euclidean_operator_norm(residual);
}

double smallest_principal_angle(const Subspace& v, const Subspace& w) {
  if (v.ambient_dim() != w.ambient_dim()) {
    throw DimensionError("smallest_principal_angle: ambient dimensions differ");
  }
  if (v.dim() == 0 || w.dim() == 0) return std::numbers::pi / 2;
  if (w.dim() > v.dim()) return smallest_principal_angle(w, v);
  const double c = std::min(1.0, euclidean_operator_norm(v.basis().adjoint() * w.basis()));
  // acos is ill-conditioned near 1; recover the angle from the sine instead.
  const ComplexMatrix off = w.basis() - v.projector() * w.basis();
  Eigen::JacobiSVD<ComplexMatrix> svd(off);
  const double s = svd.singularValues().size() > 0
                       ? svd.singularValues()(svd.singularValues().size() - 1)
                       : 0.0;
  return c > 0.7 ? std::asin(std::min(1.0, s)) : std::acos(c);
}

ProjectionPair projection_from_pair(const Subspace& v, const Subspace& w) {
  const std::size_t d = v.ambient_dim();
  if (w.ambient_dim() != d) throw DimensionError("projection_from_pair: ambient dimensions differ");
  if (v.dim() + w.dim() != d) {
    throw DegenerateSplittingError("projection_from_pair: dim V + dim W = " +
                                   std::to_string(v.dim() + w.dim()) + " != " + std::to_string(d));
  }
  const auto n = static_cast<Eigen::Index>(d);
  const auto p = static_cast<Eigen::Index>(v.dim());
  ComplexMatrix joint(n, n);
  joint.leftCols(p) = v.basis();
  joint.rightCols(n - p) = w.basis();
  const auto sv = singular_values(joint);
  if (sv.back() < 1e-10) {
    throw DegenerateSplittingError("projection_from_pair: V and W are not complementary (sigma_min = " +
                                   std::to_string(sv.back()) + ")");
  }
  ComplexMatrix target = ComplexMatrix::Zero(n, n);
  target.leftCols(p) = v.basis();
  // P * joint = target  =>  joint^H * P^H = target^H
  const ComplexMatrix p_adj = joint.adjoint().fullPivLu().solve(target.adjoint());
  return ProjectionPair{v, w, p_adj.adjoint()};
}

Subspace column_space(const ComplexMatrix& m, double rank_tol) { return Subspace::span(m, rank_tol); }

Subspace null_space(const ComplexMatrix& m, double rank_tol) {
  const auto n = m.cols();
  if (n == 0) throw DimensionError("null_space: empty matrix");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::Index rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    while (rank < s.size() && s(rank) > rank_tol * s(0)) ++rank;
  }
  return Subspace(svd.matrixV().rightCols(n - rank));
}

}  // namespace jsr
