#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <utility>
#include <vector>

#include "jsr/linalg.hpp"
#include "jsr/matrix_set.hpp"

namespace fixture {

using jsr::Complex;
using jsr::ComplexMatrix;
using jsr::ComplexVector;

inline ComplexMatrix m2(double a, double b, double c, double d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

inline jsr::MatrixSet e1() { return jsr::MatrixSet({m2(0, 2, 0.5, 0), m2(0, 1, 1, 0)}, {"A1", "A2"}); }
inline jsr::MatrixSet e2() { return jsr::MatrixSet({m2(2, 2, 0, 0), m2(1, 1, 1, 1)}, {"B1", "B2"}); }
inline jsr::MatrixSet single(const ComplexMatrix& m) { return jsr::MatrixSet({m}); }

// Roots of the 2x2 characteristic polynomial l^2 - tr l + det.
inline std::pair<Complex, Complex> eig2(const ComplexMatrix& m) {
  const Complex tr = m(0, 0) + m(1, 1);
  const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

inline double rho2(const ComplexMatrix& m) {
  const auto [a, b] = eig2(m);
  return std::max(std::abs(a), std::abs(b));
}

// sigma_1 of a 2x2 matrix from the eigenvalues of M^H M in closed form.
inline double sigma1_2x2(const ComplexMatrix& m) {
  const ComplexMatrix g = m.adjoint() * m;
  const double tr = (g(0, 0) + g(1, 1)).real();
  const double det = (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0)).real();
  return std::sqrt((tr + std::sqrt(std::max(0.0, tr * tr - 4 * det))) / 2);
}

inline ComplexMatrix random_matrix(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexVector random_vector(std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

inline jsr::Subspace random_subspace(std::size_t d, std::size_t p, std::mt19937_64& rng) {
  ComplexMatrix b(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(p));
  for (std::size_t j = 0; j < p; ++j) b.col(static_cast<Eigen::Index>(j)) = random_vector(d, rng);
  return jsr::Subspace::span(b);
}

inline jsr::Subspace line(std::initializer_list<Complex> v) {
  ComplexVector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& z : v) x(i++) = z;
  return jsr::Subspace(ComplexMatrix(x / x.norm()));
}

// max over unit u in U of ||(I - P_V) u||, by sampling plus power iteration on
// the Gram form; independent of any SVD.
inline double sampled_max_distance(const jsr::Subspace& u, const jsr::Subspace& v, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(u.ambient_dim());
  const ComplexMatrix resid = ComplexMatrix::Identity(d, d) - v.basis() * v.basis().adjoint();
  const ComplexMatrix form = u.basis().adjoint() * resid.adjoint() * resid * u.basis();
  const std::size_t p = u.dim();
  ComplexVector best;
  double best_val = -1;
  for (int s = 0; s < 400; ++s) {
    ComplexVector c = random_vector(p, rng);
    c /= c.norm();
    const double val = (c.adjoint() * form * c)(0).real();
    if (val > best_val) best_val = val, best = c;
  }
  for (int it = 0; it < 5000; ++it) {
    ComplexVector next = form * best;
    if (next.norm() == 0) break;
    best = next / next.norm();
  }
  return std::sqrt(std::max(0.0, (best.adjoint() * form * best)(0).real()));
}

}  // namespace fixture
