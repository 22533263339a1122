#include "jsr/norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

constexpr std::size_t kSearchSamples = 4096;
constexpr std::uint64_t kSearchSeed = 0x5eed;
constexpr std::size_t kRefinedCandidates = 3;

// True when ||a v|| <= ||b v|| for every v, i.e. a^H a <= b^H b.
bool dominated(const ComplexMatrix& gram_a, const ComplexMatrix& gram_b) {
  const ComplexMatrix diff = gram_b - gram_a;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, gram_b.norm());
  return es.eigenvalues().minCoeff() >= -1e-14 * scale;
}

}  // namespace

std::vector<ComplexVector> unit_sphere_sample(std::size_t d, std::size_t count, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(d);
  std::vector<ComplexVector> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(ComplexVector::Unit(n, i));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      for (const Complex phase : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
        ComplexVector v = ComplexVector::Unit(n, i) + phase * ComplexVector::Unit(n, j);
        out.push_back(v / v.norm());
      }
    }
  }
  if (d == 2) {
    // (cos t, e^{i phi} sin t) on a regular grid of the Bloch sphere.
    constexpr int kPolar = 24;
    constexpr int kAzimuth = 48;
    for (int a = 1; a < kPolar; ++a) {
      const double t = (std::numbers::pi / 2) * a / kPolar;
      for (int b = 0; b < kAzimuth; ++b) {
        const double phi = 2 * std::numbers::pi * b / kAzimuth;
        ComplexVector v(2);
        v << std::cos(t), std::polar(std::sin(t), phi);
        out.push_back(v);
      }
    }
  }
  // Random fill up to `count` beyond the structured vectors.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t k = out.size(); k < count; ++k) {
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    out.push_back(v / v.norm());
  }
  return out;
}

AdaptedNorm::AdaptedNorm(const MatrixSet& set, double rho_hat, std::size_t depth, std::uint64_t budget)
    : dim_(set.dim()), rho_hat_(rho_hat), depth_(depth) {
  if (!(rho_hat > 0.0) || !std::isfinite(rho_hat)) throw ValueError("AdaptedNorm: rho_hat must be positive");
  check_budget(set.size(), depth, budget, "adapted norm");

  std::vector<ComplexMatrix> all{identity(dim_)};
  for_each_product(set, depth, [&](const Word& w, const ComplexMatrix& p) {
    all.push_back(std::pow(rho_hat, -static_cast<double>(w.size())) * p);
  });

  std::vector<ComplexMatrix> grams;
  grams.reserve(all.size());
  for (const auto& g : all) grams.push_back(g.adjoint() * g);
  std::vector<bool> keep(all.size(), true);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      // Mutual domination means equal Gram matrices; keep the earlier one.
      if (dominated(grams[i], grams[j]) && (!dominated(grams[j], grams[i]) || j < i)) keep[i] = false;
    }
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (keep[i]) generators_.push_back(std::move(all[i]));
  }

  const auto d = static_cast<Eigen::Index>(dim_);
  stacked_.resize(d * static_cast<Eigen::Index>(generators_.size()), d);
  for (std::size_t i = 0; i < generators_.size(); ++i) stacked_.middleRows(static_cast<Eigen::Index>(i) * d, d) = generators_[i];

  samples_ = unit_sphere_sample(dim_, kSearchSamples, kSearchSeed);
  sample_matrix_.resize(d, static_cast<Eigen::Index>(samples_.size()));
  for (std::size_t i = 0; i < samples_.size(); ++i) sample_matrix_.col(static_cast<Eigen::Index>(i)) = samples_[i];
  const ComplexMatrix images = stacked_ * sample_matrix_;
  sample_norms_.reserve(samples_.size());
  for (Eigen::Index c = 0; c < images.cols(); ++c) sample_norms_.push_back(block_max(images, c));
}

double AdaptedNorm::block_max(const ComplexMatrix& stacked_image, Eigen::Index c) const {
  const auto d = static_cast<Eigen::Index>(dim_);
  double best = 0.0;
  for (Eigen::Index r = 0; r < stacked_image.rows(); r += d)
    best = std::max(best, stacked_image.col(c).segment(r, d).squaredNorm());
  return std::sqrt(best);
}

double AdaptedNorm::eval(const ComplexVector& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_) throw DimensionError("AdaptedNorm::eval: dimension mismatch");
  return block_max(stacked_ * v, 0);
}

double AdaptedNorm::operator_norm(const ComplexMatrix& m) const {
  if (static_cast<std::size_t>(m.rows()) != dim_ || static_cast<std::size_t>(m.cols()) != dim_) {
    throw DimensionError("operator_norm: matrix does not match the norm's dimension " + std::to_string(dim_));
  }
  return search(m);
}

double AdaptedNorm::search(const ComplexMatrix& m) const {
  struct Candidate {
    double value;
    ComplexVector v;
  };
  const ComplexMatrix stacked_m = stacked_ * m;
  ComplexMatrix num_buf(stacked_.rows(), 1), den_buf(stacked_.rows(), 1);
  auto ratio = [&](const ComplexVector& v) {
    den_buf.noalias() = stacked_ * v;
    const double den = block_max(den_buf, 0);
    if (!(den > 0.0)) return 0.0;
    num_buf.noalias() = stacked_m * v;
    return block_max(num_buf, 0) / den;
  };

  std::vector<Candidate> top;
  auto offer = [&](double value, const ComplexVector& v) {
    if (top.size() < kRefinedCandidates) {
      top.push_back({value, v});
    } else {
      auto worst = std::min_element(top.begin(), top.end(),
                                    [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
      if (value > worst->value) *worst = {value, v};
    }
  };

  const ComplexMatrix images = stacked_m * sample_matrix_;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const double num = block_max(images, static_cast<Eigen::Index>(i));
    offer(sample_norms_[i] > 0.0 ? num / sample_norms_[i] : 0.0, samples_[i]);
  }
  const auto extra = [&](const ComplexMatrix& a) {
    const auto svd = singular_decomposition(a);
    for (Eigen::Index c = 0; c < svd.right.cols(); ++c) {
      const ComplexVector v = svd.right.col(c);
      offer(ratio(v), v);
    }
  };
  extra(m);
  for (const auto& g : generators_) extra(g * m);

  std::sort(top.begin(), top.end(), [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  double best = 0.0;
  std::vector<ComplexVector> started;
  for (auto& cand : top) {
    // Starting points in the same direction lead to the same local maximum.
    const bool seen = std::any_of(started.begin(), started.end(), [&](const ComplexVector& u) {
      return std::abs(u.dot(cand.v)) > 0.999 * u.norm() * cand.v.norm();
    });
    if (seen) continue;
    started.push_back(cand.v);
    ComplexVector v = cand.v;
    double value = cand.value;
    double step = 0.05;
    int evaluations = 0;
    ComplexVector trial(v.size());
    while (step > 1e-11 && evaluations < 4000) {
      bool improved = false;
      for (Eigen::Index c = 0; c < v.size(); ++c) {
        for (const Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
          trial = v;
          trial(c) += step * dir;
          trial /= trial.norm();
          const double r = ratio(trial);
          ++evaluations;
          if (r > value) {
            value = r;
            v = trial;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    best = std::max(best, value);
  }
  return best;
}

NormSpec NormSpec::euclidean() { return NormSpec{}; }

NormSpec NormSpec::adapted(const MatrixSet& set, double rho_hat, std::size_t depth, std::uint64_t budget) {
  NormSpec spec;
  spec.adapted_ = std::make_shared<const AdaptedNorm>(set, rho_hat, depth, budget);
  return spec;
}

double NormSpec::eval(const ComplexVector& v) const { return adapted_ ? adapted_->eval(v) : v.norm(); }

double NormSpec::operator_norm(const ComplexMatrix& m) const {
  if (adapted_) return adapted_->operator_norm(m);
  return euclidean_operator_norm(m);
}

std::string NormSpec::describe() const {
  if (!adapted_) return "euclidean";
  std::ostringstream os;
  os.precision(17);
  os << "adapted(depth=" << adapted_->depth() << ",rho_hat=" << adapted_->rho_hat() << ")";
  return os.str();
}

double operator_norm(const ComplexMatrix& m, const NormSpec& norm) { return norm.operator_norm(m); }

double adapted_norm_eval(const NormSpec& spec, const ComplexVector& v) {
  if (spec.kind() != NormSpec::Kind::adapted) throw std::invalid_argument("adapted_norm_eval: not an adapted norm");
  return spec.eval(v);
}

}  // namespace jsr
