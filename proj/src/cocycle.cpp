#include "jsr/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double cxy = sxy - sx * sy / m;
  LineFit fit;
  fit.slope = vx > 0.0 ? cxy / vx : 0.0;
  fit.intercept = (sy - fit.slope * sx) / m;
  fit.r_squared = (vx > 0.0 && vy > 1e-300) ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

// Top-p right singular space of A(T^{-n}x, 2n) pushed forward by A(T^{-n}x, n).
Subspace fast_space(const MatrixSet& set, const PeriodicWord& x, std::size_t p, std::size_t n) {
  const PeriodicWord y = x.shifted(-static_cast<std::int64_t>(n));
  const auto svd = singular_decomposition(cocycle(set, y, 2 * n));
  const Subspace top = right_singular_subspace(svd, 0, p);
  Subspace v = push_forward(cocycle(set, y, n), top);
  if (v.dim() != p) {
    throw DegenerateSplittingError("finite_splitting: push-forward of the top singular space lost rank (" +
                                   std::to_string(v.dim()) + " < " + std::to_string(p) + ")");
  }
  return v;
}

double subspace_distance_after(const ComplexMatrix& a, const Subspace& from, const Subspace& to) {
  const Subspace image = push_forward(a, from);
  return grassmann_distance(image, to);
}

// sigma_min of m restricted to s (min over unit v in s of ||m v||).
double min_gain(const ComplexMatrix& m, const Subspace& s) {
  if (s.dim() == 0) return std::numeric_limits<double>::infinity();
  return singular_values(m * s.basis()).back();
}

double max_gain(const ComplexMatrix& m, const Subspace& s) {
  if (s.dim() == 0) return 0.0;
  return singular_values(m * s.basis()).front();
}

ComplexVector random_complex(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexVector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
  return v;
}

// Vectors of s, unit in `norm`: the basis columns and (for dim > 1) a fixed sample.
std::vector<ComplexVector> unit_vectors_in(const Subspace& s, const NormSpec& norm, std::size_t extra) {
  std::vector<ComplexVector> out;
  if (s.dim() == 0) return out;
  std::vector<ComplexVector> coords;
  if (s.dim() == 1) {
    coords.push_back(ComplexVector::Ones(1));
  } else {
    coords = unit_sphere_sample(s.dim(), extra, 0xc0e);
  }
  for (const auto& c : coords) {
    const ComplexVector v = s.basis() * c;
    const double len = norm.eval(v);
    if (len > 0.0) out.push_back(v / len);
  }
  return out;
}

}  // namespace

ExponentEstimate detect_p(const MatrixSet& set, const PeriodicWord& x, std::size_t horizon) {
  x.validate(set);
  const std::size_t r = x.period();
  if (horizon < 4 * r) throw std::invalid_argument("detect_p: horizon must be at least 4 times the period");
  const std::size_t d = set.dim();

  std::vector<double> ns;
  std::vector<std::vector<double>> sums(d);
  std::vector<bool> collapsed(d, false);
  ComplexMatrix product = identity(d);
  for (std::size_t n = 1; n <= horizon; ++n) {
    product = set[x.symbol(static_cast<std::int64_t>(n - 1))] * product;
    if (n % r != 0 || 4 * n < horizon) continue;
    const auto sigma = singular_values(product);
    ns.push_back(static_cast<double>(n));
    double acc = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      if (!(sigma[l] > 0.0)) collapsed[l] = true;
      acc += collapsed[l] ? 0.0 : std::log(sigma[l]);
      sums[l].push_back(acc);
    }
  }
  if (ns.size() < 2) throw std::invalid_argument("detect_p: horizon leaves fewer than two fit points");

  ExponentEstimate out;
  out.theta.resize(d);
  for (std::size_t l = 0; l < d; ++l) out.theta[l] = collapsed[l] ? kNegInf : least_squares(ns, sums[l]).slope;

  if (out.theta[0] >= 2 * kExponentThreshold) {
    throw NormalizationError("detect_p: leading exponent " + std::to_string(out.theta[0]) +
                             " is positive; scale the set so its joint spectral radius is 1");
  }
  bool negative_seen = false;
  for (std::size_t l = 0; l < d; ++l) {
    const double a = std::abs(out.theta[l]);
    if (a >= kExponentThreshold && a < 2 * kExponentThreshold) {
      throw AmbiguityError("detect_p: exponent sum " + std::to_string(l + 1) + " = " +
                               std::to_string(out.theta[l]) + " is too close to the zero threshold",
                           l + 1);
    }
    if (a < kExponentThreshold) {
      if (negative_seen) {
        throw AmbiguityError("detect_p: exponent sum " + std::to_string(l + 1) +
                                 " is zero after a negative one",
                             l + 1);
      }
      ++out.p;
    } else {
      negative_seen = true;
    }
  }
  return out;
}

SplittingResult finite_splitting(const MatrixSet& set, const PeriodicWord& x, std::size_t p, std::size_t n) {
  x.validate(set);
  const std::size_t d = set.dim();
  if (n == 0) throw std::invalid_argument("finite_splitting: horizon must be >= 1");
  if (p > d) throw DimensionError("finite_splitting: p exceeds the dimension");

  SplittingResult out;
  out.p = p;
  out.horizon = n;
  out.v_space = fast_space(set, x, p, n);
  const auto svd = singular_decomposition(cocycle(set, x, n));
  out.w_space = right_singular_subspace(svd, p, d - p);
  out.principal_angle = smallest_principal_angle(out.v_space, out.w_space);
  if (out.principal_angle < 1e-8) {
    throw DegenerateSplittingError("finite_splitting: V and W meet at angle " +
                                   std::to_string(out.principal_angle));
  }
  out.projection = projection_from_pair(out.v_space, out.w_space);
  return out;
}

std::vector<SplittingResult> splitting_family(const MatrixSet& set, const PeriodicWord& x, std::size_t p,
                                              std::size_t n) {
  std::vector<SplittingResult> out;
  for (std::size_t k = 0; k < x.period(); ++k) {
    out.push_back(finite_splitting(set, x.shifted(static_cast<std::int64_t>(k)), p, n));
  }
  return out;
}

LogLinearFit fit_exponential(const std::vector<double>& steps, const std::vector<double>& values, double floor) {
  if (steps.size() != values.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  std::vector<double> xs, ys, raw;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (values[i] > floor) {
      xs.push_back(steps[i]);
      ys.push_back(std::log(values[i]));
      raw.push_back(values[i]);
    }
  }
  LogLinearFit out;
  if (xs.empty()) {
    out.exact = true;
    return out;
  }
  if (xs.size() < 2) return out;
  const LineFit line = least_squares(xs, ys);
  out.rate = std::exp(line.slope);
  out.r_squared = line.r_squared;
  double c = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) c = std::max(c, raw[i] / std::pow(*out.rate, xs[i]));
  out.constant = c;
  return out;
}

SplittingDiagnostics splitting_residuals(const MatrixSet& set, const PeriodicWord& x,
                                         const SplittingResult& result, std::size_t n_max) {
  x.validate(set);
  if (n_max == 0) throw std::invalid_argument("splitting_residuals: n_max must be >= 1");
  const std::size_t r = x.period();
  const std::size_t p = result.p;
  const std::size_t n = result.horizon;

  SplittingDiagnostics out;
  const auto family = splitting_family(set, x, p, n);
  std::vector<Subspace> next_v;
  for (std::size_t k = 0; k < r; ++k) next_v.push_back(fast_space(set, x.shifted(static_cast<std::int64_t>(k)), p, n + 1));

  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t k1 = (k + 1) % r;
    const ComplexMatrix& a = set[x.symbol(static_cast<std::int64_t>(k))];
    out.invariance_residual =
        std::max(out.invariance_residual, subspace_distance_after(a, family[k].v_space, next_v[k1]));
    out.fixed_horizon_invariance =
        std::max(out.fixed_horizon_invariance, subspace_distance_after(a, family[k].v_space, family[k1].v_space));
    const ComplexMatrix comm = a * family[k].projection.projection - family[k1].projection.projection * a;
    out.commutation_residual = std::max(out.commutation_residual, euclidean_operator_norm(comm));
  }

  out.delta_hat = std::numeric_limits<double>::infinity();
  out.delta0_hat = std::numeric_limits<double>::infinity();
  std::vector<double> steps;
  ComplexMatrix product = identity(set.dim());
  for (std::size_t m = 1; m <= n_max; ++m) {
    product = set[x.symbol(static_cast<std::int64_t>(m - 1))] * product;
    steps.push_back(static_cast<double>(m));
    out.delta_hat = std::min(out.delta_hat, min_gain(product, result.v_space));
    out.contraction.push_back(max_gain(product, result.w_space));
  }
  if (p > 0) {
    for (std::size_t k = 0; k < r; ++k) {
      const PeriodicWord xk = x.shifted(static_cast<std::int64_t>(k));
      ComplexMatrix q = identity(set.dim());
      for (std::size_t m = 1; m <= n_max; ++m) {
        q = set[xk.symbol(static_cast<std::int64_t>(m - 1))] * q;
        out.delta0_hat = std::min(out.delta0_hat, singular_values(q)[p - 1]);
      }
    }
  }
  out.contraction_fit = fit_exponential(steps, out.contraction);

  std::vector<Subspace> v_by_horizon;
  for (std::size_t m = 1; m <= n_max + r; ++m) v_by_horizon.push_back(fast_space(set, x, p, m));
  for (std::size_t m = 1; m <= n_max; ++m) {
    out.cauchy.push_back(grassmann_distance(v_by_horizon[m - 1], v_by_horizon[m + r - 1]));
  }
  out.cauchy_fit = fit_exponential(steps, out.cauchy);
  return out;
}

ConeMembership cone_contains(const ConeParams& params, std::size_t position, const ComplexVector& v) {
  if (params.projections.empty()) throw std::invalid_argument("cone_contains: empty projection family");
  const ComplexMatrix& p = params.projections[position % params.projections.size()].projection;
  if (p.cols() != v.size()) throw DimensionError("cone_contains: vector does not match the projection");
  const ComplexVector pv = p * v;
  const ComplexVector qv = v - pv;
  ConeMembership out;
  out.margin = params.theta * params.norm.eval(pv) - params.norm.eval(qv);
  out.member = out.margin >= 0.0;
  return out;
}

ConePropagationReport cone_propagation_check(const MatrixSet& set, const PeriodicWord& x,
                                             const ConeParams& params, std::size_t block, std::size_t laps) {
  x.validate(set);
  const std::size_t r = x.period();
  const std::size_t d = set.dim();
  if (params.projections.size() != r) {
    throw std::invalid_argument("cone_propagation_check: need one projection per orbit position (" +
                                std::to_string(r) + "), got " + std::to_string(params.projections.size()));
  }
  if (block == 0 || laps == 0) throw std::invalid_argument("cone_propagation_check: block and laps must be >= 1");
  if (!(params.theta > 0.0 && params.theta <= 1.0)) {
    throw std::invalid_argument("cone_propagation_check: theta must lie in (0, 1]");
  }
  const NormSpec& norm = params.norm;
  const ComplexMatrix id = identity(d);

  ConePropagationReport out;

  // Contraction of W in the cone norm, fitted as h(m) <= C xi^m.
  const std::size_t fit_len = std::max<std::size_t>(2 * block, 12);
  std::vector<double> steps, h(fit_len, 0.0);
  for (std::size_t m = 1; m <= fit_len; ++m) steps.push_back(static_cast<double>(m));
  for (std::size_t k = 0; k < r; ++k) {
    const auto ws = unit_vectors_in(params.projections[k].kernel, norm, 256);
    const PeriodicWord xk = x.shifted(static_cast<std::int64_t>(k));
    ComplexMatrix prod = id;
    for (std::size_t m = 1; m <= fit_len; ++m) {
      prod = set[xk.symbol(static_cast<std::int64_t>(m - 1))] * prod;
      for (const auto& w : ws) h[m - 1] = std::max(h[m - 1], norm.eval(prod * w));
    }
    out.q_norm = std::max(out.q_norm, norm.operator_norm(id - params.projections[k].projection));
  }
  const LogLinearFit fit = fit_exponential(steps, h);
  out.xi_hat = fit.rate.value_or(0.0);
  out.c_hat = fit.constant.value_or(0.0);
  out.k1 = 1.1 * 2.0 * out.c_hat * out.q_norm;
  out.aperture_factor = out.k1 * std::pow(out.xi_hat, static_cast<double>(block));
  if (!(out.aperture_factor < 1.0)) {
    throw std::invalid_argument("cone_propagation_check: K1 xi^N = " + std::to_string(out.aperture_factor) +
                                " >= 1; use a longer block");
  }

  const std::size_t blocks = laps * (r / std::gcd(block, r));
  constexpr double kTol = 1e-9;
  out.worst_membership_slack = std::numeric_limits<double>::infinity();
  out.worst_norm_slack = std::numeric_limits<double>::infinity();

  for (std::size_t start = 0; start < r; ++start) {
    const auto& pair = params.projections[start];
    const auto as = unit_vectors_in(pair.image, norm, 16);
    const auto bs = unit_vectors_in(pair.kernel, norm, 16);
    std::vector<ComplexVector> seeds;
    for (const auto& a : as) {
      seeds.push_back(a);
      for (const auto& b : bs) {
        for (const double t : {0.5, 1.0}) {
          for (const Complex phase : {Complex(1, 0), Complex(-1, 0), Complex(0, 1)}) {
            seeds.push_back(a + params.theta * t * phase * b);
          }
        }
      }
    }

    for (ComplexVector v : seeds) {
      double theta = params.theta;
      std::size_t pos = start;
      for (std::size_t j = 0; j < blocks; ++j) {
        ComplexMatrix prod = id;
        for (std::size_t m = 0; m < block; ++m) prod = set[x.symbol(static_cast<std::int64_t>(pos + m))] * prod;
        const std::size_t next = (pos + block) % r;
        const ComplexVector av = prod * v;
        const double before = norm.eval(v);
        const double after = norm.eval(av);
        const double shrunk = out.aperture_factor * theta;

        ConeParams target{shrunk, params.projections, norm};
        const ConeMembership mem = cone_contains(target, next, av);
        const double mem_slack = mem.margin + kTol * after;
        const double norm_slack = after - (1.0 - theta - shrunk) * before + kTol * before;
        ++out.checks;

        const ComplexVector pav = params.projections[next].projection * av;
        const double pnorm = norm.eval(pav);
        if (pnorm > 0.0 && theta > 0.0) {
          out.max_aperture_ratio = std::max(out.max_aperture_ratio, norm.eval(av - pav) / pnorm / theta);
        }
        out.worst_membership_slack = std::min(out.worst_membership_slack, mem_slack);
        out.worst_norm_slack = std::min(out.worst_norm_slack, norm_slack);
        if ((mem_slack < 0.0 || norm_slack < 0.0) && !out.counterexample) {
          out.passed = false;
          out.counterexample = ConeCounterexample{v, pos, j, std::min(mem_slack, norm_slack), mem_slack >= 0.0};
        }

        v = after > 0.0 ? ComplexVector(av / after) : av;
        theta = shrunk;
        pos = next;
      }
    }
  }
  return out;
}

ContainmentReport cone_containment_check(const ProjectionPair& px, const ProjectionPair& py, const NormSpec& norm,
                                         double theta, std::size_t samples, std::uint64_t seed) {
  const ComplexMatrix& p = px.projection;
  if (p.rows() != py.projection.rows()) throw DimensionError("cone_containment_check: dimension mismatch");
  ContainmentReport out;
  out.projection_distance = norm.operator_norm(p - py.projection);
  if (!(theta < 0.2)) throw std::invalid_argument("cone_containment_check: theta must be < 1/5");
  if (!(out.projection_distance <= theta)) {
    throw std::invalid_argument("cone_containment_check: |||P(x) - P(y)||| = " +
                                std::to_string(out.projection_distance) + " exceeds theta");
  }
  const Subspace& v_space = px.image;
  const Subspace& w_space = px.kernel;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ComplexMatrix& py_m = py.projection;

  out.samples = samples;
  out.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    ComplexVector a = v_space.dim() ? ComplexVector(v_space.basis() * random_complex(v_space.dim(), rng))
                                    : ComplexVector(ComplexVector::Zero(p.rows()));
    ComplexVector b = w_space.dim() ? ComplexVector(w_space.basis() * random_complex(w_space.dim(), rng))
                                    : ComplexVector(ComplexVector::Zero(p.rows()));
    const double an = norm.eval(a);
    const double bn = norm.eval(b);
    if (an > 0.0) a /= an;
    if (bn > 0.0) b /= bn;
    // Every eighth sample sits on the cone boundary.
    const double t = (s % 8 == 0) ? 1.0 : unit(rng);
    const ComplexVector v = a + theta * t * b;
    const ComplexVector pv = py_m * v;
    const double margin = 3.0 * theta * norm.eval(pv) - norm.eval(v - pv);
    out.worst_margin = std::min(out.worst_margin, margin);
    if (margin < -1e-12 * std::max(1.0, norm.eval(v))) ++out.violations;
  }
  return out;
}

LowerBoundCertificate certify_lower(const MatrixSet& set, const Word& w) {
  if (w.empty()) throw std::invalid_argument("certify_lower: word must be nonempty");
  for (const auto i : w) {
    if (i >= set.size()) throw DimensionError("certify_lower: index " + std::to_string(i) + " out of range");
  }
  const ComplexMatrix m = product_of_word(set, w);
  const double len = static_cast<double>(w.size());
  const std::size_t d = set.dim();

  LowerBoundCertificate out;
  out.word = w;
  ComplexMatrix md = identity(d);
  for (std::size_t i = 0; i < d; ++i) md = m * md;
  const double mnorm = euclidean_operator_norm(m);
  out.vacuous = euclidean_operator_norm(md) <= 1e-12 * std::pow(mnorm, static_cast<double>(d));
  out.value = out.vacuous ? 0.0 : std::pow(spectral_radius(m), 1.0 / len);

  ComplexMatrix power = identity(d);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 8; ++k) {
    power = m * power;
    const double g = std::pow(euclidean_operator_norm(power), 1.0 / (k * len));
    out.gelfand_trace.push_back(g);
    const double dev = std::abs(g - out.value);
    if (dev > previous + 1e-12 * std::max(1.0, out.value)) out.gelfand_monotone = false;
    previous = dev;
  }
  return out;
}

}  // namespace jsr
