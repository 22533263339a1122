// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "jsr/bounds.hpp"
#include "jsr/cocycle.hpp"
#include "jsr/io.hpp"
#include "jsr/linalg.hpp"
#include "jsr/norm.hpp"
#include "jsr/symbolic.hpp"
#include "support.hpp"

using namespace jsr;
using fixture::m2;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

MatrixSet e1n() { return fixture::e1().scaled(1.0 / std::numbers::sqrt2); }
MatrixSet upper() { return fixture::single(m2(1, 1, 0, 0.5)); }
MatrixSet diag() { return fixture::single(m2(1, 0, 0, 0.5)); }

// Dominant and recessive eigenlines of the cycle product at phase 0.
std::pair<Subspace, Subspace> eigen_splitting(const MatrixSet& set, const PeriodicWord& x) {
  const ComplexMatrix c = cocycle(set, x, x.period());
  auto [l1, l2] = fixture::eig2(c);
  if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
  auto line = [&](Complex lambda) {
    const Complex a = c(0, 0) - lambda, b = c(0, 1), cc = c(1, 0), d = c(1, 1) - lambda;
    ComplexVector v(2);
    if (std::abs(a) + std::abs(b) > 1e-12) {
      v << b, -a;
    } else {
      v << d, -cc;
    }
    if (v.norm() < 1e-14) v << 1, 0;
    return Subspace(ComplexMatrix(v / v.norm()));
  };
  return {line(l1), line(l2)};
}

// Per-step contraction of W relative to V, from the cycle eigenvalues.
double oracle_xi(const MatrixSet& set, const PeriodicWord& x) {
  auto [l1, l2] = fixture::eig2(cocycle(set, x, x.period()));
  const double ratio = std::min(std::abs(l1), std::abs(l2)) / std::max(std::abs(l1), std::abs(l2));
  return std::pow(ratio, 1.0 / static_cast<double>(x.period()));
}

Outcome criterion1() {
  Outcome o;
  const MatrixSet e2 = fixture::e2();
  const BoundsReport r = sandwich(e2, 10, NormSpec::euclidean());
  o.require(r.rows.size() == 10, "expected 10 rows");
  double worst = 0;
  for (const auto& row : r.rows) {
    const double exact = std::pow(2.0, 1.0 + 1.0 / (2.0 * static_cast<double>(row.n)));
    worst = std::max(worst, std::abs(row.rho_plus - exact) / exact);
  }
  o.require(worst <= 1e-9, "rho_plus relative error " + num(worst));
  const double rm1 = rho_minus_n(e2, 1).value;
  o.require(std::abs(rm1 - 2.0) <= 1e-12, "rho_minus_1 = " + num(rm1));
  o.detail = o.pass ? "max rel err " + num(worst) : o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  const MatrixSet e1 = fixture::e1();
  const double r2 = rho_minus_n(e1, 2).value, r3 = rho_minus_n(e1, 3).value;
  o.require(std::abs(r2 - std::numbers::sqrt2) < 1e-12, "rho_minus_2 = " + num(r2));
  o.require(std::abs(r3 - 1.0) < 1e-12, "rho_minus_3 = " + num(r3));
  const BoundsReport eu = sandwich(e1, 10, NormSpec::euclidean());
  for (const auto& row : eu.rows) {
    o.require(row.rho_minus <= std::numbers::sqrt2 * (1 + 1e-12), "rho_minus_" + std::to_string(row.n) + " above sqrt2");
    if (row.n >= 2)
      o.require(std::abs(row.best_lower - std::numbers::sqrt2) < 1e-12,
                "best_lower at n=" + std::to_string(row.n) + " is " + num(row.best_lower));
  }
  const NormSpec adapted = NormSpec::adapted(e1, std::numbers::sqrt2, 6);
  const BoundsReport ad = sandwich(e1, 16, adapted);
  o.require(!ad.truncated && ad.rows.size() == 16, "adapted sandwich truncated");
  const BoundsRow& last = ad.rows.back();
  o.require(last.best_lower <= std::numbers::sqrt2 + 1e-12 && last.best_upper >= std::numbers::sqrt2 - 1e-12,
            "sandwich does not enclose sqrt2");
  o.require(last.gap <= 0.05, "gap " + num(last.gap));
  if (o.pass) o.detail = "gap at depth 16: " + num(last.gap);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const BoundsReport r = sandwich(fixture::e2(), 12, NormSpec::euclidean());
  const RateFit f = fit_rate(r);
  o.require(f.r_hat.has_value(), "no rate fitted");
  if (f.r_hat) o.require(std::abs(*f.r_hat - 1.0) <= 0.1, "rate " + num(*f.r_hat));
  for (const auto& row : r.rows)
    o.require(row.best_lower - 2.0 == 0.0, "best_lower - 2 = " + num(row.best_lower - 2.0) + " at n=" +
                                               std::to_string(row.n));
  if (o.pass) o.detail = "fitted rate " + num(*f.r_hat);
  return o;
}

Outcome criterion4() {
  Outcome o;
  struct Case {
    std::string name;
    MatrixSet set;
    PeriodicWord x;
  };
  const std::vector<Case> cases{{"upper", upper(), PeriodicWord({0})}, {"E1-scaled", e1n(), PeriodicWord({0, 1})}};
  std::ostringstream info;
  for (const auto& c : cases) {
    const auto [v, w] = eigen_splitting(c.set, c.x);
    const SplittingResult s = finite_splitting(c.set, c.x, 1, 12);
    const double dv = grassmann_distance(s.v_space, v), dw = grassmann_distance(s.w_space, w);
    o.require(dv <= 1e-3 && dw <= 1e-3, c.name + " splitting off by " + num(std::max(dv, dw)));

    const double xi = oracle_xi(c.set, c.x);
    const SplittingResult deep = finite_splitting(c.set, c.x, 1, 40);
    const SplittingDiagnostics diag = splitting_residuals(c.set, c.x, deep, 20);
    o.require(diag.invariance_residual <= 1e-6, c.name + " invariance " + num(diag.invariance_residual));
    o.require(diag.commutation_residual <= 1e-6, c.name + " commutation " + num(diag.commutation_residual));
    if (diag.cauchy_fit.exact) {
      // The finite-horizon spaces are exact from the start; the rate shows in the contraction on W.
      const auto& cf = diag.contraction_fit;
      o.require(cf.rate && std::abs(*cf.rate - xi) <= 0.15 * xi, c.name + " contraction rate off");
      info << c.name << ": exact V, xi " << num(cf.rate.value_or(0)) << " vs " << num(xi) << "; ";
    } else {
      const auto& cf = diag.cauchy_fit;
      o.require(cf.rate.has_value() && cf.r_squared.has_value(), c.name + " no Cauchy fit");
      if (cf.rate && cf.r_squared) {
        o.require(*cf.r_squared >= 0.99, c.name + " Cauchy R2 " + num(*cf.r_squared));
        o.require(std::abs(*cf.rate - xi) <= 0.15 * xi, c.name + " Cauchy xi " + num(*cf.rate) + " vs " + num(xi));
        info << c.name << ": xi " << num(*cf.rate) << " vs " << num(xi) << ", R2 " << num(*cf.r_squared) << "; ";
      }
    }
  }
  if (o.pass) o.detail = info.str();
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::mt19937_64 rng(1001);
  double worst_eq = 0, worst_tri = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + t % 3;
    const std::size_t p = 1 + t % (d - 1);
    const Subspace u = fixture::random_subspace(d, p, rng);
    const Subspace v = fixture::random_subspace(d, p, rng);
    const Subspace w = fixture::random_subspace(d, p, rng);
    const double uv = grassmann_distance(u, v), vu = grassmann_distance(v, u);
    o.require(uv == vu, "asymmetric");
    o.require(grassmann_distance(u, u) < 1e-12, "d(u,u) > 0");
    worst_tri = std::max(worst_tri, grassmann_distance(u, w) - uv - grassmann_distance(v, w));
    worst_eq = std::max(worst_eq, std::abs(uv - fixture::sampled_max_distance(u, v, rng)));
  }
  o.require(worst_eq <= 1e-8, "identity error " + num(worst_eq));
  o.require(worst_tri <= 1e-10, "triangle excess " + num(worst_tri));
  if (o.pass) o.detail = "identity err " + num(worst_eq) + ", triangle excess " + num(worst_tri);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937_64 rng(1002);
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + t % 4;
    const ComplexMatrix a = fixture::random_matrix(d, rng), b = fixture::random_matrix(d, rng);
    const auto sa = singular_values(a), sb = singular_values(b), sab = singular_values(a * b);
    double pa = 1, pb = 1, pab = 1;
    for (std::size_t l = 0; l < d; ++l) {
      pa *= sa[l], pb *= sb[l], pab *= sab[l];
      worst = std::max(worst, pab / (pa * pb) - 1.0);
    }
  }
  o.require(worst <= 1e-9, "relative excess " + num(worst));
  o.detail = o.pass ? "max relative excess " + num(worst) : o.detail;
  return o;
}

// Exact maximum cycle mean over simple cycles, as a reduced fraction.
void cycles_from(const WeightedGraph& g, std::size_t start, std::size_t v, long long total, long long len,
                 std::vector<bool>& on_path, long long& bn, long long& bd) {
  for (const auto& e : g.edges) {
    if (e.from != v) continue;
    const long long w = total + static_cast<long long>(e.weight);
    if (e.to == start) {
      if (bd == 0 || w * bd > bn * (len + 1)) bn = w, bd = len + 1;
    } else if (e.to > start && !on_path[e.to]) {
      on_path[e.to] = true;
      cycles_from(g, start, e.to, w, len + 1, on_path, bn, bd);
      on_path[e.to] = false;
    }
  }
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(1007);
  std::uniform_int_distribution<int> nv(1, 8), weight(-6, 9);
  std::uniform_real_distribution<double> coin(0, 1);
  double worst_limit = 0;
  for (int t = 0; t < 100; ++t) {
    WeightedGraph g;
    g.vertices = static_cast<std::size_t>(nv(rng));
    for (std::size_t a = 0; a < g.vertices; ++a)
      for (std::size_t b = 0; b < g.vertices; ++b)
        if (coin(rng) < 0.35) g.edges.push_back({a, b, static_cast<double>(weight(rng))});
    g.edges.push_back({g.vertices - 1, 0, static_cast<double>(weight(rng))});
    if (g.vertices > 1) g.edges.push_back({0, g.vertices - 1, static_cast<double>(weight(rng))});
    long long bn = 0, bd = 0;
    for (std::size_t s = 0; s < g.vertices; ++s) {
      std::vector<bool> on_path(g.vertices, false);
      on_path[s] = true;
      cycles_from(g, s, s, 0, 0, on_path, bn, bd);
    }
    if (bd == 0) {
      o.require(false, "graph without cycle");
      continue;
    }
    const double exact = static_cast<double>(bn) / static_cast<double>(bd);
    const double mcm = max_cycle_mean(g).mean;
    o.require(std::abs(mcm - exact) <= 1e-9, "max_cycle_mean off on graph " + std::to_string(t));

    double wmax = 0;
    for (const auto& e : g.edges) wmax = std::max(wmax, std::abs(e.weight));
    const double spread = 2 * wmax * static_cast<double>(g.vertices);
    for (const std::size_t n : {1u, 2u, 5u, 10u, 50u, 200u, 1000u}) {
      const double pma = path_max_average(g, n);
      o.require(pma >= exact - 1e-9 && pma - exact <= spread / static_cast<double>(n) + 1e-9,
                "envelope broken at n=" + std::to_string(n));
    }
    // Along multiples of every cycle length the optimal walk gains exactly the
    // cycle mean per step, so this difference quotient equals the limit.
    std::size_t c = 1;
    for (std::size_t k = 2; k <= g.vertices; ++k) c = std::lcm(c, k);
    const std::vector<double> dn = max_walk_weights(g, 1000);
    const double limit = (dn[1000] - dn[1000 - c]) / static_cast<double>(c);
    worst_limit = std::max(worst_limit, std::abs(limit - exact));
  }
  o.require(worst_limit <= 1e-9, "DP limit error " + num(worst_limit));
  if (o.pass) o.detail = "DP limit err " + num(worst_limit);
  return o;
}

ConeParams cone_params(const MatrixSet& set, const PeriodicWord& x, double theta, const NormSpec& norm) {
  ConeParams params{theta, {}, norm};
  for (const auto& s : splitting_family(set, x, 1, 40)) params.projections.push_back(s.projection);
  return params;
}

Outcome criterion8() {
  Outcome o;
  struct Case {
    std::string name;
    MatrixSet set;
    PeriodicWord x;
    NormSpec norm;
  };
  const std::vector<Case> cases{
      {"diag", diag(), PeriodicWord({0}), NormSpec::euclidean()},
      {"upper", upper(), PeriodicWord({0}), NormSpec::euclidean()},
      {"E1-scaled", e1n(), PeriodicWord({0, 1}), NormSpec::euclidean()},
      {"E1-scaled/adapted", e1n(), PeriodicWord({0, 1}), NormSpec::adapted(e1n(), 1.0, 4)},
  };
  std::size_t checks = 0, samples = 0;
  for (const auto& c : cases) {
    const ConePropagationReport rep = cone_propagation_check(c.set, c.x, cone_params(c.set, c.x, 0.25, c.norm), 6, 4);
    o.require(rep.passed, c.name + " propagation failed");
    checks += rep.checks;

    // Containment between a long-horizon and a short-horizon projection at phase 0.
    const double theta = 0.19;
    const ProjectionPair near = finite_splitting(c.set, c.x, 1, 40).projection;
    ProjectionPair coarse = near;
    for (std::size_t n = 1; n <= 40; ++n) {
      const ProjectionPair candidate = finite_splitting(c.set, c.x, 1, n).projection;
      if (operator_norm(near.projection - candidate.projection, c.norm) <= theta) {
        coarse = candidate;
        break;
      }
    }
    const ContainmentReport cr = cone_containment_check(near, coarse, c.norm, theta, 1000, 8);
    o.require(cr.samples == 1000 && cr.violations == 0,
              c.name + " containment violations " + std::to_string(cr.violations));
    samples += cr.samples;
  }
  if (o.pass) o.detail = std::to_string(checks) + " block checks, " + std::to_string(samples) + " containment samples";
  return o;
}

Outcome criterion9() {
  Outcome o;
  const OrbitClosure z = OrbitClosure::sturmian(golden_convergents(19));
  const std::vector<std::size_t> periods{5, 8, 13, 21, 34};
  std::vector<double> eps;
  for (const auto n : periods) eps.push_back(epsilon_of_n(z, n).value);
  std::ostringstream info;
  for (std::size_t i = 0; i < eps.size(); ++i) info << periods[i] << ":" << num(eps[i]) << " ";
  for (std::size_t i = 1; i < eps.size(); ++i)
    o.require(eps[i] <= 0.5 * eps[i - 1], "ratio " + num(eps[i] / eps[i - 1]) + " at " + std::to_string(periods[i]));
  if (o.pass) o.detail = info.str();
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / ("jsrkit_accept_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::vector<std::string> outputs;
  for (const int w : {1, 2, 8}) {
    const std::string out = (dir / ("bounds_w" + std::to_string(w) + ".csv")).string();
    const std::string cmd = std::string(JSRKIT_BIN) + " bounds --input " + JSRKIT_FIXTURES +
                            "/e1.json --max-depth 14 --workers " + std::to_string(w) + " --out " + out;
    const int status = std::system(cmd.c_str());
    o.require(WIFEXITED(status) && WEXITSTATUS(status) == 0, "jsrkit failed with " + std::to_string(w) + " workers");
    outputs.push_back(read_file(out));
  }
  std::filesystem::remove_all(dir);
  o.require(outputs[0] == outputs[1] && outputs[0] == outputs[2], "CSV bytes differ");
  if (o.pass) o.detail = std::to_string(outputs[0].size()) + " identical bytes";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double limit_seconds;  // 0: no runtime bound
  };
  const std::vector<Criterion> criteria{
      {1, "E2 closed-form upper bounds", criterion1, 5},
      {2, "E1 lower bounds and adapted-norm sandwich", criterion2, 60},
      {3, "E2 convergence-rate diagnostic", criterion3, 0},
      {4, "splitting construction vs eigen oracle", criterion4, 10},
      {5, "subspace distance identity and metric axioms", criterion5, 0},
      {6, "singular-value product inequality", criterion6, 0},
      {7, "max cycle mean limits on random graphs", criterion7, 0},
      {8, "cone propagation and containment", criterion8, 0},
      {9, "golden Sturmian epsilon decay", criterion9, 30},
      {10, "worker-count determinism of bounds CSV", criterion10, 0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) {
      o.pass = false;
      o.detail += " (over " + num(c.limit_seconds) + " s)";
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d: %s [%.2f s] %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
