#include "jsr/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

struct Best {
  bool set = false;
  double value = 0.0;
  Word word;

  void consider(double v, const Word& w) {
    if (!set || v > value || (v == value && lexicographically_less(w, word))) {
      set = true;
      value = v;
      word = w;
    }
  }
  void merge(const Best& other) {
    if (other.set) consider(other.value, other.word);
  }
};

struct Accumulator {
  std::vector<Best> plus;
  std::vector<Best> minus;
  // Words at or above the per-level tie thresholds (second pass only).
  std::vector<std::vector<Word>> plus_ties;
  std::vector<std::vector<Word>> minus_ties;

  explicit Accumulator(std::size_t depth)
      : plus(depth + 1), minus(depth + 1), plus_ties(depth + 1), minus_ties(depth + 1) {}

  void merge(const Accumulator& other) {
    for (std::size_t k = 0; k < plus.size(); ++k) {
      plus[k].merge(other.plus[k]);
      minus[k].merge(other.minus[k]);
      plus_ties[k].insert(plus_ties[k].end(), other.plus_ties[k].begin(), other.plus_ties[k].end());
      minus_ties[k].insert(minus_ties[k].end(), other.minus_ties[k].begin(), other.minus_ties[k].end());
    }
  }
};

// Which quantities to evaluate at each level, and (for the tie pass) the
// thresholds above which words are recorded.
struct WalkPlan {
  std::size_t depth = 0;
  const NormSpec* norm = nullptr;
  std::vector<char> plus;
  std::vector<char> minus;
  std::vector<double> plus_threshold;   // NaN: do not record ties
  std::vector<double> minus_threshold;
};

double normalized_root(double x, std::size_t k) { return std::pow(x, 1.0 / static_cast<double>(k)); }

class Visitor {
 public:
  Visitor(const WalkPlan& plan, Accumulator& acc) : plan_(plan), acc_(acc) {}

  void operator()(const Word& w, const ComplexMatrix& p) {
    const std::size_t k = w.size();
    if (plan_.plus[k]) {
      const double v = normalized_root(plan_.norm->operator_norm(p), k);
      acc_.plus[k].consider(v, w);
      if (!std::isnan(plan_.plus_threshold[k]) && v >= plan_.plus_threshold[k]) acc_.plus_ties[k].push_back(w);
    }
    if (plan_.minus[k]) {
      const double v = normalized_root(spectral_radius(p), k);
      acc_.minus[k].consider(v, w);
      if (!std::isnan(plan_.minus_threshold[k]) && v >= plan_.minus_threshold[k]) acc_.minus_ties[k].push_back(w);
    }
  }

 private:
  const WalkPlan& plan_;
  Accumulator& acc_;
};

struct Task {
  Word prefix;
  ComplexMatrix product;
};

Accumulator walk(const MatrixSet& set, const WalkPlan& plan, std::size_t workers) {
  const std::size_t depth = plan.depth;
  workers = std::max<std::size_t>(workers, 1);

  // Nodes up to `split` are visited here; each depth-`split` node seeds a task.
  std::size_t split = 0;
  if (workers > 1) {
    std::uint64_t level = 1;
    while (split < depth && level < 4 * workers) {
      level *= set.size();
      ++split;
    }
  }

  Accumulator head(depth);
  std::vector<Task> tasks;
  if (split == 0) {
    tasks.push_back({Word{}, identity(set.dim())});
  } else {
    Visitor visit(plan, head);
    for_each_product(set, split, [&](const Word& w, const ComplexMatrix& p) {
      visit(w, p);
      if (w.size() == split) tasks.push_back({w, p});
    });
  }

  std::vector<Accumulator> results(tasks.size(), Accumulator(depth));
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      Visitor visit(plan, results[t]);
      Word word = tasks[t].prefix;
      for_each_extension(set, word, tasks[t].product, depth, visit);
    }
  };
  if (workers == 1 || tasks.size() == 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < std::min(workers, tasks.size()); ++i) pool.emplace_back(run);
  }

  // Task order is lexicographic, so concatenated tie lists stay sorted.
  for (const auto& r : results) head.merge(r);
  for (std::size_t k = 0; k <= depth; ++k) {
    auto by_lex = [](const Word& a, const Word& b) { return lexicographically_less(a, b); };
    std::sort(head.plus_ties[k].begin(), head.plus_ties[k].end(), by_lex);
    std::sort(head.minus_ties[k].begin(), head.minus_ties[k].end(), by_lex);
  }
  return head;
}

WalkPlan make_plan(std::size_t depth, const NormSpec* norm) {
  WalkPlan plan;
  plan.depth = depth;
  plan.norm = norm;
  plan.plus.assign(depth + 1, 0);
  plan.minus.assign(depth + 1, 0);
  plan.plus_threshold.assign(depth + 1, std::numeric_limits<double>::quiet_NaN());
  plan.minus_threshold.assign(depth + 1, std::numeric_limits<double>::quiet_NaN());
  return plan;
}

constexpr double kTieTolerance = 1e-12;

LevelMaximum single_level(const MatrixSet& set, std::size_t n, const NormSpec* norm,
                          const EnumerationOptions& options, bool plus) {
  if (n == 0) throw std::invalid_argument("bound sequences are defined for n >= 1");
  check_budget(set.size(), n, options.budget, plus ? "rho_plus_n" : "rho_minus_n");
  WalkPlan plan = make_plan(n, norm);
  (plus ? plan.plus : plan.minus)[n] = 1;
  Accumulator acc = walk(set, plan, options.workers);
  const Best& best = plus ? acc.plus[n] : acc.minus[n];
  LevelMaximum out{best.value, best.word, {}};
  if (options.collect_ties) {
    (plus ? plan.plus_threshold : plan.minus_threshold)[n] = best.value * (1.0 - kTieTolerance);
    Accumulator again = walk(set, plan, options.workers);
    out.ties = plus ? again.plus_ties[n] : again.minus_ties[n];
  }
  return out;
}

}  // namespace

LevelMaximum rho_plus_n(const MatrixSet& set, std::size_t n, const NormSpec& norm,
                        const EnumerationOptions& options) {
  return single_level(set, n, &norm, options, true);
}

LevelMaximum rho_minus_n(const MatrixSet& set, std::size_t n, const EnumerationOptions& options) {
  return single_level(set, n, nullptr, options, false);
}

BoundsReport sandwich(const MatrixSet& set, std::size_t max_depth, const NormSpec& norm,
                      const EnumerationOptions& options) {
  if (max_depth == 0) throw std::invalid_argument("sandwich: max_depth must be >= 1");
  BoundsReport report;
  report.norm_used = norm.describe();
  report.requested_depth = max_depth;

  std::size_t depth = max_depth;
  if (enumeration_cost(set.size(), max_depth) > options.budget) {
    depth = max_depth_within(set.size(), options.budget);
    report.truncated = true;
    if (depth == 0) return report;
  }
  report.multiplications = enumeration_cost(set.size(), depth);

  WalkPlan plan = make_plan(depth, &norm);
  for (std::size_t k = 1; k <= depth; ++k) plan.plus[k] = plan.minus[k] = 1;
  const Accumulator acc = walk(set, plan, options.workers);

  double best_lower = 0.0;
  double best_upper = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= depth; ++k) {
    BoundsRow row;
    row.n = k;
    row.rho_plus = acc.plus[k].value;
    row.rho_minus = acc.minus[k].value;
    row.argmax_plus = acc.plus[k].word;
    row.argmax_minus = acc.minus[k].word;
    best_lower = std::max(best_lower, row.rho_minus);
    best_upper = std::min(best_upper, row.rho_plus);
    row.best_lower = best_lower;
    row.best_upper = best_upper;
    row.gap = best_upper - best_lower;
    if (best_lower > best_upper * (1.0 + 1e-9)) {
      throw InvariantViolation("sandwich: best_lower " + std::to_string(best_lower) + " exceeds best_upper " +
                               std::to_string(best_upper) + " at n = " + std::to_string(k));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

PrunedBounds pruned_bounds(const MatrixSet& set, double delta, std::size_t max_depth, std::uint64_t budget) {
  if (!(delta > 0.0)) throw std::invalid_argument("pruned_bounds: delta must be positive");
  if (max_depth == 0) throw std::invalid_argument("pruned_bounds: max_depth must be >= 1");

  struct Node {
    Word word;
    ComplexMatrix product;
    double normalized = 0.0;  // ||A_w||^{1/|w|}
    double best_cut = 0.0;    // min over prefixes of the same quantity
  };

  PrunedBounds out;
  double threshold = 0.0;
  double upper = std::numeric_limits<double>::infinity();

  std::vector<Node> frontier;
  auto admit = [&](Node node) {
    const double r = normalized_root(spectral_radius(node.product), node.word.size());
    if (r > out.lower || out.lower_witness.empty()) {
      out.lower = r;
      out.lower_witness = node.word;
    }
    frontier.push_back(std::move(node));
  };
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double nrm = euclidean_operator_norm(set[i]);
    admit({Word{i}, set[i], nrm, nrm});
  }
  out.products = set.size();

  for (std::size_t k = 1;; ++k) {
    out.depth_reached = k;
    threshold = std::max(threshold, out.lower * (1.0 - delta / 4.0));
    std::erase_if(frontier, [&](const Node& n) { return n.normalized <= threshold; });

    double level_bound = threshold;
    for (const auto& n : frontier) level_bound = std::max(level_bound, n.best_cut);
    upper = std::min(upper, level_bound);
    out.upper = std::max(upper, out.lower);
    if (out.upper - out.lower <= delta) {
      out.conclusive = true;
      return out;
    }
    if (k == max_depth || frontier.empty()) return out;
    if (out.products + frontier.size() * set.size() > budget) return out;

    std::vector<Node> parents = std::move(frontier);
    frontier.clear();
    for (const auto& parent : parents) {
      for (std::size_t i = 0; i < set.size(); ++i) {
        Node child;
        child.word = parent.word;
        child.word.push_back(i);
        child.product = set[i] * parent.product;
        child.normalized = normalized_root(euclidean_operator_norm(child.product), k + 1);
        child.best_cut = std::min(parent.best_cut, child.normalized);
        admit(std::move(child));
      }
    }
    out.products += parents.size() * set.size();
  }
}

RateFit fit_power_law(std::span<const double> n, std::span<const double> gap, double tail_fraction) {
  if (n.size() != gap.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (n.size() < 6) throw std::invalid_argument("fit_rate: at least 6 rows are required");
  if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
    throw std::invalid_argument("fit_rate: tail_fraction must lie in (0, 1)");
  }
  const std::size_t count = std::max<std::size_t>(
      3, static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n.size()))));
  const std::size_t start = n.size() - std::min(count, n.size());

  RateFit fit;
  fit.points = n.size() - start;
  for (std::size_t i = start; i < n.size(); ++i) {
    if (!(gap[i] > 1e-13)) {
      fit.exact_convergence = true;
      return fit;
    }
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const double m = static_cast<double>(fit.points);
  for (std::size_t i = start; i < n.size(); ++i) {
    const double x = std::log(n[i]);
    const double y = std::log(gap[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / m;
  const double vy = syy - sy * sy / m;
  const double cxy = sxy - sx * sy / m;
  const double slope = cxy / vx;
  fit.r_hat = -slope;
  fit.r_squared = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return fit;
}

RateFit fit_rate(const BoundsReport& report, double tail_fraction) {
  std::vector<double> n;
  std::vector<double> gap;
  for (const auto& row : report.rows) {
    n.push_back(static_cast<double>(row.n));
    gap.push_back(row.gap);
  }
  return fit_power_law(n, gap, tail_fraction);
}

}  // namespace jsr
