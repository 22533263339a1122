#include "jsr/symbolic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <climits>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "jsr/errors.hpp"

namespace jsr {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

constexpr int kIdentical = INT_MAX;

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ValueError("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ValueError("malformed rational '" + text + "'");
    }
    return v;
  };
  const std::string_view all(text);
  if (slash == std::string::npos) return Rational::make(parse_int(all), 1);
  return Rational::make(parse_int(all.substr(0, slash)), parse_int(all.substr(slash + 1)));
}

std::string format_rational(const Rational& r) { return std::to_string(r.num) + "/" + std::to_string(r.den); }

std::size_t ShiftPoint::at(std::int64_t i) const {
  const std::int64_t j = static_cast<std::int64_t>(origin) + i;
  if (j < 0 || j >= static_cast<std::int64_t>(symbols.size())) {
    throw DimensionError("ShiftPoint: index " + std::to_string(i) + " outside the window");
  }
  return symbols[static_cast<std::size_t>(j)];
}

std::size_t ShiftPoint::half_width() const {
  if (symbols.empty() || origin >= symbols.size()) throw DimensionError("ShiftPoint: origin outside the window");
  return std::min(origin, symbols.size() - 1 - origin);
}

ShiftDistance shift_distance(const ShiftPoint& x, const ShiftPoint& y) {
  const auto reach = static_cast<std::int64_t>(std::min(x.half_width(), y.half_width()));
  ShiftDistance out;
  std::int64_t m = -1;
  while (m < reach) {
    const std::int64_t n = m + 1;
    if (x.at(n) != y.at(n) || x.at(-n) != y.at(-n)) break;
    m = n;
  }
  out.agreement = static_cast<int>(m);
  out.is_bound = (m == reach);
  out.value = std::ldexp(1.0, -out.agreement);
  return out;
}

ShiftPoint sturmian_word(const Rational& gamma, const Rational& phase, std::size_t length, std::size_t origin) {
  if (length == 0 || origin >= length) throw DimensionError("sturmian_word: origin must lie inside the window");
  const i128 den = static_cast<i128>(gamma.den) * phase.den;
  const i128 g = static_cast<i128>(gamma.num) * phase.den;
  const i128 f = static_cast<i128>(phase.num) * gamma.den;
  ShiftPoint out;
  out.origin = origin;
  out.symbols.resize(length);
  for (std::size_t j = 0; j < length; ++j) {
    const i128 i = static_cast<i128>(j) - static_cast<i128>(origin);
    const i128 hi = floor_div((i + 2) * g + f, den);
    const i128 lo = floor_div((i + 1) * g + f, den);
    out.symbols[j] = static_cast<std::size_t>(1 - (hi - lo));
  }
  return out;
}

bool is_balanced(const Word& word, std::size_t max_length) {
  std::vector<std::size_t> ones(word.size() + 1, 0);
  for (std::size_t i = 0; i < word.size(); ++i) ones[i + 1] = ones[i] + (word[i] == 1 ? 1 : 0);
  for (std::size_t len = 1; len <= std::min(max_length, word.size()); ++len) {
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t s = 0; s + len <= word.size(); ++s) {
      const std::size_t c = ones[s + len] - ones[s];
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    if (hi - lo > 1) return false;
  }
  return true;
}

std::vector<Rational> golden_convergents(std::size_t count) {
  std::vector<Rational> out;
  std::int64_t a = 1, b = 2;
  for (std::size_t k = 0; k < count; ++k) {
    out.push_back(Rational{a, b});
    const std::int64_t next = a + b;
    a = b;
    b = next;
  }
  return out;
}

OrbitClosure OrbitClosure::periodic(std::vector<PeriodicWord> orbits, std::size_t alphabet) {
  if (orbits.empty()) throw ValueError("OrbitClosure: periodic orbit list must be nonempty");
  if (alphabet == 0) throw ValueError("OrbitClosure: empty alphabet");
  for (const auto& o : orbits) {
    for (const auto s : o.cycle()) {
      if (s >= alphabet) throw ValueError("OrbitClosure: symbol outside the alphabet");
    }
  }
  OrbitClosure z;
  z.kind_ = Kind::periodic;
  z.alphabet_ = alphabet;
  z.orbits_ = std::move(orbits);
  return z;
}

OrbitClosure OrbitClosure::sturmian(std::vector<Rational> convergents) {
  if (convergents.size() < 8) throw ValueError("OrbitClosure: a Sturmian rotation needs at least 8 convergents");
  for (std::size_t k = 0; k < convergents.size(); ++k) {
    const Rational& c = convergents[k];
    if (!(c.num > 0 && c.num < c.den)) throw ValueError("OrbitClosure: convergent outside (0,1)");
    if (k > 0 && c.den <= convergents[k - 1].den) {
      throw ValueError("OrbitClosure: convergent denominators must increase");
    }
  }
  OrbitClosure z;
  z.kind_ = Kind::sturmian;
  z.alphabet_ = 2;
  z.convergents_ = std::move(convergents);
  return z;
}

PeriodicWord periodic_approximant(const OrbitClosure& z, std::size_t k) {
  if (z.kind() != OrbitClosure::Kind::sturmian) throw ValueError("periodic_approximant: Z is not Sturmian");
  if (k >= z.convergents().size()) throw ValueError("periodic_approximant: convergent index out of range");
  const Rational& g = z.convergents()[k];
  const ShiftPoint w = sturmian_word(g, Rational{0, 1}, static_cast<std::size_t>(g.den));
  return PeriodicWord(w.symbols);
}

namespace {

// Agreement radius of two periodic points: sup{m : x_i = y_i, |i| <= m}, or
// kIdentical when they coincide (agreement on a full window of length
// period(x) + period(y) forces equality).
int periodic_agreement(const Word& x, std::size_t xi, const Word& y, std::size_t yi) {
  const auto px = static_cast<std::int64_t>(x.size());
  const auto py = static_cast<std::int64_t>(y.size());
  auto sx = [&](std::int64_t i) { return x[static_cast<std::size_t>(((static_cast<std::int64_t>(xi) + i) % px + px) % px)]; };
  auto sy = [&](std::int64_t i) { return y[static_cast<std::size_t>(((static_cast<std::int64_t>(yi) + i) % py + py) % py)]; };
  const std::int64_t limit = px + py;
  for (std::int64_t n = 0; n <= limit; ++n) {
    if (sx(n) != sy(n) || sx(-n) != sy(-n)) return static_cast<int>(n - 1);
  }
  return kIdentical;
}

bool advance(Word& w, std::size_t alphabet) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (++w[i] < alphabet) return true;
    w[i] = 0;
  }
  return false;
}

struct Best {
  int score = INT_MIN;
  Word cycle;
  bool set = false;
};

void offer(Best& best, int score, const Word& cycle) {
  // Candidates arrive in (period, lexicographic) order, so only strict
  // improvements replace the incumbent.
  if (!best.set || score > best.score) {
    best.score = score;
    best.cycle = cycle;
    best.set = true;
  }
}

EpsilonResult finish(const Best& best, bool exact, std::size_t candidates) {
  EpsilonResult out;
  out.exact = exact;
  out.candidates = candidates;
  out.orbit = PeriodicWord(best.cycle);
  out.agreement = best.score;
  out.value = best.score == kIdentical ? 0.0 : std::ldexp(1.0, -best.score);
  return out;
}

EpsilonResult epsilon_periodic(const OrbitClosure& z, std::size_t n, std::uint64_t budget) {
  const std::size_t a = z.alphabet();
  std::size_t max_period = 0;
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    const auto count = static_cast<std::uint64_t>(std::pow(static_cast<double>(a), static_cast<double>(k)));
    if (total + count > budget) break;
    total += count;
    max_period = k;
  }
  if (max_period == 0) throw BudgetExceeded("epsilon_of_n: budget admits no candidate cycle", budget, 0);

  Best best;
  std::size_t candidates = 0;
  for (std::size_t k = 1; k <= max_period; ++k) {
    Word w(k, 0);
    do {
      ++candidates;
      int score = kIdentical;
      for (std::size_t i = 0; i < k && score > INT_MIN; ++i) {
        int near = -1;
        for (const auto& orbit : z.orbits()) {
          for (std::size_t j = 0; j < orbit.period(); ++j) {
            near = std::max(near, periodic_agreement(w, i, orbit.cycle(), j));
          }
        }
        score = std::min(score, near);
      }
      offer(best, score, w);
    } while (advance(w, a));
  }
  return finish(best, max_period == n, candidates);
}

// Factors of the Sturmian language of lengths 1, 3, ..., 2*cap+1.
class FactorDictionary {
 public:
  FactorDictionary(const OrbitClosure& z, int cap) : by_radius_(static_cast<std::size_t>(cap) + 1) {
    const Rational& finest = z.convergents().back();
    const auto q = static_cast<std::size_t>(finest.den);
    const std::size_t longest = 2 * static_cast<std::size_t>(cap) + 1;
    if (longest + 1 > q) {
      throw ValueError("epsilon_of_n: the finest convergent (period " + std::to_string(q) +
                       ") is too coarse for factors of length " + std::to_string(longest));
    }
    const Word cycle = sturmian_word(finest, Rational{0, 1}, q).symbols;
    std::string text;
    for (std::size_t i = 0; i < q + longest; ++i) text.push_back(static_cast<char>('0' + cycle[i % q]));
    for (int m = 0; m <= cap; ++m) {
      const std::size_t len = 2 * static_cast<std::size_t>(m) + 1;
      auto& set = by_radius_[static_cast<std::size_t>(m)];
      for (std::size_t s = 0; s < q; ++s) set.insert(text.substr(s, len));
      if (set.size() != len + 1) {
        throw InvariantViolation("epsilon_of_n: factor count " + std::to_string(set.size()) + " at length " +
                                 std::to_string(len) + " is not length + 1");
      }
    }
  }

  bool contains(int m, const std::string& block) const {
    return by_radius_[static_cast<std::size_t>(m)].count(block) > 0;
  }
  int cap() const { return static_cast<int>(by_radius_.size()) - 1; }

  // All distinct factors of a given length, sorted.
  std::set<Word> factors_of_length(const OrbitClosure& z, std::size_t len) const {
    const Rational& finest = z.convergents().back();
    const auto q = static_cast<std::size_t>(finest.den);
    const Word cycle = sturmian_word(finest, Rational{0, 1}, q).symbols;
    std::set<Word> out;
    for (std::size_t s = 0; s < q; ++s) {
      Word f(len);
      for (std::size_t i = 0; i < len; ++i) f[i] = cycle[(s + i) % q];
      out.insert(std::move(f));
    }
    return out;
  }

 private:
  std::vector<std::unordered_set<std::string>> by_radius_;
};

int sturmian_score(const FactorDictionary& dict, const Word& w) {
  const auto k = static_cast<std::int64_t>(w.size());
  int score = INT_MAX;
  for (std::int64_t i = 0; i < k; ++i) {
    int m = -1;
    std::string block;
    while (m < dict.cap()) {
      const std::int64_t r = m + 1;
      block.clear();
      for (std::int64_t j = i - r; j <= i + r; ++j) block.push_back(static_cast<char>('0' + w[static_cast<std::size_t>(((j % k) + k) % k)]));
      if (!dict.contains(static_cast<int>(r), block)) break;
      m = static_cast<int>(r);
    }
    score = std::min(score, m);
  }
  return score;
}

EpsilonResult epsilon_sturmian(const OrbitClosure& z, std::size_t n, std::uint64_t budget) {
  const int cap = static_cast<int>(2 * n);
  const FactorDictionary dict(z, cap);

  std::vector<std::set<Word>> by_period(n + 1);
  for (std::size_t k = 1; k <= n; ++k) by_period[k] = dict.factors_of_length(z, k);
  for (std::size_t j = 0; j < z.convergents().size(); ++j) {
    const auto q = static_cast<std::size_t>(z.convergents()[j].den);
    if (q <= n) by_period[q].insert(periodic_approximant(z, j).cycle());
  }

  Best best;
  std::size_t candidates = 0;
  bool complete = true;
  for (std::size_t k = 1; k <= n && complete; ++k) {
    for (const auto& w : by_period[k]) {
      if (candidates >= budget) {
        complete = false;
        break;
      }
      ++candidates;
      offer(best, sturmian_score(dict, w), w);
    }
  }
  (void)complete;
  return finish(best, false, candidates);
}

}  // namespace

EpsilonResult epsilon_of_n(const OrbitClosure& z, std::size_t n, std::uint64_t search_budget) {
  if (n == 0) throw ValueError("epsilon_of_n: n must be >= 1");
  if (z.kind() == OrbitClosure::Kind::periodic) return epsilon_periodic(z, n, search_budget);
  return epsilon_sturmian(z, n, search_budget);
}

namespace {

void validate_graph(const WeightedGraph& g) {
  if (g.vertices == 0) throw ValueError("WeightedGraph: no vertices");
  for (const auto& e : g.edges) {
    if (e.from >= g.vertices || e.to >= g.vertices) throw ValueError("WeightedGraph: edge endpoint out of range");
    if (!std::isfinite(e.weight)) throw ValueError("WeightedGraph: non-finite edge weight");
  }
}

constexpr double kNone = -std::numeric_limits<double>::infinity();

// table[k][v]: best weight of a k-edge walk ending at v; pred[k][v]: its last edge.
struct WalkTable {
  std::vector<std::vector<double>> best;
  std::vector<std::vector<std::size_t>> pred;
};

WalkTable walk_table(const WeightedGraph& g, std::size_t n) {
  WalkTable t;
  t.best.assign(n + 1, std::vector<double>(g.vertices, kNone));
  t.pred.assign(n + 1, std::vector<std::size_t>(g.vertices, SIZE_MAX));
  std::fill(t.best[0].begin(), t.best[0].end(), 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const Edge& edge = g.edges[e];
      const double from = t.best[k - 1][edge.from];
      if (from == kNone) continue;
      const double cand = from + edge.weight;
      if (cand > t.best[k][edge.to]) {
        t.best[k][edge.to] = cand;
        t.pred[k][edge.to] = e;
      }
    }
  }
  return t;
}

}  // namespace

CycleMean max_cycle_mean(const WeightedGraph& g) {
  validate_graph(g);
  const std::size_t n = g.vertices;
  const WalkTable t = walk_table(g, n);

  double lambda = kNone;
  for (std::size_t v = 0; v < n; ++v) {
    if (t.best[n][v] == kNone) continue;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (t.best[k][v] == kNone) continue;
      worst = std::min(worst, (t.best[n][v] - t.best[k][v]) / static_cast<double>(n - k));
    }
    lambda = std::max(lambda, worst);
  }
  if (lambda == kNone) throw NoCycleError("max_cycle_mean: the graph has no directed cycle");

  // Witness: the best simple cycle lying on any optimal n-edge walk.
  CycleMean out;
  out.mean = kNone;
  for (std::size_t end = 0; end < n; ++end) {
    if (t.best[n][end] == kNone) continue;
    std::vector<std::size_t> walk(n + 1);
    std::vector<double> weight(n, 0.0);
    walk[n] = end;
    for (std::size_t k = n; k > 0; --k) {
      const Edge& e = g.edges[t.pred[k][walk[k]]];
      walk[k - 1] = e.from;
      weight[k - 1] = e.weight;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      std::vector<bool> seen(n, false);
      for (std::size_t j = i; j < n; ++j) {
        if (seen[walk[j]]) break;
        seen[walk[j]] = true;
        sum += weight[j];
        if (walk[j + 1] == walk[i]) {
          const double mean = sum / static_cast<double>(j - i + 1);
          if (mean > out.mean) {
            out.mean = mean;
            out.cycle.assign(walk.begin() + static_cast<std::ptrdiff_t>(i),
                             walk.begin() + static_cast<std::ptrdiff_t>(j + 1));
          }
        }
      }
    }
    if (out.mean >= lambda - 1e-9 * std::max(1.0, std::abs(lambda))) break;
  }
  out.mean = lambda;
  return out;
}

std::vector<double> max_walk_weights(const WeightedGraph& g, std::size_t n) {
  validate_graph(g);
  std::vector<double> cur(g.vertices, 0.0), next(g.vertices);
  std::vector<double> out{0.0};
  for (std::size_t k = 1; k <= n; ++k) {
    std::fill(next.begin(), next.end(), kNone);
    for (const auto& e : g.edges) {
      if (cur[e.from] != kNone) next[e.to] = std::max(next[e.to], cur[e.from] + e.weight);
    }
    cur.swap(next);
    out.push_back(*std::max_element(cur.begin(), cur.end()));
  }
  return out;
}

double path_max_average(const WeightedGraph& g, std::size_t n) {
  if (n == 0) throw ValueError("path_max_average: n must be >= 1");
  const double total = max_walk_weights(g, n).back();
  if (total == kNone) throw NoPathError("path_max_average: no walk with " + std::to_string(n) + " edges");
  return total / static_cast<double>(n);
}

}  // namespace jsr
