#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>

#include "jsr/errors.hpp"
#include "jsr/symbolic.hpp"

using namespace jsr;

namespace {

ShiftPoint constant_window(std::size_t symbol, std::size_t half) {
  return ShiftPoint{Word(2 * half + 1, symbol), half};
}

// Exact maximum cycle mean by enumerating every simple cycle (as a rational p/q).
struct Fraction {
  long long num;
  long long den;
};

void simple_cycles(const WeightedGraph& g, std::size_t start, std::size_t v, long long total, std::size_t len,
                   std::vector<bool>& on_path, Fraction& best) {
  for (const auto& e : g.edges) {
    if (e.from != v) continue;
    const long long w = total + static_cast<long long>(e.weight);
    if (e.to == start) {
      const long long l = static_cast<long long>(len + 1);
      if (w * best.den > best.num * l) best = {w, l};
    } else if (e.to > start && !on_path[e.to]) {
      on_path[e.to] = true;
      simple_cycles(g, start, e.to, w, len + 1, on_path, best);
      on_path[e.to] = false;
    }
  }
}

std::optional<Fraction> brute_max_cycle_mean(const WeightedGraph& g) {
  Fraction best{-1'000'000'000, 1};
  bool any = false;
  for (std::size_t s = 0; s < g.vertices; ++s) {
    std::vector<bool> on_path(g.vertices, false);
    on_path[s] = true;
    Fraction local{-1'000'000'000, 1};
    simple_cycles(g, s, s, 0, 0, on_path, local);
    if (local.num != -1'000'000'000) {
      any = true;
      if (local.num * best.den > best.num * local.den) best = local;
    }
  }
  if (!any) return std::nullopt;
  return best;
}

WeightedGraph random_graph(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nv(1, 8), weight(-5, 9);
  std::uniform_real_distribution<double> coin(0, 1);
  WeightedGraph g;
  g.vertices = static_cast<std::size_t>(nv(rng));
  for (std::size_t a = 0; a < g.vertices; ++a)
    for (std::size_t b = 0; b < g.vertices; ++b)
      if (coin(rng) < 0.3) g.edges.push_back({a, b, static_cast<double>(weight(rng))});
  // Guarantee a cycle.
  g.edges.push_back({g.vertices - 1, 0, static_cast<double>(weight(rng))});
  if (g.vertices > 1) g.edges.push_back({0, g.vertices - 1, static_cast<double>(weight(rng))});
  return g;
}

double cycle_weight_mean(const WeightedGraph& g, const std::vector<std::size_t>& cycle) {
  double total = 0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const std::size_t a = cycle[i], b = cycle[(i + 1) % cycle.size()];
    double best = -1e300;
    for (const auto& e : g.edges)
      if (e.from == a && e.to == b) best = std::max(best, e.weight);
    total += best;
  }
  return total / static_cast<double>(cycle.size());
}

}  // namespace

TEST_CASE("shift distance") {
  const auto zero = constant_window(0, 5);
  const ShiftDistance same = shift_distance(zero, zero);
  CHECK(same.is_bound);
  CHECK(same.value == std::ldexp(1.0, -5));

  ShiftPoint y = zero;
  y.symbols[y.origin + 3] = 1;
  auto d = shift_distance(zero, y);
  CHECK(d.value == 0.25);
  CHECK_FALSE(d.is_bound);
  y = zero;
  y.symbols[y.origin - 3] = 1;
  CHECK(shift_distance(zero, y).value == 0.25);

  y = zero;
  y.symbols[y.origin] = 1;
  d = shift_distance(zero, y);
  CHECK(d.value == 2.0);
  CHECK(d.agreement == -1);
}

TEST_CASE("shift distance symmetry and the ultrametric-type bound") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> bit(0, 1);
  auto random_point = [&] {
    ShiftPoint p{Word(21), 10};
    for (auto& s : p.symbols) s = static_cast<std::size_t>(bit(rng));
    return p;
  };
  for (int t = 0; t < 500; ++t) {
    // Bias towards long agreements by copying a prefix around the origin.
    ShiftPoint x = random_point(), y = random_point(), z = random_point();
    const int keep = t % 10;
    for (int i = -keep; i <= keep; ++i) y.symbols[10 + i] = z.symbols[10 + i] = x.symbols[10 + i];
    const auto xy = shift_distance(x, y), yz = shift_distance(y, z), xz = shift_distance(x, z);
    CHECK(xy.value == shift_distance(y, x).value);
    if (!xy.is_bound && !yz.is_bound && !xz.is_bound) CHECK(xz.value <= 2 * std::max(xy.value, yz.value));
  }
}

TEST_CASE("sturmian words") {
  const Word golden = sturmian_word({55, 89}, {0, 1}, 8).symbols;
  CHECK(golden == Word{0, 1, 0, 0, 1, 0, 1, 0});
  CHECK(sturmian_word({1, 2}, {0, 1}, 6).symbols == Word{0, 1, 0, 1, 0, 1});
  for (const auto& g : golden_convergents(12)) {
    for (const Rational phase : {Rational{0, 1}, Rational{1, 3}, Rational{5, 7}}) {
      CHECK(is_balanced(sturmian_word(g, phase, 400).symbols, 200));
    }
  }
  CHECK_FALSE(is_balanced(Word{0, 0, 1, 1}, 2));
  // Negative positions continue the same rotation.
  const ShiftPoint centered = sturmian_word({8, 13}, {0, 1}, 27, 13);
  for (std::int64_t i = -13; i <= 0; ++i) CHECK(centered.at(i) == centered.at(i + 13));
}

TEST_CASE("rationals") {
  CHECK(parse_rational("55/89") == Rational{55, 89});
  CHECK(parse_rational("6/8") == Rational{3, 4});
  CHECK(parse_rational("2") == Rational{2, 1});
  CHECK_THROWS_AS(parse_rational("1/0"), ValueError);
  CHECK_THROWS_AS(parse_rational("a/b"), ValueError);
  CHECK(format_rational({3, 5}) == "3/5");
}

TEST_CASE("periodic approximants") {
  const OrbitClosure z = OrbitClosure::sturmian(golden_convergents(12));
  const auto& conv = z.convergents();
  auto index_of = [&](std::int64_t q) {
    for (std::size_t k = 0; k < conv.size(); ++k)
      if (conv[k].den == q) return k;
    FAIL("missing convergent");
    return std::size_t{0};
  };
  CHECK(periodic_approximant(z, index_of(5)).cycle() == Word{0, 1, 0, 0, 1});
  CHECK(periodic_approximant(z, index_of(2)).cycle() == Word{0, 1});
  const Word fib13 = periodic_approximant(z, index_of(13)).cycle();
  CHECK(fib13 == Word{0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1});
  // Approximants from the same side of the golden ratio are nested.
  const Word fib5 = periodic_approximant(z, index_of(5)).cycle();
  const Word fib21 = periodic_approximant(z, index_of(21)).cycle();
  CHECK(std::equal(fib5.begin(), fib5.end(), fib13.begin()));
  CHECK(std::equal(fib13.begin(), fib13.end(), fib21.begin()));

  CHECK_THROWS_AS(OrbitClosure::sturmian(golden_convergents(5)), ValueError);
  CHECK_THROWS_AS(periodic_approximant(z, 40), ValueError);
}

TEST_CASE("epsilon for periodic orbit sets") {
  const OrbitClosure fixed = OrbitClosure::periodic({PeriodicWord({0})}, 2);
  for (std::size_t n = 1; n <= 4; ++n) CHECK(epsilon_of_n(fixed, n).value == 0.0);

  const OrbitClosure alt = OrbitClosure::periodic({PeriodicWord({0, 1})}, 2);
  CHECK(epsilon_of_n(alt, 1).value == 1.0);
  CHECK(epsilon_of_n(alt, 1).orbit.cycle() == Word{0});
  CHECK(epsilon_of_n(alt, 2).value == 0.0);
  CHECK(epsilon_of_n(alt, 2).exact);

  const OrbitClosure z = OrbitClosure::periodic({PeriodicWord({0, 0, 1, 0, 1})}, 2);
  double previous = 1e9;
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto e = epsilon_of_n(z, n);
    CHECK(e.value <= previous);
    previous = e.value;
  }
  CHECK(previous == 0.0);
  CHECK_FALSE(epsilon_of_n(z, 12, 100).exact);
}

TEST_CASE("epsilon for the golden Sturmian set") {
  const OrbitClosure z = OrbitClosure::sturmian(golden_convergents(19));
  double previous = 1e9;
  std::map<std::size_t, double> at;
  for (std::size_t n = 1; n <= 21; ++n) {
    const auto e = epsilon_of_n(z, n);
    CHECK_FALSE(e.exact);
    CHECK(e.value <= previous);
    CHECK(e.orbit.period() <= n);
    previous = e.value;
    at[n] = e.value;
  }
  CHECK(at[8] <= 0.5 * at[5]);
  CHECK(at[13] <= 0.5 * at[8]);
  CHECK(at[21] <= 0.5 * at[13]);
  // Eight convergents (finest period 55) cannot resolve factors of length 4n+1 = 81.
  const OrbitClosure coarse = OrbitClosure::sturmian(golden_convergents(8));
  CHECK_THROWS_AS(epsilon_of_n(coarse, 20), ValueError);
}

TEST_CASE("max cycle mean examples") {
  WeightedGraph loop{1, {{0, 0, 3}}};
  CHECK(max_cycle_mean(loop).mean == 3.0);
  CHECK(path_max_average(loop, 5) == 3.0);

  WeightedGraph two{2, {{0, 1, 1}, {1, 0, 3}, {1, 1, 1.5}}};
  const CycleMean c2 = max_cycle_mean(two);
  CHECK(c2.mean == 2.0);
  CHECK(c2.cycle.size() == 2);
  // 1 -> 1 -> 0 -> 1 -> 0 carries 1.5 + 3 + 1 + 3.
  CHECK(path_max_average(two, 4) == 2.125);

  WeightedGraph tri{3, {{0, 1, 0}, {1, 2, 0}, {2, 0, 6}}};
  CHECK(max_cycle_mean(tri).mean == 2.0);
  CHECK(path_max_average(tri, 3) == 2.0);

  WeightedGraph dag{3, {{0, 1, 1}, {1, 2, 1}}};
  CHECK_THROWS_AS(max_cycle_mean(dag), NoCycleError);
  CHECK_THROWS_AS(path_max_average(dag, 3), NoPathError);
  CHECK(path_max_average(dag, 2) == 1.0);
}

TEST_CASE("max cycle mean against brute-force cycle enumeration") {
  std::mt19937_64 rng(67);
  for (int t = 0; t < 300; ++t) {
    const WeightedGraph g = random_graph(rng);
    const auto oracle = brute_max_cycle_mean(g);
    REQUIRE(oracle.has_value());
    const double exact = static_cast<double>(oracle->num) / static_cast<double>(oracle->den);
    const CycleMean got = max_cycle_mean(g);
    CHECK(std::abs(got.mean - exact) < 1e-12);
    REQUIRE_FALSE(got.cycle.empty());
    CHECK(std::abs(cycle_weight_mean(g, got.cycle) - exact) < 1e-12);
    for (const std::size_t n : {1u, 5u, 17u, 60u}) {
      const double pma = path_max_average(g, n);
      double wmax = 0;
      for (const auto& e : g.edges) wmax = std::max(wmax, std::abs(e.weight));
      CHECK(pma >= exact - 1e-12);
      CHECK(pma - exact <= 2 * wmax * static_cast<double>(g.vertices) / static_cast<double>(n) + 1e-12);
    }
  }
}
