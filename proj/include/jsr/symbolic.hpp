#pragma once

// The shift space A^Z over a finite alphabet: its metric, Sturmian (balanced)
// words from exact rational rotations, periodic approximation of invariant
// sets, and max-cycle-mean oracles on weighted digraphs.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "jsr/matrix_set.hpp"

namespace jsr {

// p/q with q > 0, kept in lowest terms.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// Parses "p/q" (or an integer). Throws ValueError on malformed text.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

// A finite view of a point of A^Z: symbols[origin] is x_0.
struct ShiftPoint {
  Word symbols;
  std::size_t origin = 0;

  // Throws DimensionError when i falls outside the window.
  std::size_t at(std::int64_t i) const;
  // Largest n with [-n, n] inside the window.
  std::size_t half_width() const;
};

// 2^{-m}, m = sup{n >= 0 : x_i = y_i for |i| <= n}, with sup of the empty set
// taken as -1 (so disagreement at the origin gives 2).
struct ShiftDistance {
  double value = 0.0;
  int agreement = -1;     // m
  bool is_bound = false;  // agreement reached the window edge: the true distance is <= value
};

ShiftDistance shift_distance(const ShiftPoint& x, const ShiftPoint& y);

// s_i = 1 - (floor((i+2) gamma + phi) - floor((i+1) gamma + phi)), exact in
// rationals. The letter 1 has frequency 1 - gamma; for gamma = 3/5 and phi = 0
// the first block is 0,1,0,0,1. Positions run from -origin to length-origin-1.
ShiftPoint sturmian_word(const Rational& gamma, const Rational& phase, std::size_t length, std::size_t origin = 0);

// Every pair of equal-length factors (length <= max_length) differs by at most
// one in the number of 1s.
bool is_balanced(const Word& word, std::size_t max_length);

// The first `count` convergents F_{k+1}/F_{k+2} of the golden-mean conjugate: 1/2, 2/3, 3/5, ...
std::vector<Rational> golden_convergents(std::size_t count);

class OrbitClosure {
 public:
  enum class Kind { periodic, sturmian };

  // Union of the given periodic orbits over the alphabet {0, ..., alphabet-1}.
  static OrbitClosure periodic(std::vector<PeriodicWord> orbits, std::size_t alphabet);
  // Orbit closure of the Sturmian word with rotation number given by its
  // convergents (at least 8, each in (0,1), denominators increasing).
  static OrbitClosure sturmian(std::vector<Rational> convergents);

  Kind kind() const { return kind_; }
  std::size_t alphabet() const { return alphabet_; }
  const std::vector<PeriodicWord>& orbits() const { return orbits_; }
  const std::vector<Rational>& convergents() const { return convergents_; }

 private:
  Kind kind_ = Kind::periodic;
  std::size_t alphabet_ = 2;
  std::vector<PeriodicWord> orbits_;
  std::vector<Rational> convergents_;
};

// The period-q_k block of the rational rotation p_k/q_k at phase 0.
PeriodicWord periodic_approximant(const OrbitClosure& z, std::size_t k);

struct EpsilonResult {
  double value = 0.0;      // max_i dist(T^i orbit, Z) for the best orbit found
  PeriodicWord orbit{{0}};
  int agreement = 0;       // min over phases of the agreement radius with Z
  bool exact = true;       // false: certified upper bound only
  std::size_t candidates = 0;
};

inline constexpr std::uint64_t kDefaultEpsilonBudget = 2'000'000;

// eps(Z, n) = min over periodic x of period <= n of max_i dist(T^i x, Z).
// Periodic Z: exhaustive over all cycles of length <= n (exact unless the
// budget on the number of candidate cycles runs out). Sturmian Z: candidates
// are the cycles given by every factor of length <= n plus the rational
// approximants; distances use the exact factor dictionary of Z up to length
// 4n+1, so the value is a certified upper bound.
// Ties keep the smallest period, then the lexicographically smallest cycle.
EpsilonResult epsilon_of_n(const OrbitClosure& z, std::size_t n,
                           std::uint64_t search_budget = kDefaultEpsilonBudget);

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  double weight = 0.0;
};

struct WeightedGraph {
  std::size_t vertices = 0;
  std::vector<Edge> edges;
};

struct CycleMean {
  double mean = 0.0;
  std::vector<std::size_t> cycle;  // vertices v_0 -> v_1 -> ... -> v_0
};

// Karp's algorithm. Throws NoCycleError on an acyclic graph.
CycleMean max_cycle_mean(const WeightedGraph& g);

// max over directed walks with exactly n edges of (total weight) / n.
// Throws NoPathError when no such walk exists.
double path_max_average(const WeightedGraph& g, std::size_t n);

// D_k = max total weight over walks with exactly k edges, for k = 0..n
// (-infinity where no walk exists).
std::vector<double> max_walk_weights(const WeightedGraph& g, std::size_t n);

}  // namespace jsr
