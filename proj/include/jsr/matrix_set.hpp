#pragma once

// Finite matrix sets, words over them, periodic points of the shift and the
// product cocycle.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "jsr/linalg.hpp"

namespace jsr {

// Index sequence into a MatrixSet. Position 0 is applied first.
using Word = std::vector<std::size_t>;

class MatrixSet {
 public:
  // Throws DimensionError on an empty list or mismatched shapes, ValueError on
  // non-finite entries. Missing labels default to "A0", "A1", ...
  explicit MatrixSet(std::vector<ComplexMatrix> matrices, std::vector<std::string> labels = {});

  std::size_t dim() const { return static_cast<std::size_t>(matrices_.front().rows()); }
  std::size_t size() const { return matrices_.size(); }
  const ComplexMatrix& operator[](std::size_t i) const { return matrices_[i]; }
  const std::vector<ComplexMatrix>& matrices() const { return matrices_; }
  const std::vector<std::string>& labels() const { return labels_; }

  MatrixSet scaled(double factor) const;

 private:
  std::vector<ComplexMatrix> matrices_;
  std::vector<std::string> labels_;
};

// A_{w[n-1]} ... A_{w[0]}; the empty word gives the identity.
ComplexMatrix product_of_word(const MatrixSet& set, std::span<const std::size_t> word);

// "0-1-1"; the empty word is "".
std::string format_word(std::span<const std::size_t> word);
Word parse_word(std::string_view text);

// Lexicographic comparison on index sequences (position 0 most significant).
bool lexicographically_less(std::span<const std::size_t> a, std::span<const std::size_t> b);

// The point x of A^Z with x_i = cycle[i mod r].
class PeriodicWord {
 public:
  explicit PeriodicWord(Word cycle);

  std::size_t period() const { return cycle_.size(); }
  const Word& cycle() const { return cycle_; }
  std::size_t symbol(std::int64_t i) const;

  // T^k x (negative k allowed: rotation of the cycle).
  PeriodicWord shifted(std::int64_t k) const;

  // (x_0, ..., x_{n-1}).
  Word prefix(std::size_t n) const;

  // Throws DimensionError if a symbol is not a valid index for `set`.
  void validate(const MatrixSet& set) const;

  bool operator==(const PeriodicWord&) const = default;

 private:
  Word cycle_;
};

// The cocycle A(x, n) = A(x_{n-1}) ... A(x_0).
ComplexMatrix cocycle(const MatrixSet& set, const PeriodicWord& x, std::size_t n);

inline constexpr std::uint64_t kDefaultMultiplicationBudget = 20'000'000;

// Number of matrix multiplications needed to enumerate every word of length
// 1..depth over an alphabet of the given size (saturating).
std::uint64_t enumeration_cost(std::size_t alphabet, std::size_t depth);

// Largest depth whose enumeration cost fits the budget.
std::size_t max_depth_within(std::size_t alphabet, std::uint64_t budget);

// Throws BudgetExceeded naming the limit when enumeration_cost exceeds budget.
void check_budget(std::size_t alphabet, std::size_t depth, std::uint64_t budget,
                  std::string_view context);

// Depth-first walk over every nonempty word of length <= max_depth extending
// `word`, in lexicographic order; visit(word, product) sees each extension
// once. Products are built by left-multiplying the parent's product, so the
// value for a given word does not depend on where the walk started.
template <class Visit>
void for_each_extension(const MatrixSet& set, Word& word, const ComplexMatrix& product,
                        std::size_t max_depth, Visit& visit) {
  if (word.size() >= max_depth) return;
  for (std::size_t i = 0; i < set.size(); ++i) {
    word.push_back(i);
    const ComplexMatrix next = set[i] * product;
    visit(static_cast<const Word&>(word), next);
    for_each_extension(set, word, next, max_depth, visit);
    word.pop_back();
  }
}

template <class Visit>
void for_each_product(const MatrixSet& set, std::size_t max_depth, Visit&& visit) {
  Word word;
  const ComplexMatrix start = identity(set.dim());
  for_each_extension(set, word, start, max_depth, visit);
}

}  // namespace jsr
