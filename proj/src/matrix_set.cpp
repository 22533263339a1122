#include "jsr/matrix_set.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "jsr/errors.hpp"

namespace jsr {

MatrixSet::MatrixSet(std::vector<ComplexMatrix> matrices, std::vector<std::string> labels)
    : matrices_(std::move(matrices)), labels_(std::move(labels)) {
  if (matrices_.empty()) throw DimensionError("MatrixSet: at least one matrix is required");
  const auto d = matrices_.front().rows();
  if (d == 0) throw DimensionError("MatrixSet: dimension must be >= 1");
  if (labels_.size() > matrices_.size()) throw DimensionError("MatrixSet: more labels than matrices");
  for (std::size_t i = labels_.size(); i < matrices_.size(); ++i) labels_.push_back("A" + std::to_string(i));
  for (std::size_t i = 0; i < matrices_.size(); ++i) {
    const auto& m = matrices_[i];
    if (m.rows() != d || m.cols() != d) {
      throw DimensionError("MatrixSet: matrix '" + labels_[i] + "' is " + std::to_string(m.rows()) + "x" +
                           std::to_string(m.cols()) + ", expected " + std::to_string(d) + "x" +
                           std::to_string(d));
    }
    require_finite(m, labels_[i].c_str());
  }
}

MatrixSet MatrixSet::scaled(double factor) const {
  std::vector<ComplexMatrix> out;
  out.reserve(matrices_.size());
  for (const auto& m : matrices_) out.push_back(factor * m);
  return MatrixSet(std::move(out), labels_);
}

ComplexMatrix product_of_word(const MatrixSet& set, std::span<const std::size_t> word) {
  ComplexMatrix p = identity(set.dim());
  for (std::size_t idx : word) {
    if (idx >= set.size()) {
      throw DimensionError("product_of_word: index " + std::to_string(idx) + " out of range for a set of " +
                           std::to_string(set.size()) + " matrices");
    }
    p = set[idx] * p;
  }
  return p;
}

std::string format_word(std::span<const std::size_t> word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += '-';
    out += std::to_string(word[i]);
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find_first_of("-,", pos), text.size());
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc() || ptr != text.data() + end || end == pos) {
      throw ValueError("parse_word: malformed word '" + std::string(text) + "'");
    }
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

bool lexicographically_less(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

PeriodicWord::PeriodicWord(Word cycle) : cycle_(std::move(cycle)) {
  if (cycle_.empty()) throw DimensionError("PeriodicWord: the cycle must be nonempty");
}

std::size_t PeriodicWord::symbol(std::int64_t i) const {
  const auto r = static_cast<std::int64_t>(cycle_.size());
  return cycle_[static_cast<std::size_t>(((i % r) + r) % r)];
}

PeriodicWord PeriodicWord::shifted(std::int64_t k) const {
  Word out(cycle_.size());
  for (std::size_t i = 0; i < cycle_.size(); ++i) out[i] = symbol(static_cast<std::int64_t>(i) + k);
  return PeriodicWord(std::move(out));
}

Word PeriodicWord::prefix(std::size_t n) const {
  Word out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = cycle_[i % cycle_.size()];
  return out;
}

void PeriodicWord::validate(const MatrixSet& set) const {
  for (std::size_t s : cycle_) {
    if (s >= set.size()) {
      throw DimensionError("PeriodicWord: symbol " + std::to_string(s) + " out of range for a set of " +
                           std::to_string(set.size()) + " matrices");
    }
  }
}

ComplexMatrix cocycle(const MatrixSet& set, const PeriodicWord& x, std::size_t n) {
  x.validate(set);
  ComplexMatrix p = identity(set.dim());
  for (std::size_t i = 0; i < n; ++i) p = set[x.cycle()[i % x.period()]] * p;
  return p;
}

std::uint64_t enumeration_cost(std::size_t alphabet, std::size_t depth) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t level = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    if (level > kMax / std::max<std::uint64_t>(alphabet, 1)) return kMax;
    level *= alphabet;
    if (total > kMax - level) return kMax;
    total += level;
  }
  return total;
}

std::size_t max_depth_within(std::size_t alphabet, std::uint64_t budget) {
  if (alphabet <= 1) return static_cast<std::size_t>(budget);
  std::size_t depth = 0;
  while (enumeration_cost(alphabet, depth + 1) <= budget) ++depth;
  return depth;
}

void check_budget(std::size_t alphabet, std::size_t depth, std::uint64_t budget, std::string_view context) {
  const std::uint64_t cost = enumeration_cost(alphabet, depth);
  if (cost > budget) {
    throw BudgetExceeded(std::string(context) + ": depth " + std::to_string(depth) + " needs " +
                             std::to_string(cost) + " multiplications, budget limit is " +
                             std::to_string(budget) + " (max feasible depth " +
                             std::to_string(max_depth_within(alphabet, budget)) + ")",
                         budget, max_depth_within(alphabet, budget));
  }
}

}  // namespace jsr
