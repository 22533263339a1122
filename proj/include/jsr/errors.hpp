#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jsr {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// V + W is not a direct sum (or the splitting construction collapsed).
class DegenerateSplittingError : public Error {
 public:
  using Error::Error;
};

// Exhaustive enumeration would exceed the multiplication budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t limit, std::size_t max_feasible_depth)
      : Error(what), limit_(limit), max_feasible_depth_(max_feasible_depth) {}
  std::uint64_t limit() const { return limit_; }
  std::size_t max_feasible_depth() const { return max_feasible_depth_; }

 private:
  std::uint64_t limit_;
  std::size_t max_feasible_depth_;
};

// An exponent estimate fell in the band where "zero" vs "negative" cannot be decided.
class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, std::size_t index) : Error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class NormalizationError : public Error {
 public:
  using Error::Error;
};

class NoCycleError : public Error {
 public:
  using Error::Error;
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. line/column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise invalid numeric value.
class ValueError : public Error {
 public:
  using Error::Error;
};

// A mathematical invariant failed beyond its numerical tolerance.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace jsr
