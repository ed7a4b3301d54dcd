#pragma once

#include <stdexcept>
#include <string>

namespace coda {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data or configuration violates a documented precondition
/// (non-positive parts, unknown labels, malformed SBP, cyclic graph, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be parsed. Carries the 1-based row and column when known.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& message, std::size_t row = 0, std::size_t column = 0)
      : ValidationError(format(message, row, column)), row_(row), column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& message, std::size_t row, std::size_t column) {
    if (row == 0) return message;
    std::string out = "row " + std::to_string(row);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  std::size_t row_;
  std::size_t column_;
};

/// The input was valid but the computation cannot proceed
/// (degenerate biplot, rank-deficient design, empty group, ...).
class ComputationError : public Error {
 public:
  using Error::Error;
};

}  // namespace coda
