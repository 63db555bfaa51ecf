#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace localecd {

/// Node, community and coordinate indices.
using Index = std::uint32_t;

/// One stored coordinate of a sparse vector.
struct Entry {
  Index index;
  double value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Sparse vector with entries sorted by strictly increasing index.
using SparseVector = std::vector<Entry>;

/// Malformed input; carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed input that violates a domain rule (e.g. a negative weight).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace localecd
