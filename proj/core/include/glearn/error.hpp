#pragma once

#include <stdexcept>
#include <string>

namespace glearn {

/// Precondition or dimension violation on a call into the library.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A random graph model failed to produce a connected sample within its retry budget.
class ConnectivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Surrogate construction hit a nonpositive normalizer (observed block carries no internal weight).
class DegenerateSurrogate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glearn
