#pragma once

#include <stdexcept>
#include <string>

namespace ldpustat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (shape, range, symmetry).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input is well-formed but degenerate (e.g. the empty graph for scaled adjacency).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// An exhaustive routine was asked to exceed its configured size limit.
class LimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace ldpustat
