#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dvfs {

/// Base for every error raised by the planner library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A clock tuple or model coefficient violates its invariants.
class InvalidConfig : public Error {
 public:
  using Error::Error;
};

/// No clock configuration matches the requested frequency.
class NoConfig : public Error {
 public:
  using Error::Error;
};

/// Decoupling requested on a layer kind that does not support it.
class UnsupportedGranularity : public Error {
 public:
  using Error::Error;
};

class EmptyProfile : public Error {
 public:
  using Error::Error;
};

/// Malformed input; `line()` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The same (layer, g, hfo) key appears with different measurements.
class ConflictError : public Error {
 public:
  ConflictError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidProblem : public Error {
 public:
  using Error::Error;
};

}  // namespace dvfs
