#pragma once

#include <stdexcept>
#include <string>

namespace twophase {

/// Bad input to a library call (sizes, parameter ranges, infeasible densities).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed mesh or indicator file; the message carries the line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Linear or eigen solver failed to converge, or assembly hit a degenerate cell.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a closed-form map (1D rate theory).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace twophase
