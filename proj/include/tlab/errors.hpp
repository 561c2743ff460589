#pragma once

#include <stdexcept>
#include <string>

namespace tlab {

/// Evaluation outside the set where a closed form is defined (e.g. |x1| >= R).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or inconsistent arguments.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unrecoverable linear-algebra failure inside a solve.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or I/O failure.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tlab
