#pragma once

#include <stdexcept>
#include <string>

namespace archlab {

// Base of every error raised by the library. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of a functional (negative time, q >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Conditioning on an event of zero probability (or exhausted survival).
class ConditioningError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed textual input: distribution spec strings, CSV rows.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Iterative method gave up; carries the best estimate reached.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate)
      : Error(what), best_estimate_(best_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }

 private:
  double best_estimate_;
};

}  // namespace archlab
