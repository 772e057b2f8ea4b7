#pragma once

#include <stdexcept>
#include <string>

namespace lpdisc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input: out-of-range parameters, malformed files, shape mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A configured evaluation or cell budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// An integrand or objective produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Root bracket does not enclose a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree (closed form vs quadrature, an algebraic
/// identity) disagree beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// The balance equation for c has no root in the admissible bracket.
class NoBalanceError : public Error {
 public:
  NoBalanceError(const std::string& what, double at_lower, double at_upper)
      : Error(what), at_lower_(at_lower), at_upper_(at_upper) {}
  double at_lower() const { return at_lower_; }
  double at_upper() const { return at_upper_; }

 private:
  double at_lower_;
  double at_upper_;
};

/// A sign condition of the decomposition integrals is violated.
class SignViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpdisc
