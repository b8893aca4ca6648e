#pragma once

#include <stdexcept>
#include <string>

namespace cocycle_lab {

// Every failure raised by the library derives from Error, so callers that
// only care about "something went wrong" can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter outside its documented range (n = 0, negative time, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// A construction would exceed a configured size cap.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Input data that parses but violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed file or JSON document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A mathematical precondition does not hold (non-PSD kernel, element in
// the fixed-point algebra, mismatched groups, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A linear system that should be consistent is not, beyond tolerance.
class NumericalRankError : public Error {
 public:
  NumericalRankError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace cocycle_lab
