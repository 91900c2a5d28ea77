#pragma once

#include <stdexcept>
#include <string>

namespace dekreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (bad sizes, non-finite values, bad files).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A value lies outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A local fit has too little kernel mass at the evaluation point.
class UndefinedAtPoint : public Error {
 public:
  explicit UndefinedAtPoint(double x0, const std::string& why = "insufficient kernel weight")
      : Error("estimate undefined at x0 = " + std::to_string(x0) + ": " + why), x0_(x0) {}
  double x0() const noexcept { return x0_; }

 private:
  double x0_;
};

class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// A global parameter could not be estimated from the data.
class EstimationError : public Error {
 public:
  using Error::Error;
};

class SelectionError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

}  // namespace dekreg
