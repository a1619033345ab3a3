#pragma once

#include <stdexcept>
#include <string>

namespace cpnf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Order or argument outside the supported range.
class RangeError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A result that is finite mathematically but not representable.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// Iterative procedure or quadrature that did not reach its tolerance.
/// Carries the best estimate available when it gave up.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& what, double partial_value)
      : Error(what), partial_value_(partial_value) {}
  double partial_value() const noexcept { return partial_value_; }

private:
  double partial_value_;
};

/// Evaluation exactly on a pole of the fiber dispersion denominator.
class PoleError : public Error {
public:
  PoleError(const std::string& what, int order, double beta)
      : Error(what), order_(order), beta_(beta) {}
  int order() const noexcept { return order_; }
  double beta() const noexcept { return beta_; }

private:
  int order_;
  double beta_;
};

/// Integration contour inconsistent with the singularities it must avoid.
class ContourError : public Error {
public:
  using Error::Error;
};

class LookupError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent input data file.
class DataError : public Error {
public:
  using Error::Error;
};

}  // namespace cpnf
