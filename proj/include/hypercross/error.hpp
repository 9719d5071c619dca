#pragma once

#include <stdexcept>
#include <string>

namespace hypercross {

// Base of every error raised by the library. kind() is the stable,
// machine-readable tag used by the CLI error objects.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept = 0;
};

class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

class ConfigurationError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "configuration"; }
};

// Quadrature grid cannot resolve the fastest oscillation present.
class ResolutionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "resolution"; }
};

// Certified bracket wider than the requested relative tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double value, double width)
      : Error(what), value_(value), width_(width) {}
  const char* kind() const noexcept override { return "accuracy"; }
  double value() const noexcept { return value_; }
  double width() const noexcept { return width_; }

 private:
  double value_;
  double width_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "convergence"; }
};

class DegenerateDataError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "degenerate_data"; }
};

// A computation ran out of its evaluation budget; lower_bound() is the
// value accumulated so far, which never exceeds the full result.
class PartialResultError : public Error {
 public:
  PartialResultError(const std::string& what, double lower_bound)
      : Error(what), lower_bound_(lower_bound) {}
  const char* kind() const noexcept override { return "partial_result"; }
  double lower_bound() const noexcept { return lower_bound_; }

 private:
  double lower_bound_;
};

}  // namespace hypercross
