#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace bernergy {

// Root of every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (t < 0, t <= 1 for
// the arccosh series, non-finite coordinates, ...).
class domain_error : public error {
 public:
  using error::error;
};

// Points or measures living in different spaces, or a kernel applied to a
// space it is not defined on.
class space_mismatch : public error {
 public:
  using error::error;
};

// A measure fails one of the linear/moment constraints an inner product
// requires. `condition` names the constraint ("mass", "mean", "centered_power:2",
// ...) and `magnitude` is the offending value.
class constraint_error : public error {
 public:
  constraint_error(std::string condition, double magnitude, double tolerance, const std::string& what)
      : error(what), condition_(std::move(condition)), magnitude_(magnitude), tolerance_(tolerance) {}

  const std::string& condition() const noexcept { return condition_; }
  double magnitude() const noexcept { return magnitude_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  std::string condition_;
  double magnitude_;
  double tolerance_;
};

// Adaptive quadrature could not reach the requested tolerance.
class quadrature_error : public error {
 public:
  quadrature_error(double estimate, double abs_error, const std::string& what)
      : error(what), estimate_(estimate), abs_error_(abs_error) {}

  double estimate() const noexcept { return estimate_; }
  double abs_error() const noexcept { return abs_error_; }

 private:
  double estimate_;
  double abs_error_;
};

}  // namespace bernergy
