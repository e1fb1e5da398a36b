#pragma once

#include <stdexcept>
#include <string>

namespace socpcq {

/// Malformed input: wrong dimensions, non-finite entries, m < 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain (e.g. a normal cone at a point outside Q_m).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The boundary reduction y0 - |y_r| is not differentiable where y_r = 0.
class SingularReductionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InfeasiblePointError : public std::runtime_error {
 public:
  InfeasiblePointError(const std::string& what, double distance)
      : std::runtime_error(what), distance_(distance) {}

  /// dist(g(x), Q_m) at the rejected point.
  double distance() const noexcept { return distance_; }

 private:
  double distance_;
};

class NumericalFailure : public std::runtime_error {
 public:
  explicit NumericalFailure(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace socpcq
