#pragma once

#include <stdexcept>
#include <string>

namespace saigo {

/// Input outside the mathematical domain of an operation (poles, violated
/// parameter inequalities, unsupported specs).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series was asked to evaluate outside its convergence regime.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Quadrature could not reach the requested tolerance. Carries the best
/// estimate obtained before giving up.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace saigo
