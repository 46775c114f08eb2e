#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sigmaflow {

/// Precondition on an argument was violated (bad index, bad dimension, bad k).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input lies outside the domain where the operation is defined
/// (non-positive matrix, degenerate metric).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A metric field lost positivity. Carries the flat grid index of the worst point.
class DegenerateMetric : public DomainError {
 public:
  DegenerateMetric(const std::string& what, std::size_t point, double min_eigenvalue)
      : DomainError(what), point_(point), min_eigenvalue_(min_eigenvalue) {}

  std::size_t point() const noexcept { return point_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  std::size_t point_;
  double min_eigenvalue_;
};

/// The time stepper exhausted its step-halving budget.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A monitored flow invariant failed while running in strict mode.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sigmaflow
