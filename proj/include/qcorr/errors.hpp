#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcorr {

/// Raised when an iterative routine fails numerically. When the failure
/// happened mid-minimization, best_value() carries the best value seen.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& msg)
      : std::runtime_error(msg), best_(std::nan("")) {}
  numeric_error(const std::string& msg, double best_value)
      : std::runtime_error(msg), best_(best_value) {}

  double best_value() const noexcept { return best_; }
  bool has_best_value() const noexcept { return !std::isnan(best_); }

 private:
  double best_;
};

/// Raised when a matrix required to be positive semidefinite has an
/// eigenvalue below the admissible tolerance.
class not_positive_semidefinite : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qcorr
