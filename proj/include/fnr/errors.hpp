#pragma once

#include <stdexcept>
#include <string>

namespace fnr {

/// Raised where r = 0 collapses the two-regime boundary (switching cosine
/// equals 1) or makes the leading coefficients of the t-system vanish.
class DegenerateRadius : public std::domain_error {
 public:
  explicit DegenerateRadius(const std::string& what) : std::domain_error(what) {}
};

/// Raised by the extremal eigensolver when the Rayleigh-quotient residual
/// does not reach the requested threshold.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what + " (iterations=" + std::to_string(iterations) +
                           ", residual=" + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}

  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

}  // namespace fnr
