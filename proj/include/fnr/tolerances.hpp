#pragma once

namespace fnr {

/// One place for every numeric threshold used by the library, the CLI and
/// the test suites.
struct Tolerances {
  /// Algebraic identities: branch continuity, circle equations, axis values.
  double algebraic = 1e-12;
  /// Envelope points against the implicit sextic, relative to the largest
  /// monomial at the point.
  double envelope = 1e-8;
  /// Half-width of the Boundary band used by contains().
  double boundary = 1e-9;
  /// Rayleigh-quotient residual for the extremal eigensolver.
  double eigen_residual = 1e-11;
  /// Budget for closed form minus compression at the largest truncation.
  double convergence = 5e-3;
  /// Slack for support-line and convexity checks on sampled boundaries.
  double geometric = 1e-10;
};

inline constexpr Tolerances default_tolerances{};

}  // namespace fnr
