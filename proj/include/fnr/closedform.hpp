#pragma once

// Closed-form geometry of the numerical range of the Foguel operator F_{aI}
// with r = |a|/2: support function, admissible-lambda intervals, envelope
// points, the sampled boundary, membership and the gap to the conjectured
// ellipse.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fnr/arc.hpp"
#include "fnr/errors.hpp"
#include "fnr/parallel.hpp"
#include "fnr/tolerances.hpp"

namespace fnr {

inline constexpr double pi = std::numbers::pi;

inline void require_radius(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be a finite nonnegative real");
}

inline void require_positive_radius(double r, std::string_view who) {
  require_radius(r);
  if (r == 0.0)
    throw DegenerateRadius(std::string(who) +
                           ": r = 0 gives W(F_0) = open unit disk; its boundary is the unit circle");
}

struct FoguelParams {
  double r = 0.0;
  std::optional<std::complex<double>> a;

  static FoguelParams from_r(double r) {
    require_radius(r);
    return {r, std::nullopt};
  }
  static FoguelParams from_a(std::complex<double> a) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw std::invalid_argument("a must be finite");
    return {std::abs(a) / 2.0, a};
  }
};

/// The line {e^{i theta}(offset + i s) : s real}, i.e.
/// x cos(theta) + y sin(theta) = offset.
struct SupportLine {
  double theta = 0.0;
  double offset = 1.0;
};

struct RangeInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty = true;

  static RangeInterval make(double lo, double hi) { return {lo, hi, !(lo <= hi)}; }
  static RangeInterval none() { return {0.0, 0.0, true}; }
  bool contains(double value) const { return !empty && lo <= value && value <= hi; }
};

enum class Branch { CircleRight, CircleLeft, SexticUpper, SexticLower };

inline constexpr std::string_view branch_token(Branch b) {
  switch (b) {
    case Branch::CircleRight: return "circle-right";
    case Branch::CircleLeft: return "circle-left";
    case Branch::SexticUpper: return "sextic-upper";
    case Branch::SexticLower: return "sextic-lower";
  }
  return "unknown";
}

inline Branch parse_branch(std::string_view token) {
  for (Branch b : {Branch::CircleRight, Branch::CircleLeft, Branch::SexticUpper, Branch::SexticLower})
    if (branch_token(b) == token) return b;
  throw std::invalid_argument("unknown branch token: " + std::string(token));
}

inline constexpr bool is_circle(Branch b) { return b == Branch::CircleRight || b == Branch::CircleLeft; }

struct BoundaryPoint {
  double x = 0.0;
  double y = 0.0;
  Branch branch = Branch::CircleRight;
  double theta = 0.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// |cos theta| at which the boundary switches between circle and sextic arcs.
inline double switching_cosine(double r) {
  require_radius(r);
  return (std::sqrt(4.0 + r * r) - r) / 2.0;
}

/// Upper line of the piecewise support function: r + |cos theta|.
inline double circle_offset(double theta, double r) { return r + std::abs(std::cos(theta)); }

/// Lower line: sqrt(1 + (r / sin theta)^2), +infinity where sin theta = 0.
inline double sextic_offset(double theta, double r) {
  const double s = std::sin(theta);
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  const double q = r / s;
  return std::sqrt(1.0 + q * q);
}

/// Circle arcs win when |cos theta| >= switching_cosine(r).
inline bool in_circle_regime(double theta, double r) {
  return std::abs(std::cos(theta)) >= switching_cosine(r);
}

/// Support function of W(F_{aI}) in direction theta.
inline double lambda_max(double theta, double r) {
  require_radius(r);
  return in_circle_regime(theta, r) ? circle_offset(theta, r) : sextic_offset(theta, r);
}

inline SupportLine support_line(double theta, double r) { return {theta, lambda_max(theta, r)}; }

/// Range of f(t) = Re(t^2) + Re(omega^2) - 4 lambda Re(t) Re(omega) over the
/// unit circle. Depends on theta only through |cos theta|.
inline RangeInterval f_range(double lambda, double theta) {
  if (!(lambda > 1.0)) throw std::invalid_argument("f_range requires lambda > 1");
  const double c = std::abs(std::cos(theta));
  const double hi = 2.0 * c * c + 4.0 * lambda * c;
  if (lambda * c >= 1.0) return RangeInterval::make(2.0 * c * c - 4.0 * lambda * c, hi);
  return RangeInterval::make(2.0 * (1.0 - lambda * lambda) * c * c - 2.0, hi);
}

/// The two intervals of lambda satisfying 2(r^2 - lambda^2) in f(T), for
/// theta reduced to the first quadrant. sec and the sextic bound are taken
/// as +infinity where their denominators vanish.
inline std::pair<RangeInterval, RangeInterval> admissible_lambdas(double theta, double r) {
  require_radius(r);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double c = std::abs(std::cos(theta));
  const double sec = c == 0.0 ? inf : 1.0 / c;
  const double sextic = sextic_offset(theta, r);
  RangeInterval first = RangeInterval::make(std::max(r - c, sec), r + c);
  RangeInterval second = RangeInterval::make(r - c, std::min(sextic, sec));
  return {first, second};
}

/// Largest element of the union of the admissible intervals.
inline std::optional<double> admissible_max(const std::pair<RangeInterval, RangeInterval>& lambdas) {
  std::optional<double> best;
  for (const auto* iv : {&lambdas.first, &lambdas.second})
    if (!iv->empty) best = best ? std::max(*best, iv->hi) : iv->hi;
  return best;
}

/// Point where the supporting line at theta touches the boundary.
inline BoundaryPoint envelope_point(double theta, double r) {
  require_positive_radius(r, "envelope_point");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (in_circle_regime(theta, r)) {
    // circles of radius r centred at (+-1, 0)
    const double centre = c > 0.0 ? 1.0 : -1.0;
    return {centre + r * c, r * s, c > 0.0 ? Branch::CircleRight : Branch::CircleLeft, theta};
  }
  if (s == 0.0) throw std::domain_error("envelope_point: sextic branch singular at sin(theta) = 0");
  const double p = sextic_offset(theta, r);
  const double dp = -r * r * c / (s * s * s * p);
  return {p * c - dp * s, p * s + dp * c, s > 0.0 ? Branch::SexticUpper : Branch::SexticLower, theta};
}

/// Envelope of the lines x cos + y sin = sqrt(1 + (r/sin)^2) for any theta
/// with sin theta != 0, regardless of regime. Traces the full sextic arcs
/// (the dashed auxiliary curves of the boundary figure).
inline Point2 sextic_family_point(double theta, double r) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (s == 0.0) throw std::domain_error("sextic_family_point: sin(theta) = 0");
  const double p = sextic_offset(theta, r);
  const double dp = -r * r * c / (s * s * s * p);
  return {p * c - dp * s, p * s + dp * c};
}

/// Left-hand side of the boundary sextic, u = x^2, v = y^2.
inline double sextic_eval(double u, double v, double r) { return arc_lhs<double>(u, v, r); }

namespace detail {

struct MonomialD {
  double coefficient;
  unsigned eu, ev, er;
};

inline const std::vector<MonomialD>& arc_monomials() {
  static const std::vector<MonomialD> table = [] {
    std::vector<MonomialD> out;
    const ExactPoly arc = arc_polynomial();
    for (const auto& [e, c] : arc.terms()) out.push_back({c.get_d(), e[0], e[1], e[2]});
    return out;
  }();
  return table;
}

}  // namespace detail

/// Magnitude of the largest expanded monomial of the sextic at (u, v, r);
/// the natural scale for judging |sextic_eval| against zero.
inline double sextic_scale(double u, double v, double r) {
  double scale = 0.0;
  for (const auto& m : detail::arc_monomials()) {
    const double term = std::abs(m.coefficient * std::pow(u, m.eu) * std::pow(v, m.ev) * std::pow(r, m.er));
    scale = std::max(scale, term);
  }
  return scale;
}

/// Angles at which the support line passes through a switching point,
/// in increasing order within [-pi, pi].
inline std::array<double, 4> switching_angles(double r) {
  const double a = std::acos(switching_cosine(r));
  return {-pi + a, -a, a, pi - a};
}

namespace detail {

/// Uniform angles over [-pi, pi) plus the axis directions and the four
/// switching angles, sorted and without duplicates.
inline std::vector<double> boundary_angles(double r, std::size_t samples) {
  std::vector<double> angles(samples);
  for (std::size_t k = 0; k < samples; ++k)
    angles[k] = -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(samples);
  std::vector<double> anchors{-pi / 2.0, 0.0, pi / 2.0};
  for (double a : switching_angles(r)) anchors.push_back(a);
  for (double anchor : anchors) {
    auto it = std::min_element(angles.begin(), angles.end(),
                               [&](double x, double y) { return std::abs(x - anchor) < std::abs(y - anchor); });
    if (std::abs(*it - anchor) < 1e-12)
      *it = anchor;
    else
      angles.push_back(anchor);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace detail

/// Closed, counter-clockwise sampling of the boundary of W(F_{aI}).
/// `samples` uniform angles over [-pi, pi) are augmented with the axis
/// directions and the four switching angles, so the extreme points and all
/// four arc transitions are always present.
inline std::vector<BoundaryPoint> boundary_curve(double r, std::size_t samples, unsigned workers = 0) {
  require_positive_radius(r, "boundary_curve");
  if (samples < 8) throw std::invalid_argument("boundary_curve requires samples >= 8");
  const std::vector<double> angles = detail::boundary_angles(r, samples);
  return parallel_map(angles.size(), [&](std::size_t i) { return envelope_point(angles[i], r); }, workers);
}

enum class Location { Interior, Boundary, Exterior };

inline constexpr std::string_view location_token(Location l) {
  switch (l) {
    case Location::Interior: return "interior";
    case Location::Boundary: return "boundary";
    case Location::Exterior: return "exterior";
  }
  return "unknown";
}

struct Containment {
  Location where = Location::Interior;
  /// max over theta of x cos + y sin - lambda_max.
  double margin = 0.0;
  double theta = 0.0;
  double tolerance = 0.0;
};

/// Classifies (x, y) against the closed-form supporting half-planes. The
/// margin is maximised over a uniform grid of gridsize angles and then
/// refined by golden-section search around the best grid angle.
inline Containment contains(double x, double y, double r, std::size_t gridsize,
                            double tol = default_tolerances.boundary) {
  require_radius(r);
  if (gridsize < 64) throw std::invalid_argument("contains requires gridsize >= 64");
  auto margin = [&](double th) { return x * std::cos(th) + y * std::sin(th) - lambda_max(th, r); };
  const double step = 2.0 * pi / static_cast<double>(gridsize);
  double best_theta = -pi;
  double best = margin(best_theta);
  for (std::size_t k = 1; k < gridsize; ++k) {
    const double th = -pi + step * static_cast<double>(k);
    const double m = margin(th);
    if (m > best) {
      best = m;
      best_theta = th;
    }
  }
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_theta - step, b = best_theta + step;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double mc = margin(c), md = margin(d);
  for (int it = 0; it < 100 && b - a > 1e-15; ++it) {
    if (mc > md) {
      b = d;
      d = c;
      md = mc;
      c = b - invphi * (b - a);
      mc = margin(c);
    } else {
      a = c;
      c = d;
      mc = md;
      d = a + invphi * (b - a);
      md = margin(d);
    }
  }
  if (std::max(mc, md) > best) {
    best = std::max(mc, md);
    best_theta = mc > md ? c : d;
  }
  Location where = best > tol ? Location::Exterior : (best >= -tol ? Location::Boundary : Location::Interior);
  return {where, best, best_theta, tol};
}

/// Euclidean distance from (x, y) to the ellipse (X/A)^2 + (Y/B)^2 = 1,
/// A >= B > 0. Robust bisection on the Lagrange-multiplier equation.
inline double ellipse_distance(double x, double y, double A, double B) {
  if (!(A >= B && B > 0.0)) throw std::invalid_argument("ellipse_distance requires A >= B > 0");
  const double y0 = std::abs(x), y1 = std::abs(y);
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / A, z1 = y1 / B;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g == 0.0) return 0.0;
      const double ratio = (A / B) * (A / B);
      const double n0 = ratio * z0;
      double s0 = z1 - 1.0;
      double s1 = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
      double s = 0.0;
      for (int i = 0; i < 2000; ++i) {
        s = 0.5 * (s0 + s1);
        if (s == s0 || s == s1) break;
        const double q0 = n0 / (s + ratio), q1 = z1 / (s + 1.0);
        const double h = q0 * q0 + q1 * q1 - 1.0;
        if (h > 0.0)
          s0 = s;
        else if (h < 0.0)
          s1 = s;
        else
          break;
      }
      const double x0 = ratio * y0 / (s + ratio);
      const double x1 = y1 / (s + 1.0);
      return std::hypot(x0 - y0, x1 - y1);
    }
    return std::abs(y1 - B);
  }
  const double numer = A * y0, denom = A * A - B * B;
  if (numer < denom) {
    const double xde = numer / denom;
    const double x0 = A * xde, x1 = B * std::sqrt(1.0 - xde * xde);
    return std::hypot(x0 - y0, x1);
  }
  return std::abs(y0 - A);
}

/// Axis-aligned ellipse matching W(F_{aI}) on both axes: half-axes 1 + r
/// (horizontal) and sqrt(1 + r^2) (vertical).
struct ConjecturedEllipse {
  double major;
  double minor;
};

inline ConjecturedEllipse conjectured_ellipse(double r) { return {1.0 + r, std::sqrt(1.0 + r * r)}; }

struct EllipseGap {
  double max_gap = 0.0;
  double argmax_theta = 0.0;
};

/// Largest distance between sampled boundary points and the conjectured
/// elliptical disk.
inline EllipseGap ellipse_gap(double r, std::size_t samples, unsigned workers = 0) {
  require_positive_radius(r, "ellipse_gap");
  if (samples < 100) throw std::invalid_argument("ellipse_gap requires samples >= 100");
  const auto ellipse = conjectured_ellipse(r);
  const auto boundary = boundary_curve(r, samples, workers);
  EllipseGap out;
  for (const auto& p : boundary) {
    const double d = ellipse_distance(p.x, p.y, ellipse.major, ellipse.minor);
    if (d > out.max_gap) out = {d, p.theta};
  }
  return out;
}

}  // namespace fnr
