#pragma once

// Elimination of t from the t-system and the divisibility certificate for
// the boundary sextic.
//
// For a fixed rational r, Res(x, y) = Res_t(P1, P2) is evaluated exactly at
// rational points through the 18 x 18 Sylvester matrix. The cofactor
// C = Res / E(x^2, y^2) is interpolated on a tensor grid of random rational
// nodes and the identity Res = E * C is then checked exactly at fresh
// held-out points.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fnr/arc.hpp"
#include "fnr/errors.hpp"
#include "fnr/exactpoly.hpp"

namespace fnr {

/// Fraction-free (Bareiss) determinant with row pivoting.
inline BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("bareiss_determinant: matrix is not square");
  int sign = 1;
  BigInt previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t pivot = k + 1;
      while (pivot < n && m[pivot][k] == 0) ++pivot;
      if (pivot == n) return 0;
      std::swap(m[k], m[pivot]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = m[i][j] * m[k][k] - m[i][k] * m[k][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
      }
      m[i][k] = 0;
    }
    previous = m[k][k];
  }
  return sign > 0 ? m[n - 1][n - 1] : BigInt(-m[n - 1][n - 1]);
}

/// Determinant of a rational matrix: each row is scaled to integers, the
/// integer determinant is taken fraction-free and the scales divided out.
inline BigRational rational_determinant(const std::vector<std::vector<BigRational>>& m) {
  std::vector<std::vector<BigInt>> scaled(m.size());
  BigInt scale = 1;
  for (std::size_t i = 0; i < m.size(); ++i) {
    BigInt l = 1;
    for (const auto& q : m[i]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    scaled[i].reserve(m[i].size());
    for (const auto& q : m[i]) scaled[i].push_back(BigInt(q.get_num() * (l / q.get_den())));
    scale *= l;
  }
  BigRational out(bareiss_determinant(std::move(scaled)), scale);
  out.canonicalize();
  return out;
}

/// Resultant of two univariate polynomials given by ascending coefficient
/// lists, as the determinant of their Sylvester matrix. Leading zeros are
/// trimmed first; a zero polynomial has resultant 0 with anything.
inline BigRational sylvester_resultant(std::span<const BigRational> f, std::span<const BigRational> g) {
  auto trimmed = [](std::span<const BigRational> p) {
    std::size_t n = p.size();
    while (n > 0 && p[n - 1] == 0) --n;
    return p.first(n);
  };
  f = trimmed(f);
  g = trimmed(g);
  if (f.empty() || g.empty()) return 0;
  const std::size_t m = f.size() - 1, n = g.size() - 1;
  if (m == 0 && n == 0) return 1;
  const std::size_t size = m + n;
  std::vector<std::vector<BigRational>> s(size, std::vector<BigRational>(size, BigRational(0)));
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t k = 0; k <= m; ++k) s[row][row + k] = f[m - k];
  for (std::size_t row = 0; row < m; ++row)
    for (std::size_t k = 0; k <= n; ++k) s[n + row][row + k] = g[n - k];
  return rational_determinant(s);
}

namespace detail {

inline const std::pair<ExactPoly, ExactPoly>& cached_tp() {
  static const std::pair<ExactPoly, ExactPoly> polys = tp_polynomials();
  return polys;
}

}  // namespace detail

/// Res_t of the t-system specialised at (r, x, y). Requires r != 0 so that
/// both leading coefficients (-r^2) survive.
inline BigRational sylvester_resultant_at(const BigRational& r, const BigRational& x, const BigRational& y) {
  if (r == 0)
    throw DegenerateRadius("sylvester_resultant_at: r = 0 makes both leading coefficients in t vanish");
  const auto& [p1, p2] = detail::cached_tp();
  const std::map<std::string, BigRational> point{{"r", r}, {"x", x}, {"y", y}};
  const auto f = p1.univariate_coefficients("t", point);
  const auto g = p2.univariate_coefficients("t", point);
  return sylvester_resultant(f, g);
}

/// Monomial coefficients (ascending) of the interpolating polynomial through
/// (nodes[i], values[i]); nodes must be distinct.
inline std::vector<BigRational> interpolate_univariate(std::span<const BigRational> nodes,
                                                       std::span<const BigRational> values) {
  const std::size_t m = nodes.size();
  if (values.size() != m) throw std::invalid_argument("interpolate_univariate: size mismatch");
  std::vector<BigRational> dd(values.begin(), values.end());
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = m - 1; i >= level; --i) {
      const BigRational gap = nodes[i] - nodes[i - level];
      if (gap == 0) throw std::domain_error("interpolate_univariate: repeated node");
      dd[i] = (dd[i] - dd[i - 1]) / gap;
    }
  }
  std::vector<BigRational> poly(m, BigRational(0));
  if (m == 0) return poly;
  poly[0] = dd[m - 1];
  std::size_t degree = 0;
  for (std::size_t k = m - 1; k-- > 0;) {
    // poly <- poly * (X - nodes[k]) + dd[k]
    for (std::size_t j = degree + 1; j > 0; --j) poly[j] = poly[j - 1] - nodes[k] * poly[j];
    poly[0] = -nodes[k] * poly[0] + dd[k];
    ++degree;
  }
  return poly;
}

/// Polynomial in {x, y} with per-variable degree < nodes through the tensor
/// grid values[i][j] = P(xs[i], ys[j]).
inline RationalPoly interpolate_tensor(std::span<const BigRational> xs, std::span<const BigRational> ys,
                                       const std::vector<std::vector<BigRational>>& values) {
  const std::size_t mx = xs.size(), my = ys.size();
  std::vector<std::vector<BigRational>> in_x(my);  // in_x[j][a]: coefficient of x^a at y = ys[j]
  std::vector<BigRational> column(mx);
  for (std::size_t j = 0; j < my; ++j) {
    for (std::size_t i = 0; i < mx; ++i) column[i] = values[i][j];
    in_x[j] = interpolate_univariate(xs, column);
  }
  RationalPoly out({"x", "y"});
  std::vector<BigRational> row(my);
  for (std::size_t a = 0; a < mx; ++a) {
    for (std::size_t j = 0; j < my; ++j) row[j] = in_x[j][a];
    const auto in_y = interpolate_univariate(ys, row);
    for (std::size_t b = 0; b < my; ++b) out.add_term({static_cast<unsigned>(a), static_cast<unsigned>(b)}, in_y[b]);
  }
  return out;
}

/// Seeded source of rationals p/q with |p| <= 1000 and 1 <= q <= 1000.
/// Uses raw mt19937_64 output so the stream is identical on every platform.
class RationalSampler {
 public:
  explicit RationalSampler(std::uint64_t seed) : engine_(seed) {}

  BigRational next() {
    const long num = static_cast<long>(engine_() % 2001) - 1000;
    const long den = static_cast<long>(engine_() % 1000) + 1;
    return make_rational(num, den);
  }

  /// `count` pairwise distinct values, none of them in `avoid`.
  std::vector<BigRational> distinct(std::size_t count, const std::set<BigRational>& avoid = {}) {
    std::set<BigRational> seen(avoid);
    std::vector<BigRational> out;
    while (out.size() < count) {
      BigRational q = next();
      if (seen.insert(q).second) out.push_back(q);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

struct ResultantReport {
  BigRational r;
  unsigned degree_bound = 0;
  std::uint64_t seed = 0;
  std::size_t basis_dimension = 0;
  std::size_t requested_samples = 0;
  std::size_t grid_side = 0;
  std::size_t sample_count = 0;
  std::size_t held_out_count = 0;
  std::size_t redrawn_nodes = 0;

  bool success = false;
  std::string failure;

  std::optional<RationalPoly> cofactor;
  unsigned cofactor_total_degree = 0;
  std::size_t cofactor_terms = 0;
  /// Number of fitted coefficients beyond the total-degree bound (zero on success).
  std::size_t excess_terms = 0;
  /// Set when the single-line degree probe already rules out a cofactor.
  bool probe_failed = false;
  /// Largest k with (x^2 + y^2)^k dividing the cofactor.
  unsigned sum_of_squares_power = 0;
  std::optional<RationalPoly> cofactor_remainder_factor;

  std::vector<BigRational> held_out_residuals;

  std::size_t nonzero_residuals() const {
    return static_cast<std::size_t>(std::count_if(held_out_residuals.begin(), held_out_residuals.end(),
                                                  [](const BigRational& q) { return q != 0; }));
  }
};

/// Dimension of the space of bivariate polynomials of total degree <= d.
inline std::size_t bivariate_dimension(unsigned d) { return (static_cast<std::size_t>(d) + 1) * (d + 2) / 2; }

/// Smallest sample count accepted by verify_arc_identity: 25% above the
/// basis dimension.
inline std::size_t minimum_sample_count(unsigned degree_bound) {
  const std::size_t dim = bivariate_dimension(degree_bound);
  return (5 * dim + 3) / 4;
}

namespace detail {

/// Strips maximal powers of x^2 + y^2 from p.
inline std::pair<unsigned, RationalPoly> strip_sum_of_squares(RationalPoly p) {
  const std::vector<std::string> xy{"x", "y"};
  const auto x = RationalPoly::variable(xy, "x");
  const auto y = RationalPoly::variable(xy, "y");
  const RationalPoly q = x * x + y * y;
  unsigned k = 0;
  while (!p.is_zero()) {
    Division d = divide(p, q);
    if (!d.remainder.is_zero()) break;
    p = std::move(d.quotient);
    ++k;
  }
  return {k, std::move(p)};
}

}  // namespace detail

/// Certificate that E(x^2, y^2) divides Res_t(P1, P2) at the rational r.
///
/// The cofactor values Res / E are taken on a side x side grid of random
/// rational nodes, side = max(degree_bound + 1, ceil(sqrt(sample_count))),
/// and interpolated exactly. The fit must have total degree <= degree_bound,
/// and Res = E * C must hold exactly at `held_out` fresh random points.
inline ResultantReport verify_arc_identity(const BigRational& r, unsigned degree_bound, std::size_t sample_count,
                                           std::uint64_t seed, const ExactPoly& arc = arc_polynomial(),
                                           std::size_t held_out = 40) {
  if (r == 0) throw DegenerateRadius("verify_arc_identity: r = 0 makes the t-system degenerate");
  ResultantReport report;
  report.r = r;
  report.degree_bound = degree_bound;
  report.seed = seed;
  report.basis_dimension = bivariate_dimension(degree_bound);
  report.requested_samples = sample_count;
  if (sample_count < minimum_sample_count(degree_bound))
    throw std::invalid_argument("verify_arc_identity: sample_count must exceed the basis dimension (" +
                                std::to_string(report.basis_dimension) + ") by at least 25%");

  std::size_t side = degree_bound + 1;
  while (side * side < sample_count) ++side;
  report.grid_side = side;
  report.sample_count = side * side;

  const RationalPoly e_xy = arc_in_xy(arc, r);
  auto arc_at = [&](const BigRational& x, const BigRational& y) { return e_xy.evaluate<BigRational>({x, y}); };

  RationalSampler sampler(seed);
  std::vector<BigRational> xs = sampler.distinct(side);
  std::vector<BigRational> ys = sampler.distinct(side);
  // E must not vanish on the grid: redraw offending y nodes.
  for (std::size_t j = 0; j < side; ++j) {
    bool ok = false;
    while (!ok) {
      ok = std::none_of(xs.begin(), xs.end(), [&](const BigRational& x) { return arc_at(x, ys[j]) == 0; });
      if (!ok) {
        std::set<BigRational> avoid(ys.begin(), ys.end());
        ys[j] = sampler.distinct(1, avoid).front();
        ++report.redrawn_nodes;
      }
    }
  }

  // Cheap necessary condition first: along y = ys[0] the quotient must be a
  // polynomial of degree <= degree_bound in x, so one extra node has to give
  // a vanishing top coefficient. A wrong E fails here before the full fit.
  {
    std::vector<BigRational> px = xs;
    std::set<BigRational> avoid(xs.begin(), xs.end());
    BigRational extra = sampler.distinct(1, avoid).front();
    while (arc_at(extra, ys[0]) == 0) {
      avoid.insert(extra);
      extra = sampler.distinct(1, avoid).front();
    }
    px.push_back(extra);
    std::vector<BigRational> pv;
    for (const auto& x : px) pv.push_back(sylvester_resultant_at(r, x, ys[0]) / arc_at(x, ys[0]));
    if (interpolate_univariate(px, pv).back() != 0) {
      report.probe_failed = true;
      report.failure = "Res / E restricted to y = " + to_string(ys[0]) + " is not a polynomial of degree <= " +
                       std::to_string(degree_bound) + " in x";
      return report;
    }
  }

  std::vector<std::vector<BigRational>> values(side, std::vector<BigRational>(side));
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      values[i][j] = sylvester_resultant_at(r, xs[i], ys[j]) / arc_at(xs[i], ys[j]);

  RationalPoly fit = interpolate_tensor(xs, ys, values);
  RationalPoly bounded({"x", "y"});
  for (const auto& [e, c] : fit.terms()) {
    if (e[0] + e[1] > degree_bound)
      ++report.excess_terms;
    else
      bounded.add_term(e, c);
  }

  std::set<BigRational> used_x(xs.begin(), xs.end()), used_y(ys.begin(), ys.end());
  std::vector<BigRational> hx = sampler.distinct(held_out, used_x);
  std::vector<BigRational> hy = sampler.distinct(held_out, used_y);
  report.held_out_count = held_out;
  for (std::size_t k = 0; k < held_out; ++k) {
    const BigRational res = sylvester_resultant_at(r, hx[k], hy[k]);
    const BigRational predicted = arc_at(hx[k], hy[k]) * bounded.evaluate<BigRational>({hx[k], hy[k]});
    report.held_out_residuals.push_back(res - predicted);
  }

  report.cofactor_total_degree = bounded.total_degree();
  report.cofactor_terms = bounded.size();
  if (report.excess_terms > 0) {
    report.failure = "interpolated cofactor exceeds the total-degree bound (" + std::to_string(report.excess_terms) +
                     " coefficients above degree " + std::to_string(degree_bound) + ")";
  } else if (report.nonzero_residuals() > 0) {
    report.failure = std::to_string(report.nonzero_residuals()) + " of " + std::to_string(held_out) +
                     " held-out residuals are nonzero";
  } else if (bounded.is_zero()) {
    report.failure = "interpolated cofactor is identically zero";
  } else {
    report.success = true;
    auto [k, rest] = detail::strip_sum_of_squares(bounded);
    report.sum_of_squares_power = k;
    report.cofactor_remainder_factor = std::move(rest);
  }
  report.cofactor = std::move(bounded);
  return report;
}

inline ResultantReport verify_arc_identity(const BigRational& r, unsigned degree_bound = 28, std::uint64_t seed = 1) {
  return verify_arc_identity(r, degree_bound, minimum_sample_count(degree_bound), seed);
}

struct SymbolicElimination {
  BigRational r;
  RationalPoly resultant;  // Res_t(P1, P2) in {x, y}
  RationalPoly quotient;   // Res / E(x^2, y^2)
  RationalPoly remainder;  // zero iff E divides Res
};

/// Full resultant polynomial at a fixed rational r. Every Sylvester entry
/// has total degree <= 2 in (x, y), so the 18 x 18 determinant has degree
/// <= 36 in each variable and is recovered exactly by interpolation on a
/// 37 x 37 integer grid. It is then divided by E(x^2, y^2).
inline SymbolicElimination symbolic_elimination(const BigRational& r, const ExactPoly& arc = arc_polynomial()) {
  if (r == 0) throw DegenerateRadius("symbolic_elimination: r = 0 makes the t-system degenerate");
  constexpr std::size_t side = 37;
  std::vector<BigRational> nodes;
  for (long k = 0; k < static_cast<long>(side); ++k) nodes.push_back(make_rational(k - 18));
  std::vector<std::vector<BigRational>> values(side, std::vector<BigRational>(side));
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) values[i][j] = sylvester_resultant_at(r, nodes[i], nodes[j]);
  SymbolicElimination out{r, interpolate_tensor(nodes, nodes, values), {}, {}};
  Division d = divide(out.resultant, arc_in_xy(arc, r));
  out.quotient = std::move(d.quotient);
  out.remainder = std::move(d.remainder);
  return out;
}

}  // namespace fnr
