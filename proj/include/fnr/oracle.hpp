#pragma once

// Independent numerical checks of the closed forms.
//
// Finite compressions of F_{aI} to the first N shift basis vectors of each
// block give a one-sided oracle for the support function: the top eigenvalue
// of the hermitian part of e^{-i theta} F_N never exceeds lambda_max and
// increases with N. A brute-force grid over the unit circle gives a second,
// independent route through the admissibility condition on lambda.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fnr/closedform.hpp"
#include "fnr/errors.hpp"
#include "fnr/parallel.hpp"
#include "fnr/tolerances.hpp"

namespace fnr {

using cplx = std::complex<double>;

struct MatrixEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

/// Compression of F_{aI} = [S*, aI; 0, S] to C^N (+) C^N, with S e_j = e_{j+1}.
class TruncatedOperator {
 public:
  TruncatedOperator(cplx a, std::size_t n) : a_(a), n_(n) {
    if (n == 0) throw std::invalid_argument("build_foguel requires N >= 1");
    // block row-major: (1,1) S*, (1,2) aI, (2,2) S
    for (std::size_t j = 0; j + 1 < n; ++j) entries_.push_back({j, j + 1, 1.0});
    if (a != 0.0)
      for (std::size_t j = 0; j < n; ++j) entries_.push_back({j, n + j, a});
    for (std::size_t j = 0; j + 1 < n; ++j) entries_.push_back({n + j + 1, n + j, 1.0});
  }

  cplx a() const noexcept { return a_; }
  std::size_t level() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return 2 * n_; }
  std::span<const MatrixEntry> entries() const noexcept { return entries_; }
  std::size_t nonzero_count() const noexcept { return entries_.size(); }

  /// Norm bound ||S*|| + |a| + ||S||.
  double norm_bound() const noexcept { return 2.0 + std::abs(a_); }

  Eigen::MatrixXcd dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dimension(), dimension());
    for (const auto& e : entries_) m(e.row, e.col) = e.value;
    return m;
  }

 private:
  cplx a_;
  std::size_t n_;
  std::vector<MatrixEntry> entries_;
};

inline TruncatedOperator build_foguel(cplx a, std::size_t n) { return TruncatedOperator(a, n); }

/// (e^{-i theta} F + e^{i theta} F*) / 2, stored as a band in the interleaved
/// basis e1(+)0, 0(+)e1, e2(+)0, ... where it has half-bandwidth 2.
class HermitianRotation {
 public:
  static constexpr std::size_t bandwidth = 2;

  HermitianRotation(const TruncatedOperator& op, double theta)
      : theta_(theta), n_(op.level()), diag_(op.dimension(), 0.0) {
    for (auto& b : upper_) b.assign(op.dimension(), cplx(0.0));
    const cplx w_bar = std::polar(1.0, -theta);
    for (const auto& e : op.entries()) {
      // contributes w_bar * v / 2 at (row, col) and its conjugate at (col, row)
      const cplx h = w_bar * e.value / 2.0;
      const std::size_t p = interleaved(e.row), q = interleaved(e.col);
      if (p == q) {
        diag_[p] += 2.0 * h.real();
      } else if (p < q) {
        band(p, q - p) += h;
      } else {
        band(q, p - q) += std::conj(h);
      }
    }
  }

  double theta() const noexcept { return theta_; }
  std::size_t dimension() const noexcept { return diag_.size(); }

  /// Natural (block) index to interleaved index.
  std::size_t interleaved(std::size_t i) const { return i < n_ ? 2 * i : 2 * (i - n_) + 1; }

  double diagonal(std::size_t p) const { return diag_[p]; }
  /// Interleaved entry (p, p + k), k in {1, 2}.
  cplx upper(std::size_t p, std::size_t k) const { return p + k < dimension() ? upper_[k - 1][p] : cplx(0.0); }

  /// y = H x in the interleaved basis.
  void apply(std::span<const cplx> x, std::span<cplx> y) const {
    const std::size_t n = dimension();
    for (std::size_t p = 0; p < n; ++p) y[p] = diag_[p] * x[p];
    for (std::size_t k = 1; k <= bandwidth; ++k) {
      for (std::size_t p = 0; p + k < n; ++p) {
        const cplx h = upper_[k - 1][p];
        y[p] += h * x[p + k];
        y[p + k] += std::conj(h) * x[p];
      }
    }
  }

  /// Dense matrix in the natural block ordering; the lower triangle is the
  /// conjugate of the upper triangle, so it is hermitian bit for bit.
  Eigen::MatrixXcd dense() const {
    const std::size_t n = dimension();
    std::vector<std::size_t> natural(n);
    for (std::size_t i = 0; i < n; ++i) natural[interleaved(i)] = i;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t p = 0; p < n; ++p) {
      m(natural[p], natural[p]) = diag_[p];
      for (std::size_t k = 1; k <= bandwidth && p + k < n; ++k) {
        const cplx h = upper_[k - 1][p];
        m(natural[p], natural[p + k]) = h;
        m(natural[p + k], natural[p]) = std::conj(h);
      }
    }
    return m;
  }

 private:
  cplx& band(std::size_t p, std::size_t k) {
    if (k > bandwidth) throw std::logic_error("HermitianRotation: entry outside the band");
    return upper_[k - 1][p];
  }

  double theta_;
  std::size_t n_;
  std::vector<double> diag_;
  std::array<std::vector<cplx>, bandwidth> upper_;
};

inline HermitianRotation hermitian_rotation(const TruncatedOperator& op, double theta) {
  return HermitianRotation(op, theta);
}

namespace detail {

/// Banded Cholesky of sigma I - H. Succeeds iff sigma exceeds the top
/// eigenvalue (up to rounding). On success `factor` holds L column bands:
/// factor[0] the diagonal, factor[k] the entries L(p + k, p).
inline bool shifted_cholesky(const HermitianRotation& h, double sigma,
                             std::array<std::vector<cplx>, HermitianRotation::bandwidth + 1>& factor) {
  constexpr std::size_t b = HermitianRotation::bandwidth;
  const std::size_t n = h.dimension();
  for (auto& col : factor) col.assign(n, cplx(0.0));
  auto L = [&](std::size_t i, std::size_t j) -> cplx& { return factor[i - j][j]; };  // i >= j, i - j <= b
  for (std::size_t j = 0; j < n; ++j) {
    double d = sigma - h.diagonal(j);
    for (std::size_t k = (j >= b ? j - b : 0); k < j; ++k) d -= std::norm(L(j, k));
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    L(j, j) = ljj;
    for (std::size_t i = j + 1; i <= std::min(n - 1, j + b); ++i) {
      // M(i, j) = -H(i, j) = -conj(H(j, i))
      cplx m = -std::conj(h.upper(j, i - j));
      for (std::size_t k = (i >= b ? i - b : 0); k < j; ++k) m -= L(i, k) * std::conj(L(j, k));
      L(i, j) = m / ljj;
    }
  }
  return true;
}

/// Solves L L^* x = rhs in place.
inline void cholesky_solve(const std::array<std::vector<cplx>, HermitianRotation::bandwidth + 1>& factor,
                           std::vector<cplx>& x) {
  constexpr std::size_t b = HermitianRotation::bandwidth;
  const std::size_t n = x.size();
  auto L = [&](std::size_t i, std::size_t j) { return factor[i - j][j]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = (i >= b ? i - b : 0); k < i; ++k) x[i] -= L(i, k) * x[k];
    x[i] /= L(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k <= std::min(n - 1, i + b); ++k) x[i] -= std::conj(L(k, i)) * x[k];
    x[i] /= L(i, i);
  }
}

}  // namespace detail

enum class EigenMethod { Banded, Dense };

struct TopEigenvalue {
  double value = 0.0;
  double residual = 0.0;
  int bisection_steps = 0;
  int iterations = 0;
};

inline constexpr std::size_t dense_fallback_limit = 64;

/// Largest eigenvalue of the hermitian rotation.
///
/// Banded path: bisection on the success of the Cholesky factorisation of
/// sigma I - H brackets the top eigenvalue; shifted inverse iteration from
/// the normalised all-ones vector then refines it until the Rayleigh
/// quotient residual ||H v - rho v|| falls below `residual_tol`.
/// Dense path (N <= 64): Eigen's self-adjoint solver, for cross-checking.
inline TopEigenvalue top_eigenvalue(const HermitianRotation& h, EigenMethod method = EigenMethod::Banded,
                                    double residual_tol = default_tolerances.eigen_residual) {
  const std::size_t n = h.dimension();
  if (method == EigenMethod::Dense) {
    if (n > 2 * dense_fallback_limit) throw std::invalid_argument("dense eigensolver path is limited to N <= 64");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense self-adjoint eigensolver failed", 0, NAN);
    return {solver.eigenvalues()(n - 1), 0.0, 0, 0};
  }

  // Gershgorin bound
  double bound = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double row = std::abs(h.diagonal(p));
    for (std::size_t k = 1; k <= HermitianRotation::bandwidth; ++k) {
      row += std::abs(h.upper(p, k));
      if (p >= k) row += std::abs(h.upper(p - k, k));
    }
    bound = std::max(bound, row);
  }
  std::array<std::vector<cplx>, HermitianRotation::bandwidth + 1> factor;
  double lo = -bound - 1.0, hi = bound + 1.0;
  TopEigenvalue out;
  while (hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(hi) + 1.0) && out.bisection_steps < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (detail::shifted_cholesky(h, mid, factor) ? hi : lo) = mid;
    ++out.bisection_steps;
  }
  double sigma = hi;
  while (!detail::shifted_cholesky(h, sigma, factor)) sigma += 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(sigma) + 1.0);

  std::vector<cplx> v(n, cplx(1.0 / std::sqrt(static_cast<double>(n))));
  std::vector<cplx> hv(n);
  constexpr int max_iterations = 50;
  for (int it = 1; it <= max_iterations; ++it) {
    detail::cholesky_solve(factor, v);
    double norm = 0.0;
    for (const auto& z : v) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (auto& z : v) z /= norm;
    h.apply(v, hv);
    double rho = 0.0;
    for (std::size_t p = 0; p < n; ++p) rho += (std::conj(v[p]) * hv[p]).real();
    double res = 0.0;
    for (std::size_t p = 0; p < n; ++p) res += std::norm(hv[p] - rho * v[p]);
    res = std::sqrt(res);
    out.value = rho;
    out.residual = res;
    out.iterations = it;
    if (res <= residual_tol) return out;
  }
  throw ConvergenceError("inverse iteration did not reach the residual threshold", out.iterations, out.residual);
}

/// Top eigenvalue of Re(e^{-i theta} F_N) for the compression of F_{aI}.
inline double oracle_lambda_max(double theta, cplx a, std::size_t n, EigenMethod method = EigenMethod::Banded) {
  return top_eigenvalue(hermitian_rotation(build_foguel(a, n), theta), method).value;
}

inline double f_value(double phi, double lambda, double theta) {
  // Re(t^2) + Re(w^2) - 4 lambda Re(t) Re(w), t = e^{i phi}, w = e^{i theta}
  return std::cos(2.0 * phi) + std::cos(2.0 * theta) - 4.0 * lambda * std::cos(phi) * std::cos(theta);
}

/// Min and max of f over K equally spaced points of the unit circle.
inline RangeInterval oracle_f_range(double lambda, double theta, std::size_t k) {
  if (k < 1000) throw std::invalid_argument("oracle_f_range requires K >= 1000");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j = 0; j < k; ++j) {
    const double f = f_value(2.0 * pi * static_cast<double>(j) / static_cast<double>(k), lambda, theta);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  return RangeInterval::make(lo, hi);
}

/// The same grid as oracle_f_range, prepared for many lambda queries at a
/// fixed theta. Each grid point is a line f_j(lambda) = alpha_j - lambda beta_j;
/// the grid minimum and maximum are the lower and upper envelopes of those
/// lines, evaluated by binary search.
class FRangeTable {
 public:
  FRangeTable(double theta, std::size_t k) {
    if (k < 1000) throw std::invalid_argument("FRangeTable requires K >= 1000");
    std::vector<Line> lines;
    lines.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      const double phi = 2.0 * pi * static_cast<double>(j) / static_cast<double>(k);
      lines.push_back({-4.0 * std::cos(phi) * std::cos(theta), std::cos(2.0 * phi) + std::cos(2.0 * theta)});
    }
    upper_ = upper_envelope(lines);
    for (auto& l : lines) l = {-l.slope, -l.intercept};
    lower_negated_ = upper_envelope(std::move(lines));
  }

  RangeInterval range(double lambda) const {
    return RangeInterval::make(-evaluate(lower_negated_, lambda), evaluate(upper_, lambda));
  }

 private:
  struct Line {
    double slope;
    double intercept;
    double at(double x) const { return slope * x + intercept; }
  };

  static std::vector<Line> upper_envelope(std::vector<Line> lines) {
    std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) {
      return a.slope < b.slope || (a.slope == b.slope && a.intercept > b.intercept);
    });
    std::vector<Line> hull;
    for (const auto& l : lines) {
      if (!hull.empty() && hull.back().slope == l.slope) continue;
      while (hull.size() >= 2) {
        const Line& a = hull[hull.size() - 2];
        const Line& b = hull.back();
        // b is redundant if the a/l crossing is left of the a/b crossing
        if ((l.intercept - a.intercept) * (b.slope - a.slope) >= (b.intercept - a.intercept) * (l.slope - a.slope))
          hull.pop_back();
        else
          break;
      }
      hull.push_back(l);
    }
    return hull;
  }

  static double evaluate(const std::vector<Line>& hull, double x) {
    std::size_t lo = 0, hi = hull.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (hull[mid].at(x) <= hull[mid + 1].at(x))
        lo = mid + 1;
      else
        hi = mid;
    }
    return hull[lo].at(x);
  }

  std::vector<Line> upper_;
  std::vector<Line> lower_negated_;
};

/// Descending grid from `top` to `bottom` with the given step.
inline std::vector<double> descending_grid(double top, double bottom, double step) {
  if (!(step > 0.0) || !(top >= bottom)) throw std::invalid_argument("descending_grid: bad bounds");
  const auto count = static_cast<std::size_t>(std::floor((top - bottom) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = top - step * static_cast<double>(i);
  return grid;
}

/// Default lambda grid: [1, r + 2] with step 1e-4, descending.
inline std::vector<double> default_lambda_grid(double r, double step = 1e-4) {
  return descending_grid(r + 2.0, 1.0, step);
}

inline constexpr std::size_t default_f_grid = 100000;

/// Largest grid lambda with 2(r^2 - lambda^2) inside the grid range of f.
inline double oracle_lambda_max_via_condition(double theta, double r, std::span<const double> lambda_grid,
                                              std::size_t k = default_f_grid) {
  require_radius(r);
  const FRangeTable table(theta, k);
  double best = -std::numeric_limits<double>::infinity();
  for (double lambda : lambda_grid) {
    if (lambda <= best) continue;
    if (table.range(lambda).contains(2.0 * (r * r - lambda * lambda))) best = lambda;
  }
  if (!std::isfinite(best)) throw std::runtime_error("no grid lambda satisfies the admissibility condition");
  return best;
}

/// Vertices of the polygon cut out by the compression's supporting lines at
/// `samples` equally spaced angles: vertex k is the crossing of lines k and
/// k + 1.
inline std::vector<Point2> oracle_boundary(cplx a, std::size_t n, std::size_t samples, unsigned workers = 0) {
  if (n < 50) throw std::invalid_argument("oracle_boundary requires N >= 50");
  if (samples < 90) throw std::invalid_argument("oracle_boundary requires samples >= 90");
  const TruncatedOperator op = build_foguel(a, n);
  auto angle = [&](std::size_t k) { return -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(samples); };
  const std::vector<double> offsets = parallel_map(
      samples, [&](std::size_t k) { return top_eigenvalue(hermitian_rotation(op, angle(k))).value; }, workers);
  std::vector<Point2> out(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t m = (k + 1) % samples;
    const double t1 = angle(k), t2 = angle(m);
    const double det = std::sin(t2 - t1);
    out[k] = {(offsets[k] * std::sin(t2) - offsets[m] * std::sin(t1)) / det,
              (offsets[m] * std::cos(t1) - offsets[k] * std::cos(t2)) / det};
  }
  return out;
}

}  // namespace fnr
