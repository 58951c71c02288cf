#pragma once

// Commands behind the `fnr` executable: figure data (CSV/SVG) for the
// supporting-line family and the boundary, the verification suite, and the
// resultant certificate report.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fnr/closedform.hpp"
#include "fnr/oracle.hpp"
#include "fnr/resultant.hpp"
#include "fnr/tolerances.hpp"

namespace fnr::cli {

enum ExitCode : int { Success = 0, VerificationFailure = 1, UsageError = 2, IoError = 3 };

enum class Format { Csv, Svg, Json };

struct SvgStyle {
  std::string boundary = "#1f4fbf";   // solid boundary and line family
  std::string auxiliary = "#1f4fbf";  // dashed circles and sextic
  std::string switching = "#d62728";  // switching lines and markers
};

struct RunConfig {
  std::string command;
  double r = 0.5;
  std::optional<std::complex<double>> a;
  /// Exact values of r for the resultant command.
  std::vector<std::string> r_values;
  std::size_t samples = 720;
  bool samples_explicit = false;
  std::size_t truncation = 400;
  std::size_t grid = 720;
  std::uint64_t seed = 1;
  std::string out;
  std::set<Format> formats;
  Tolerances tol;
  unsigned degree_bound = 28;
  bool with_resultant = false;
  bool mutate = false;
  bool symbolic = false;
  SvgStyle style;
};

struct CommandResult {
  int exit_code = Success;
  std::vector<std::filesystem::path> written;
  std::string message;
};

/// %.17g: round-trips every double.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string fmt_px(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoFailure("cannot open " + path.string() + " for writing");
  os << content;
  if (!os) throw IoFailure("write failed for " + path.string());
}

inline std::filesystem::path output_path(const RunConfig& cfg, std::string_view fallback_stem, std::string_view ext) {
  std::filesystem::path stem = cfg.out.empty() ? std::filesystem::path(fallback_stem) : std::filesystem::path(cfg.out);
  stem += ext;
  return stem;
}

inline bool wants(const RunConfig& cfg, Format f, std::initializer_list<Format> defaults) {
  if (cfg.formats.empty()) return std::find(defaults.begin(), defaults.end(), f) != defaults.end();
  return cfg.formats.count(f) > 0;
}

// ---------------------------------------------------------------------------
// SVG

/// Maps the square [-extent, extent]^2 onto a size x size canvas, y up.
class SvgCanvas {
 public:
  SvgCanvas(double extent, double size = 800.0) : extent_(extent), size_(size) {}

  double px(double x) const { return (x + extent_) / (2.0 * extent_) * size_; }
  double py(double y) const { return (extent_ - y) / (2.0 * extent_) * size_; }
  double scale() const { return size_ / (2.0 * extent_); }
  double extent() const { return extent_; }

  /// Segment of {x cos + y sin = offset} inside the square, if any
  /// (Liang-Barsky on the parametrisation offset*n + s*d).
  std::optional<std::pair<Point2, Point2>> clip_line(double theta, double offset) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double x0 = offset * c, y0 = offset * s, dx = -s, dy = c;
    double lo = -1e9, hi = 1e9;
    auto clip = [&](double p, double q) {
      if (p == 0.0) return q >= 0.0;
      const double t = q / p;
      if (p < 0.0)
        lo = std::max(lo, t);
      else
        hi = std::min(hi, t);
      return true;
    };
    if (!clip(-dx, x0 + extent_) || !clip(dx, extent_ - x0) || !clip(-dy, y0 + extent_) || !clip(dy, extent_ - y0))
      return std::nullopt;
    if (lo >= hi) return std::nullopt;
    return std::make_pair(Point2{x0 + lo * dx, y0 + lo * dy}, Point2{x0 + hi * dx, y0 + hi * dy});
  }

  bool inside(const Point2& p) const { return std::abs(p.x) <= extent_ && std::abs(p.y) <= extent_; }

  std::string header(const std::string& title) const {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size_ << "\" height=\"" << size_
       << "\" viewBox=\"0 0 " << size_ << ' ' << size_ << "\">\n"
       << "  <title>" << title << "</title>\n"
       << "  <rect x=\"0\" y=\"0\" width=\"" << size_ << "\" height=\"" << size_ << "\" fill=\"white\"/>\n"
       << "  <g id=\"axes\" stroke=\"#999999\" stroke-width=\"0.5\">\n"
       << "    <line x1=\"0\" y1=\"" << fmt_px(py(0)) << "\" x2=\"" << size_ << "\" y2=\"" << fmt_px(py(0)) << "\"/>\n"
       << "    <line x1=\"" << fmt_px(px(0)) << "\" y1=\"0\" x2=\"" << fmt_px(px(0)) << "\" y2=\"" << size_ << "\"/>\n"
       << "  </g>\n";
    return os.str();
  }

  std::string line(const Point2& a, const Point2& b) const {
    return "<line x1=\"" + fmt_px(px(a.x)) + "\" y1=\"" + fmt_px(py(a.y)) + "\" x2=\"" + fmt_px(px(b.x)) +
           "\" y2=\"" + fmt_px(py(b.y)) + "\"/>";
  }

  std::string path(const std::vector<Point2>& pts, bool closed) const {
    std::string d;
    for (std::size_t i = 0; i < pts.size(); ++i)
      d += (i == 0 ? "M" : " L") + fmt_px(px(pts[i].x)) + "," + fmt_px(py(pts[i].y));
    if (closed) d += " Z";
    return "<path d=\"" + d + "\"/>";
  }

 private:
  double extent_;
  double size_;
};

// ---------------------------------------------------------------------------
// support-lines

inline std::vector<SupportLine> support_line_family(double r, std::size_t count) {
  std::vector<SupportLine> lines(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
    lines[k] = support_line(theta, r);
  }
  return lines;
}

inline std::string support_lines_csv(const std::vector<SupportLine>& lines) {
  std::string out = "theta,offset\n";
  for (const auto& l : lines) out += fmt17(l.theta) + "," + fmt17(l.offset) + "\n";
  return out;
}

inline std::string support_lines_svg(double r, const std::vector<SupportLine>& lines, const SvgStyle& style) {
  const SvgCanvas canvas(1.0 + r + 0.5);
  std::ostringstream os;
  os << canvas.header("Supporting lines of W(F_aI), r = " + fmt17(r));
  os << "  <g id=\"support-lines\" stroke=\"" << style.boundary << "\" stroke-width=\"0.6\" fill=\"none\">\n";
  for (const auto& l : lines)
    if (auto seg = canvas.clip_line(l.theta, l.offset)) os << "    " << canvas.line(seg->first, seg->second) << "\n";
  os << "  </g>\n</svg>\n";
  return os.str();
}

inline CommandResult cmd_support_lines(const RunConfig& cfg) {
  require_radius(cfg.r);
  if (cfg.samples < 1) throw std::invalid_argument("--samples must be positive");
  const auto lines = support_line_family(cfg.r, cfg.samples);
  CommandResult res;
  if (wants(cfg, Format::Csv, {Format::Csv, Format::Svg})) {
    const auto path = output_path(cfg, "support_lines", ".csv");
    write_file(path, support_lines_csv(lines));
    res.written.push_back(path);
  }
  if (wants(cfg, Format::Svg, {Format::Csv, Format::Svg})) {
    const auto path = output_path(cfg, "support_lines", ".svg");
    write_file(path, support_lines_svg(cfg.r, lines, cfg.style));
    res.written.push_back(path);
  }
  return res;
}

// ---------------------------------------------------------------------------
// boundary

inline std::string boundary_csv(const std::vector<BoundaryPoint>& pts) {
  std::string out = "theta,x,y,branch\n";
  for (const auto& p : pts)
    out += fmt17(p.theta) + "," + fmt17(p.x) + "," + fmt17(p.y) + "," + std::string(branch_token(p.branch)) + "\n";
  return out;
}

struct CsvBoundaryRow {
  double theta, x, y;
  Branch branch;
};

inline std::vector<CsvBoundaryRow> parse_boundary_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "theta,x,y,branch") throw std::runtime_error("boundary CSV: bad header");
  std::vector<CsvBoundaryRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[4];
    for (auto& field : f)
      if (!std::getline(ss, field, ',')) throw std::runtime_error("boundary CSV: short row: " + line);
    rows.push_back({std::stod(f[0]), std::stod(f[1]), std::stod(f[2]), parse_branch(f[3])});
  }
  return rows;
}

/// Number of adjacent rows whose branch tags differ.
template <class Rows>
std::size_t branch_transitions(const Rows& rows) {
  std::size_t n = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) n += rows[i].branch != rows[i - 1].branch;
  return n;
}

inline std::string boundary_svg(double r, const std::vector<BoundaryPoint>& pts, const SvgStyle& style) {
  const SvgCanvas canvas(1.0 + r + 0.5);
  std::ostringstream os;
  os << canvas.header("Boundary of W(F_aI), r = " + fmt17(r));

  os << "  <g id=\"circles\" stroke=\"" << style.auxiliary
     << "\" stroke-width=\"1\" stroke-dasharray=\"6,4\" fill=\"none\">\n";
  for (double centre : {-1.0, 1.0})
    os << "    <circle cx=\"" << fmt_px(canvas.px(centre)) << "\" cy=\"" << fmt_px(canvas.py(0.0)) << "\" r=\""
       << fmt_px(r * canvas.scale()) << "\"/>\n";
  os << "  </g>\n";

  // full sextic arcs, split wherever they leave the canvas
  os << "  <g id=\"sextic\" stroke=\"" << style.auxiliary
     << "\" stroke-width=\"1\" stroke-dasharray=\"6,4\" fill=\"none\">\n";
  constexpr std::size_t steps = 2000;
  for (double sign : {1.0, -1.0}) {
    std::vector<Point2> run;
    auto flush = [&] {
      if (run.size() >= 2) os << "    " << canvas.path(run, false) << "\n";
      run.clear();
    };
    for (std::size_t k = 1; k < steps; ++k) {
      const double theta = sign * pi * static_cast<double>(k) / static_cast<double>(steps);
      const Point2 p = sextic_family_point(theta, r);
      if (canvas.inside(p))
        run.push_back(p);
      else
        flush();
    }
    flush();
  }
  os << "  </g>\n";

  os << "  <g id=\"switching-lines\" stroke=\"" << style.switching
     << "\" stroke-width=\"1\" stroke-dasharray=\"6,4\" fill=\"none\">\n";
  for (double theta : switching_angles(r))
    if (auto seg = canvas.clip_line(theta, lambda_max(theta, r)))
      os << "    " << canvas.line(seg->first, seg->second) << "\n";
  os << "  </g>\n";

  std::vector<Point2> outline;
  outline.reserve(pts.size());
  for (const auto& p : pts) outline.push_back({p.x, p.y});
  os << "  <g id=\"boundary\" stroke=\"" << style.boundary << "\" stroke-width=\"2.5\" fill=\"none\">\n"
     << "    " << canvas.path(outline, true) << "\n  </g>\n";

  os << "  <g id=\"switching-points\" fill=\"" << style.switching << "\" stroke=\"none\">\n";
  for (double theta : switching_angles(r)) {
    const auto p = envelope_point(theta, r);
    os << "    <circle cx=\"" << fmt_px(canvas.px(p.x)) << "\" cy=\"" << fmt_px(canvas.py(p.y)) << "\" r=\"5\"/>\n";
  }
  os << "  </g>\n</svg>\n";
  return os.str();
}

inline CommandResult cmd_boundary(const RunConfig& cfg) {
  require_radius(cfg.r);
  if (cfg.r == 0.0)
    return {UsageError, {},
            "r = 0: W(F_0) is the open unit disk and its boundary is the unit circle; "
            "the two-regime boundary is only defined for r > 0"};
  const auto pts = boundary_curve(cfg.r, cfg.samples);
  CommandResult res;
  if (wants(cfg, Format::Csv, {Format::Csv, Format::Svg})) {
    const auto path = output_path(cfg, "boundary", ".csv");
    write_file(path, boundary_csv(pts));
    res.written.push_back(path);
  }
  if (wants(cfg, Format::Svg, {Format::Csv, Format::Svg})) {
    const auto path = output_path(cfg, "boundary", ".svg");
    write_file(path, boundary_svg(cfg.r, pts, cfg.style));
    res.written.push_back(path);
  }
  return res;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  /// "<=" value must not exceed tolerance; ">" value must exceed it.
  std::string relation = "<=";
  bool pass = false;
  std::string detail;
};

inline Check at_most(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value, tol, "<=", value <= tol, std::move(detail)};
}

inline Check above(std::string name, double value, double threshold, std::string detail = {}) {
  return {std::move(name), value, threshold, ">", value > threshold, std::move(detail)};
}

inline std::vector<double> angle_grid(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = -pi + 2.0 * pi * static_cast<double>(k) / static_cast<double>(count);
  return out;
}

/// Largest |closed form - compression| over an angle grid, for a = 2r.
inline double compression_gap(double r, std::size_t n, const std::vector<double>& angles) {
  const auto op = build_foguel(2.0 * r, n);
  const auto values = parallel_map(angles.size(), [&](std::size_t k) {
    return lambda_max(angles[k], r) - top_eigenvalue(hermitian_rotation(op, angles[k])).value;
  });
  return *std::max_element(values.begin(), values.end());
}

inline std::vector<Check> closedform_checks(const RunConfig& cfg) {
  const double r = cfg.r;
  const auto& tol = cfg.tol;
  std::vector<Check> checks;
  const auto thetas = angle_grid(cfg.grid);

  checks.push_back(at_most("numerical_radius", std::abs(lambda_max(0.0, r) - (1.0 + r)), tol.algebraic,
                           "lambda_max(0, r) = 1 + r"));
  checks.push_back(at_most("minor_axis", std::abs(lambda_max(pi / 2.0, r) - std::sqrt(1.0 + r * r)), tol.algebraic,
                           "lambda_max(pi/2, r) = sqrt(1 + r^2)"));
  {
    const BigRational rq(r);  // exact value of the double
    const BigRational e = arc_lhs<BigRational>(BigRational(0), BigRational(1 + rq * rq), rq);
    checks.push_back(at_most("minor_axis_on_sextic", std::abs(e.get_d()), 0.0,
                             "E(0, 1 + r^2, r) evaluated in exact rational arithmetic"));
  }
  {
    double worst = 0.0;
    for (double rr : {0.1, 0.25, 0.5, 1.0, 2.0, 5.0, r}) {
      const double c = switching_cosine(rr);
      worst = std::max(worst, std::abs((rr + c) - std::sqrt(1.0 + rr * rr / (1.0 - c * c))));
    }
    checks.push_back(at_most("switching_continuity", worst, tol.algebraic, "both support branches at the switch"));
  }
  {
    double worst = 0.0, floor_gap = 0.0, mono = 0.0;
    for (double th : thetas) {
      const double l = lambda_max(th, r);
      worst = std::max({worst, std::abs(l - lambda_max(-th, r)), std::abs(l - lambda_max(pi - th, r))});
      floor_gap = std::max(floor_gap, 1.0 - l);
      for (double scale : {0.5, 0.9}) mono = std::max(mono, lambda_max(th, scale * r) - l);
    }
    checks.push_back(at_most("symmetry", worst, tol.algebraic, "theta -> -theta and theta -> pi - theta"));
    checks.push_back(at_most("floor", floor_gap, tol.algebraic, "lambda_max >= 1"));
    checks.push_back(at_most("monotone_in_r", mono, tol.algebraic, "lambda_max nondecreasing in r"));
  }
  {
    double worst = 0.0;
    for (std::size_t k = 0; k <= 90; ++k) {
      const double th = (pi / 2.0) * static_cast<double>(k) / 90.0;
      const auto best = admissible_max(admissible_lambdas(th, r));
      if (best && *best > 1.0) worst = std::max(worst, std::abs(*best - lambda_max(th, r)));
    }
    checks.push_back(at_most("interval_consistency", worst, tol.algebraic, "max of the admissible intervals"));
  }
  {
    double worst = 0.0;
    for (double lambda : {1.2, 1.5, 2.0, 3.0})
      for (double th : {0.0, 0.3, 1.0, 1.4, pi / 2.0}) {
        const auto closed = f_range(lambda, th);
        const auto grid = oracle_f_range(lambda, th, default_f_grid);
        worst = std::max({worst, std::abs(closed.lo - grid.lo), std::abs(closed.hi - grid.hi)});
      }
    checks.push_back(at_most("f_range_vs_grid", worst, 1e-8, "closed-form f(T) against a 1e5-point grid"));
  }
  {
    double sextic = 0.0, circle = 0.0;
    const double c = switching_cosine(r);
    const double a = std::acos(c);
    for (std::size_t k = 1; k <= 2000; ++k) {
      const double th = a + (pi - 2.0 * a) * static_cast<double>(k) / 2001.0;
      for (double sgn : {1.0, -1.0}) {
        const auto p = envelope_point(sgn * th, r);
        const double u = p.x * p.x, v = p.y * p.y;
        sextic = std::max(sextic, std::abs(sextic_eval(u, v, r)) / sextic_scale(u, v, r));
      }
    }
    for (double th : thetas) {
      if (!in_circle_regime(th, r)) continue;
      const auto p = envelope_point(th, r);
      const double centre = p.branch == Branch::CircleRight ? 1.0 : -1.0;
      circle = std::max(circle, std::abs((p.x - centre) * (p.x - centre) + p.y * p.y - r * r));
    }
    checks.push_back(at_most("envelope_on_sextic", sextic, tol.envelope, "relative to the largest monomial"));
    checks.push_back(at_most("envelope_on_circles", circle, tol.algebraic, "(x -+ 1)^2 + y^2 = r^2"));
  }
  {
    const auto pts = boundary_curve(r, cfg.samples);
    const auto worst_support = parallel_map(pts.size(), [&](std::size_t i) {
      double w = -std::numeric_limits<double>::infinity();
      for (double phi : thetas)
        w = std::max(w, pts[i].x * std::cos(phi) + pts[i].y * std::sin(phi) - lambda_max(phi, r));
      return w;
    });
    checks.push_back(at_most("support_consistency", *std::max_element(worst_support.begin(), worst_support.end()),
                             tol.geometric, "boundary points inside every supporting half-plane"));
    double min_cross = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p0 = pts[i];
      const auto& p1 = pts[(i + 1) % pts.size()];
      const auto& p2 = pts[(i + 2) % pts.size()];
      min_cross = std::min(min_cross, (p1.x - p0.x) * (p2.y - p1.y) - (p1.y - p0.y) * (p2.x - p1.x));
    }
    checks.push_back(at_most("convexity", -min_cross, tol.geometric, "negated minimum edge cross product"));
    checks.push_back(at_most("branch_transitions", std::abs(static_cast<double>(branch_transitions(pts)) - 4.0), 0.0,
                             "four switching points"));
  }
  {
    const auto gap = ellipse_gap(r, std::max<std::size_t>(cfg.samples, 2000));
    checks.push_back(above("ellipse_gap", gap.max_gap, tol.algebraic,
                           "distance to the ellipse with half-axes 1 + r and sqrt(1 + r^2); argmax theta = " +
                               fmt17(gap.argmax_theta)));
  }
  return checks;
}

inline std::vector<Check> oracle_checks(const RunConfig& cfg) {
  const double r = cfg.r;
  std::vector<Check> checks;
  const auto angles = angle_grid(72);
  const std::size_t top = cfg.truncation;
  std::vector<std::size_t> levels;
  for (std::size_t n = top; n >= std::max<std::size_t>(top / 8, 1) && levels.size() < 4; n /= 2) levels.push_back(n);
  std::reverse(levels.begin(), levels.end());

  std::vector<std::vector<double>> values;
  for (std::size_t n : levels) {
    const auto op = build_foguel(2.0 * r, n);
    values.push_back(parallel_map(angles.size(), [&](std::size_t k) {
      return top_eigenvalue(hermitian_rotation(op, angles[k])).value;
    }));
  }
  double above_closed = -std::numeric_limits<double>::infinity(), decrease = 0.0;
  std::vector<double> errors;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    double err = 0.0;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double closed = lambda_max(angles[k], r);
      above_closed = std::max(above_closed, values[i][k] - closed);
      err = std::max(err, closed - values[i][k]);
      if (i > 0) decrease = std::max(decrease, values[i - 1][k] - values[i][k]);
    }
    errors.push_back(err);
  }
  std::string trail;
  bool strictly = true;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    trail += (i ? ", " : "") + std::string("N=") + std::to_string(levels[i]) + ": " + fmt17(errors[i]);
    if (i > 0 && !(errors[i] < errors[i - 1])) strictly = false;
  }
  checks.push_back(at_most("compression_bound", above_closed, cfg.tol.algebraic, "compression <= closed form"));
  checks.push_back(at_most("compression_monotone", decrease, cfg.tol.algebraic, "nondecreasing in N"));
  checks.push_back(at_most("oracle_convergence", errors.back(), cfg.tol.convergence, trail));
  checks.push_back(at_most("oracle_error_decreasing", strictly ? 0.0 : 1.0, 0.0, trail));

  {
    const std::complex<double> a = cfg.a.value_or(std::polar(2.0 * r, pi / 7.0));
    const std::size_t n = std::min<std::size_t>(top, 200);
    const auto op_phase = build_foguel(a, n);
    const auto op_real = build_foguel(std::abs(a), n);
    const auto thetas = angle_grid(24);
    const auto diffs = parallel_map(thetas.size(), [&](std::size_t k) {
      return std::abs(top_eigenvalue(hermitian_rotation(op_phase, thetas[k])).value -
                      top_eigenvalue(hermitian_rotation(op_real, thetas[k])).value);
    });
    checks.push_back(at_most("phase_invariance", *std::max_element(diffs.begin(), diffs.end()), 1e-10,
                             "a = " + fmt17(a.real()) + " + " + fmt17(a.imag()) + "i against |a|"));
  }
  {
    const auto thetas = angle_grid(24);
    double worst = 0.0;
    for (double rr : {0.25, 0.5, 1.0}) {
      const auto grid = default_lambda_grid(rr);
      const auto diffs = parallel_map(thetas.size(), [&](std::size_t k) {
        return std::abs(oracle_lambda_max_via_condition(thetas[k], rr, grid) - lambda_max(thetas[k], rr));
      });
      worst = std::max(worst, *std::max_element(diffs.begin(), diffs.end()));
    }
    checks.push_back(at_most("dual_route_lambda", worst, 1e-4, "grid route through 2(r^2 - lambda^2) in f(T)"));
  }
  return checks;
}

inline nlohmann::ordered_json report_json(const ResultantReport& rep) {
  nlohmann::ordered_json j;
  j["r"] = to_string(rep.r);
  j["degree_bound"] = rep.degree_bound;
  j["seed"] = rep.seed;
  j["basis_dimension"] = rep.basis_dimension;
  j["requested_samples"] = rep.requested_samples;
  j["grid_side"] = rep.grid_side;
  j["fitting_samples"] = rep.sample_count;
  j["held_out_samples"] = rep.held_out_count;
  j["redrawn_nodes"] = rep.redrawn_nodes;
  j["success"] = rep.success;
  j["failure"] = rep.failure;
  j["degree_probe_failed"] = rep.probe_failed;
  j["excess_terms"] = rep.excess_terms;
  j["nonzero_residuals"] = rep.nonzero_residuals();
  if (rep.success) {
    j["cofactor_total_degree"] = rep.cofactor_total_degree;
    j["cofactor_terms"] = rep.cofactor_terms;
    j["cofactor_sum_of_squares_power"] = rep.sum_of_squares_power;
    j["cofactor"] = rep.cofactor->str();
    if (rep.cofactor_remainder_factor) j["cofactor_remaining_factor"] = rep.cofactor_remainder_factor->str();
  } else {
    std::vector<std::string> residuals;
    for (const auto& q : rep.held_out_residuals) residuals.push_back(to_string(q));
    j["held_out_residuals"] = residuals;
  }
  return j;
}

inline std::string report_text(const ResultantReport& rep) {
  std::ostringstream os;
  os << "[resultant r = " << to_string(rep.r) << "]\n"
     << "degree_bound = " << rep.degree_bound << "\n"
     << "seed = " << rep.seed << "\n"
     << "basis_dimension = " << rep.basis_dimension << "\n"
     << "fitting_samples = " << rep.sample_count << " (grid " << rep.grid_side << " x " << rep.grid_side << ")\n"
     << "held_out_samples = " << rep.held_out_count << "\n"
     << "status = " << (rep.success ? "success" : "failure") << "\n";
  if (!rep.failure.empty()) os << "failure = " << rep.failure << "\n";
  os << "nonzero_residuals = " << rep.nonzero_residuals() << "\n";
  if (rep.success) {
    os << "cofactor_total_degree = " << rep.cofactor_total_degree << "\n"
       << "cofactor_terms = " << rep.cofactor_terms << "\n"
       << "cofactor_sum_of_squares_power = " << rep.sum_of_squares_power << "\n"
       << "cofactor_remaining_factor = " << rep.cofactor_remainder_factor->str() << "\n";
  } else {
    for (std::size_t k = 0; k < rep.held_out_residuals.size(); ++k)
      os << "residual[" << k << "] = " << to_string(rep.held_out_residuals[k]) << "\n";
  }
  return os.str();
}

inline ExactPoly mutated_arc() {
  ExactPoly arc = arc_polynomial();
  arc.add_term({2, 0, 6}, BigInt(1));  // 16 r^6 u^2 -> 17 r^6 u^2
  return arc;
}

inline BigRational exact_radius(const RunConfig& cfg) { return BigRational(cfg.r); }

inline CommandResult cmd_verify(const RunConfig& cfg) {
  require_radius(cfg.r);
  if (cfg.r == 0.0) throw DegenerateRadius("verify: the suite needs r > 0");
  if (cfg.grid < 64) throw std::invalid_argument("--grid must be at least 64");
  if (cfg.truncation < 8) throw std::invalid_argument("--N must be at least 8");
  std::vector<Check> checks = closedform_checks(cfg);
  for (auto& c : oracle_checks(cfg)) checks.push_back(std::move(c));
  if (cfg.with_resultant) {
    const BigRational rq = cfg.r_values.empty() ? exact_radius(cfg) : parse_rational(cfg.r_values.front());
    const std::size_t samples = std::max(cfg.samples, minimum_sample_count(cfg.degree_bound));
    const auto rep = verify_arc_identity(rq, cfg.degree_bound, samples, cfg.seed);
    checks.push_back(at_most("arc_identity",
                             static_cast<double>(rep.nonzero_residuals() + rep.excess_terms + rep.probe_failed),
                             0.0, rep.success ? "E divides Res at r = " + to_string(rq) : rep.failure));
  }

  nlohmann::ordered_json j;
  j["command"] = "verify";
  j["r"] = cfg.r;
  if (cfg.a) j["a"] = {cfg.a->real(), cfg.a->imag()};
  j["samples"] = cfg.samples;
  j["N"] = cfg.truncation;
  j["grid"] = cfg.grid;
  j["seed"] = cfg.seed;
  bool all = true;
  std::string failing;
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["relation"] = c.relation;
    e["tolerance"] = c.tolerance;
    e["pass"] = c.pass;
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["checks"].push_back(e);
    if (!c.pass) {
      all = false;
      failing += (failing.empty() ? "" : ", ") + c.name;
    }
  }
  j["pass"] = all;

  CommandResult res;
  if (wants(cfg, Format::Json, {Format::Json})) {
    const auto path = output_path(cfg, "verify", ".json");
    write_file(path, j.dump(2) + "\n");
    res.written.push_back(path);
  }
  std::ostringstream summary;
  for (const auto& c : checks)
    summary << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << fmt17(c.value) << ' ' << c.relation << ' '
            << fmt17(c.tolerance) << "\n";
  res.message = summary.str();
  if (!all) {
    res.exit_code = VerificationFailure;
    res.message += "failing checks: " + failing + "\n";
  }
  return res;
}

// ---------------------------------------------------------------------------
// resultant

inline CommandResult cmd_resultant(const RunConfig& cfg) {
  std::vector<BigRational> radii;
  if (cfg.r_values.empty()) {
    radii = {make_rational(1, 2), make_rational(1, 3), make_rational(2)};
  } else {
    for (const auto& s : cfg.r_values) radii.push_back(parse_rational(s));
  }
  for (const auto& q : radii)
    if (q == 0) throw DegenerateRadius("resultant: r = 0 makes both leading coefficients in t vanish");
  const std::size_t minimum = minimum_sample_count(cfg.degree_bound);
  if (cfg.samples_explicit && cfg.samples < minimum)
    throw std::invalid_argument("--samples must be at least " + std::to_string(minimum) + " for degree bound " +
                                std::to_string(cfg.degree_bound));
  const std::size_t samples = cfg.samples_explicit ? cfg.samples : std::max(cfg.samples, minimum);
  const ExactPoly arc = cfg.mutate ? mutated_arc() : arc_polynomial();

  nlohmann::ordered_json j;
  j["command"] = "resultant";
  j["mutated"] = cfg.mutate;
  std::string text = cfg.mutate ? "# self-test: coefficient of r^6 u^2 changed from 16 to 17\n" : "";
  bool all = true;
  for (const auto& rq : radii) {
    const auto rep = verify_arc_identity(rq, cfg.degree_bound, samples, cfg.seed, arc);
    auto entry = report_json(rep);
    text += report_text(rep);
    if (cfg.symbolic) {
      const auto sym = symbolic_elimination(rq, arc);
      const bool matches = rep.cofactor && sym.remainder.is_zero() && sym.quotient == *rep.cofactor;
      entry["symbolic_resultant_total_degree"] = sym.resultant.total_degree();
      entry["symbolic_remainder_zero"] = sym.remainder.is_zero();
      entry["symbolic_quotient_matches_cofactor"] = matches;
      text += "symbolic_resultant_total_degree = " + std::to_string(sym.resultant.total_degree()) + "\n" +
              "symbolic_remainder_zero = " + (sym.remainder.is_zero() ? "true" : "false") + "\n" +
              "symbolic_quotient_matches_cofactor = " + (matches ? "true" : "false") + "\n";
      all = all && sym.remainder.is_zero() && matches;
    }
    text += "\n";
    all = all && rep.success;
    j["reports"].push_back(entry);
  }
  j["pass"] = all;

  CommandResult res;
  const auto txt_path = output_path(cfg, "resultant", ".txt");
  write_file(txt_path, text);
  res.written.push_back(txt_path);
  if (wants(cfg, Format::Json, {Format::Json})) {
    const auto json_path = output_path(cfg, "resultant", ".json");
    write_file(json_path, j.dump(2) + "\n");
    res.written.push_back(json_path);
  }
  res.message = text;
  if (!all) res.exit_code = VerificationFailure;
  return res;
}

inline CommandResult dispatch(const RunConfig& cfg) {
  if (cfg.command == "support-lines") return cmd_support_lines(cfg);
  if (cfg.command == "boundary") return cmd_boundary(cfg);
  if (cfg.command == "verify") return cmd_verify(cfg);
  if (cfg.command == "resultant") return cmd_resultant(cfg);
  return {UsageError, {}, "unknown command: " + cfg.command};
}

/// Runs a command, mapping exceptions onto the exit-code contract.
inline CommandResult run(const RunConfig& cfg) {
  try {
    return dispatch(cfg);
  } catch (const IoFailure& e) {
    return {IoError, {}, e.what()};
  } catch (const DegenerateRadius& e) {
    return {UsageError, {}, e.what()};
  } catch (const std::invalid_argument& e) {
    return {UsageError, {}, e.what()};
  } catch (const ConvergenceError& e) {
    return {VerificationFailure, {}, e.what()};
  }
}

}  // namespace fnr::cli
