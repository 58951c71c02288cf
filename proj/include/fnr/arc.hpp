#pragma once

// Verbatim transcriptions of the two polynomial objects the boundary is
// built from: the implicit sextic of the upper/lower arcs and the pair of
// polynomials in t = tan(theta/2) whose resultant produces it.
//
// Each is written once, generically over the arithmetic type, and then
// instantiated for double (closedform), BigRational (exact checks) and
// ExactPoly (symbolic term tables). There is no second copy anywhere.

#include <utility>

#include "fnr/exactpoly.hpp"

namespace fnr {

/// Left-hand side of the boundary sextic in u = x^2, v = y^2.
template <class T>
T arc_lhs(const T& u, const T& v, const T& r) {
  const T r2 = r * r;
  const T r4 = r2 * r2;
  const T r6 = r4 * r2;
  const T um1 = u - 1;
  const T s = u + v;

  const T deg6 = 16 * r6 * s * s;
  const T quartic_inner = T(u * u * u) + T(T(v - 1) * T(T(4 * u * u) + T(5 * u * v) - u + T(2 * v * v))) - v;
  const T deg4 = 8 * r4 * quartic_inner;
  const T quad_inner = T(T(T(u - 20) * u) - 8) * v * v + T(2 * T(T(T(u - 15) * u) - 4) * um1 * v) +
                       T(T(T(u - 10) * u) + 1) * um1 * um1;
  const T deg2 = r2 * quad_inner;
  const T deg0 = um1 * um1 * um1 * T(u + v - 1);
  return T(T(deg6 - deg4) + deg2) + deg0;
}

/// First polynomial of the t-system (degree 10 in t).
template <class T>
T tp_first(const T& t, const T& r, const T& x, const T& y) {
  const T r2 = r * r;
  const T t2 = t * t;
  const T t3 = t2 * t;
  const T t4 = t2 * t2;
  const T t5 = t4 * t;
  const T t6 = t4 * t2;
  const T t7 = t6 * t;
  const T t8 = t4 * t4;
  const T t10 = t8 * t2;
  const T xy = x * y;
  const T mix = T(r2 - T(8 * x * x)) + T(8 * y * y);
  return T(-r2 * t10) - T(3 * r2 * t8) - T(2 * t6 * mix) + T(2 * t4 * mix) + T(3 * r2 * t2) + r2 +
         T(8 * t7 * xy) - T(48 * t5 * xy) + T(8 * t3 * xy);
}

/// Second polynomial of the t-system (degree 8 in t).
template <class T>
T tp_second(const T& t, const T& r, const T& x, const T& y) {
  const T r2 = r * r;
  const T t2 = t * t;
  const T t3 = t2 * t;
  const T t4 = t2 * t2;
  const T t5 = t4 * t;
  const T t6 = t4 * t2;
  const T t8 = t4 * t4;
  const T xy = x * y;
  const T a = T(r2 - T(x * x)) + 1;
  const T b = T(T(T(3 * r2) + T(4 * x * x)) - T(8 * y * y)) + 4;
  return T(-r2 * t8) - T(4 * t6 * a) - T(2 * t4 * b) - T(4 * t2 * a) - r2 - T(16 * t5 * xy) + T(16 * t3 * xy);
}

/// The sextic as an element of Z[u, v, r].
inline ExactPoly arc_polynomial() {
  const std::vector<std::string> vars{"u", "v", "r"};
  return arc_lhs(ExactPoly::variable(vars, "u"), ExactPoly::variable(vars, "v"), ExactPoly::variable(vars, "r"));
}

/// The t-system as elements of Z[t, r, x, y].
inline std::pair<ExactPoly, ExactPoly> tp_polynomials() {
  const std::vector<std::string> vars{"t", "r", "x", "y"};
  const auto t = ExactPoly::variable(vars, "t");
  const auto r = ExactPoly::variable(vars, "r");
  const auto x = ExactPoly::variable(vars, "x");
  const auto y = ExactPoly::variable(vars, "y");
  return {tp_first(t, r, x, y), tp_second(t, r, x, y)};
}

/// E(x^2, y^2) at a fixed rational r, as a polynomial in {x, y}.
inline RationalPoly arc_in_xy(const ExactPoly& arc, const BigRational& r) {
  const std::vector<std::string> xy{"x", "y"};
  const RationalPoly fixed = specialize(arc, "r", r);  // variables {u, v}
  const auto x = RationalPoly::variable(xy, "x");
  const auto y = RationalPoly::variable(xy, "y");
  return compose(fixed, xy, {x * x, y * y});
}

}  // namespace fnr
