#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fnr/arc.hpp"
#include "fnr/closedform.hpp"
#include "fnr/exactpoly.hpp"

using namespace fnr;

namespace {

const std::vector<std::string> kVars{"t", "r", "x", "y"};

ExactPoly random_poly(std::mt19937_64& rng, unsigned max_degree = 3, int terms = 6) {
  ExactPoly p(kVars);
  for (int i = 0; i < terms; ++i) {
    Exponents e(kVars.size());
    for (auto& k : e) k = static_cast<unsigned>(rng() % (max_degree + 1));
    p.add_term(e, BigInt(static_cast<long>(rng() % 41) - 20));
  }
  return p;
}

BigRational random_rational(std::mt19937_64& rng) {
  return make_rational(static_cast<long>(rng() % 201) - 100, static_cast<long>(rng() % 50) + 1);
}

}  // namespace

TEST(BigRational, Parsing) {
  EXPECT_EQ(parse_rational("1/2"), make_rational(1, 2));
  EXPECT_EQ(parse_rational("-6/4"), make_rational(-3, 2));
  EXPECT_EQ(parse_rational("0.125"), make_rational(1, 8));
  EXPECT_EQ(parse_rational("-.5"), make_rational(-1, 2));
  EXPECT_EQ(parse_rational("7"), make_rational(7));
  EXPECT_EQ(parse_rational("2/-4").get_den(), 2);  // canonical: positive denominator
  EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(parse_rational(""), std::invalid_argument);
}

TEST(ExactPoly, NoZeroCoefficientsStored) {
  ExactPoly p(kVars);
  p.add_term({1, 0, 0, 0}, 3);
  p.add_term({1, 0, 0, 0}, -3);
  EXPECT_TRUE(p.is_zero());
  EXPECT_THROW(p.add_term({1, 0}, 1), std::invalid_argument);
  const auto x = ExactPoly::variable(kVars, "x");
  EXPECT_TRUE((x - x).is_zero());
}

TEST(ExactPoly, RingLawsOnRandomTriples) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(ExactPoly, EvaluationIsAHomomorphism) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    const auto p = random_poly(rng), q = random_poly(rng);
    const std::vector<BigRational> point{random_rational(rng), random_rational(rng), random_rational(rng),
                                         random_rational(rng)};
    const std::span<const BigRational> at(point);
    EXPECT_EQ((p * q).evaluate(at), p.evaluate(at) * q.evaluate(at));
    EXPECT_EQ((p + q).evaluate(at), p.evaluate(at) + q.evaluate(at));
  }
}

TEST(ExactPoly, PowAndDegrees) {
  const auto x = ExactPoly::variable(kVars, "x");
  const auto y = ExactPoly::variable(kVars, "y");
  const auto s = (x + y).pow(5);
  EXPECT_EQ(s.total_degree(), 5u);
  EXPECT_EQ(s.coefficient({0, 0, 2, 3}), 10);
  EXPECT_EQ(s.degree("x"), 5u);
  EXPECT_EQ(s.degree("t"), 0u);
}

TEST(ExactPoly, DivisionExactAndWithRemainder) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> xy{"x", "y"};
  for (int trial = 0; trial < 20; ++trial) {
    RationalPoly a(xy), b(xy);
    for (int i = 0; i < 5; ++i) {
      a.add_term({static_cast<unsigned>(rng() % 4), static_cast<unsigned>(rng() % 4)}, random_rational(rng));
      b.add_term({static_cast<unsigned>(rng() % 3), static_cast<unsigned>(rng() % 3)}, random_rational(rng));
    }
    if (b.is_zero()) continue;
    const auto d = divide(a * b, b);
    EXPECT_TRUE(d.remainder.is_zero());
    EXPECT_EQ(d.quotient, a);
    const auto e = divide(a, b);
    EXPECT_EQ(e.quotient * b + e.remainder, a);
  }
}

TEST(TpPolynomials, TranscribedCoefficients) {
  const auto [p1, p2] = tp_polynomials();
  EXPECT_EQ(p1.degree("t"), 10u);
  EXPECT_EQ(p2.degree("t"), 8u);
  // +8 t^7 x y
  EXPECT_EQ(p1.coefficient({7, 0, 1, 1}), 8);
  // -r^2 constant term in t of the second polynomial
  EXPECT_EQ(p2.coefficient({0, 2, 0, 0}), -1);
  EXPECT_EQ(p2.coefficient({0, 0, 0, 0}), 0);
  // leading coefficients -r^2
  EXPECT_EQ(p1.coefficient({10, 2, 0, 0}), -1);
  EXPECT_EQ(p2.coefficient({8, 2, 0, 0}), -1);
}

TEST(TpPolynomials, VanishOnEnvelopePoints) {
  const auto [p1, p2] = tp_polynomials();
  auto abs_poly = [](const ExactPoly& p) {
    ExactPoly q(p.variables());
    for (const auto& [e, c] : p.terms()) q.add_term(e, abs(c));
    return q;
  };
  const auto s1 = abs_poly(p1), s2 = abs_poly(p2);
  const double r = 0.5;
  const double a = std::acos(switching_cosine(r));
  for (int k = 1; k < 40; ++k) {
    const double th = a + (pi - 2.0 * a) * k / 40.0;
    const auto p = envelope_point(th, r);
    const double t = std::tan(th / 2.0);
    const std::vector<double> at{t, r, p.x, p.y};
    const std::vector<double> mag{std::abs(t), r, std::abs(p.x), std::abs(p.y)};
    EXPECT_LE(std::abs(p1.evaluate<double>(std::span<const double>(at))),
              1e-6 * s1.evaluate<double>(std::span<const double>(mag)))
        << th;
    EXPECT_LE(std::abs(p2.evaluate<double>(std::span<const double>(at))),
              1e-6 * s2.evaluate<double>(std::span<const double>(mag)))
        << th;
  }
}

TEST(ArcPolynomial, Examples) {
  const auto e = arc_polynomial();
  EXPECT_EQ(e.variables(), (std::vector<std::string>{"u", "v", "r"}));
  EXPECT_EQ(e.coefficient({2, 0, 6}), 16);  // 16 r^6 u^2
  EXPECT_EQ(e.coefficient({0, 2, 6}), 16);  // 16 r^6 v^2
  EXPECT_EQ(e.coefficient({1, 1, 6}), 32);
  EXPECT_EQ(e.total_degree(), 8u);
  for (const auto& r : {make_rational(1, 2), make_rational(1, 3), make_rational(2)}) {
    const BigRational v = 1 + r * r;
    EXPECT_EQ(e.evaluate<BigRational>({BigRational(0), v, r}), 0) << r;
  }
  EXPECT_EQ(e.evaluate<BigRational>({BigRational(1), BigRational(0), make_rational(1, 2)}), make_rational(5, 4));
}

TEST(ArcPolynomial, FloatingEvaluationAgreesWithExact) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-4.0, 4.0), rr(0.0, 4.0);
  const auto e = arc_polynomial();
  for (int i = 0; i < 100; ++i) {
    const double uu = u(rng), vv = u(rng), r = rr(rng);
    const BigRational exact = e.evaluate<BigRational>({BigRational(uu), BigRational(vv), BigRational(r)});
    EXPECT_LE(std::abs(sextic_eval(uu, vv, r) - exact.get_d()), 1e-12 * sextic_scale(uu, vv, r));
  }
}

TEST(Compose, SubstitutesSquares) {
  const auto e = arc_in_xy(arc_polynomial(), make_rational(1, 2));
  EXPECT_EQ(e.variables(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(e.total_degree(), 8u);
  EXPECT_EQ(e.degree("x"), 8u);
  // odd powers never appear after u = x^2, v = y^2
  for (const auto& [exp, c] : e.terms()) {
    EXPECT_EQ(exp[0] % 2, 0u);
    EXPECT_EQ(exp[1] % 2, 0u);
  }
  const BigRational top = e.evaluate<BigRational>({BigRational(0), BigRational(0)});
  EXPECT_EQ(top, arc_polynomial().evaluate<BigRational>({BigRational(0), BigRational(0), make_rational(1, 2)}));
}
