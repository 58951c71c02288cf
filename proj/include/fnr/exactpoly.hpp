#pragma once

// Sparse multivariate polynomials with arbitrary-precision coefficients.
//
// Polynomial<mpz_class> (ExactPoly) holds the integer transcriptions of the
// t-system and the boundary sextic. Polynomial<mpq_class> (RationalPoly) is
// used once a rational value of r has been fixed, for interpolation and exact
// division.

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fnr {

using BigInt = mpz_class;
/// Always kept canonical: positive denominator, lowest terms.
using BigRational = mpq_class;

inline BigRational make_rational(long num, long den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  BigRational q(num, den);
  q.canonicalize();
  return q;
}

/// Parses "p/q", an integer, or a plain decimal such as "-0.125" exactly.
inline BigRational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto is_int = [](std::string_view v) {
    if (!v.empty() && (v.front() == '-' || v.front() == '+')) v.remove_prefix(1);
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  auto to_int = [](std::string v) {
    if (!v.empty() && v.front() == '+') v.erase(0, 1);
    return BigInt(v);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw std::invalid_argument("malformed rational: " + s);
    BigInt d = to_int(den);
    if (d == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    BigRational q(to_int(num), d);
    q.canonicalize();
    return q;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    if (!is_int(whole) || !std::all_of(frac.begin(), frac.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw std::invalid_argument("malformed decimal: " + s);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigRational q(BigInt(whole) * scale + BigInt(frac), scale);
    q.canonicalize();
    return negative ? BigRational(-q) : q;
  }
  if (!is_int(s)) throw std::invalid_argument("malformed rational: " + s);
  return BigRational(to_int(s));
}

inline std::string to_string(const BigRational& q) { return q.get_str(); }

using Exponents = std::vector<unsigned>;

template <class Coeff>
class Polynomial {
 public:
  using coeff_type = Coeff;
  using term_map = std::map<Exponents, Coeff>;

  Polynomial() = default;
  explicit Polynomial(std::vector<std::string> variables) : vars_(std::move(variables)) {}

  static Polynomial constant(std::vector<std::string> variables, const Coeff& c) {
    Polynomial p(std::move(variables));
    p.add_term(Exponents(p.vars_.size(), 0), c);
    return p;
  }

  static Polynomial variable(std::vector<std::string> variables, std::string_view name) {
    Polynomial p(std::move(variables));
    Exponents e(p.vars_.size(), 0);
    e.at(p.index_of(name)) = 1;
    p.add_term(std::move(e), Coeff(1));
    return p;
  }

  const std::vector<std::string>& variables() const noexcept { return vars_; }
  const term_map& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  std::size_t index_of(std::string_view name) const {
    auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) throw std::out_of_range("unknown variable: " + std::string(name));
    return static_cast<std::size_t>(it - vars_.begin());
  }

  Coeff coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(Exponents e, const Coeff& c) {
    if (e.size() != vars_.size()) throw std::invalid_argument("exponent vector length mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  unsigned degree(std::string_view name) const {
    const std::size_t i = index_of(name);
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
  }

  unsigned total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
      unsigned s = 0;
      for (unsigned k : e) s += k;
      d = std::max(d, s);
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    adopt_variables(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& o) {
    adopt_variables(o);
    for (const auto& [e, c] : o.terms_) add_term(e, Coeff(-c));
    return *this;
  }

  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial& operator*=(const Coeff& k) {
    if (k == 0) {
      terms_.clear();
    } else {
      for (auto& [e, c] : terms_) c *= k;
    }
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(a.vars_.empty() ? b.vars_ : a.vars_);
    if (!a.vars_.empty() && !b.vars_.empty() && a.vars_ != b.vars_)
      throw std::invalid_argument("polynomials over different variable lists");
    Exponents e(out.vars_.size());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, Coeff(ca * cb));
      }
    }
    return out;
  }

  friend Polynomial operator*(Polynomial a, const Coeff& k) { return a *= k; }
  friend Polynomial operator*(const Coeff& k, Polynomial a) { return a *= k; }

  // Integer literals, so that generic transcriptions such as 16 * r * r
  // work uniformly for double, BigRational and Polynomial.
  friend Polynomial operator*(long k, Polynomial a) { return a *= Coeff(k); }
  friend Polynomial operator*(Polynomial a, long k) { return a *= Coeff(k); }
  friend Polynomial operator+(Polynomial a, long k) { return a += constant(a.vars_, Coeff(k)); }
  friend Polynomial operator+(long k, Polynomial a) { return a += constant(a.vars_, Coeff(k)); }
  friend Polynomial operator-(Polynomial a, long k) { return a -= constant(a.vars_, Coeff(k)); }
  friend Polynomial operator-(long k, const Polynomial& a) { return constant(a.vars_, Coeff(k)) - a; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_;
  }

  Polynomial pow(unsigned n) const {
    Polynomial result = constant(vars_, Coeff(1));
    Polynomial base = *this;
    while (n) {
      if (n & 1u) result *= base;
      n >>= 1u;
      if (n) base *= base;
    }
    return result;
  }

  /// Exact evaluation; point[i] is the value of variables()[i].
  template <class Value>
  Value evaluate(std::span<const Value> point) const {
    if (point.size() != vars_.size()) throw std::invalid_argument("evaluation point has wrong arity");
    std::vector<std::vector<Value>> powers(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      powers[i].push_back(Value(1));
      for (unsigned k = 1; k <= degree(vars_[i]); ++k) powers[i].push_back(Value(powers[i].back() * point[i]));
    }
    Value acc(0);
    for (const auto& [e, c] : terms_) {
      Value term = coefficient_as<Value>(c);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) term = term * powers[i][e[i]];
      acc = acc + term;
    }
    return acc;
  }

  template <class Value>
  Value evaluate(std::initializer_list<Value> point) const {
    return evaluate<Value>(std::span<const Value>(point.begin(), point.size()));
  }

  /// Coefficients of the powers of one variable after fixing all the others,
  /// index k holding the coefficient of name^k.
  std::vector<BigRational> univariate_coefficients(std::string_view name,
                                                   const std::map<std::string, BigRational>& values) const {
    const std::size_t idx = index_of(name);
    std::vector<BigRational> out(degree(name) + 1, BigRational(0));
    for (const auto& [e, c] : terms_) {
      BigRational term(c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i == idx || e[i] == 0) continue;
        auto it = values.find(vars_[i]);
        if (it == values.end()) throw std::invalid_argument("no value for variable " + vars_[i]);
        BigRational p;
        mpz_pow_ui(p.get_num_mpz_t(), it->second.get_num_mpz_t(), e[i]);
        mpz_pow_ui(p.get_den_mpz_t(), it->second.get_den_mpz_t(), e[i]);
        term *= p;
      }
      out[e[idx]] += term;
    }
    return out;
  }

  /// Leading term in lexicographic order of the exponent vectors.
  std::pair<Exponents, Coeff> leading_term() const {
    if (terms_.empty()) throw std::domain_error("leading term of the zero polynomial");
    const auto& last = *terms_.rbegin();
    return {last.first, last.second};
  }

  friend std::ostream& operator<<(std::ostream& os, const Polynomial& p) {
    if (p.terms_.empty()) return os << "0";
    bool first = true;
    for (auto it = p.terms_.rbegin(); it != p.terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      std::ostringstream coef;
      coef << c;
      std::string cs = coef.str();
      bool negative = !cs.empty() && cs.front() == '-';
      if (negative) cs.erase(0, 1);
      os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
      first = false;
      bool monomial = std::any_of(e.begin(), e.end(), [](unsigned k) { return k != 0; });
      if (cs != "1" || !monomial) os << cs << (monomial ? "*" : "");
      bool sep = false;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (!e[i]) continue;
        os << (sep ? "*" : "") << p.vars_[i];
        if (e[i] > 1) os << '^' << e[i];
        sep = true;
      }
    }
    return os;
  }

  std::string str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

 private:
  template <class Value>
  static Value coefficient_as(const Coeff& c) {
    if constexpr (std::is_same_v<Value, double>) {
      return c.get_d();
    } else {
      return Value(c);
    }
  }

  void adopt_variables(const Polynomial& o) {
    if (vars_.empty() && terms_.empty()) {
      vars_ = o.vars_;
    } else if (!o.vars_.empty() && vars_ != o.vars_) {
      throw std::invalid_argument("polynomials over different variable lists");
    }
  }

  std::vector<std::string> vars_;
  term_map terms_;
};

using ExactPoly = Polynomial<BigInt>;
using RationalPoly = Polynomial<BigRational>;

inline RationalPoly to_rational(const ExactPoly& p) {
  RationalPoly out(p.variables());
  for (const auto& [e, c] : p.terms()) out.add_term(e, BigRational(c));
  return out;
}

/// Replaces each variable of p by a polynomial over `variables`.
/// substitutions[i] is the image of p.variables()[i].
template <class Coeff>
Polynomial<Coeff> compose(const Polynomial<Coeff>& p, const std::vector<std::string>& variables,
                          const std::vector<Polynomial<Coeff>>& substitutions) {
  if (substitutions.size() != p.variables().size())
    throw std::invalid_argument("compose: one substitution per variable required");
  std::vector<std::vector<Polynomial<Coeff>>> powers(substitutions.size());
  for (std::size_t i = 0; i < substitutions.size(); ++i) {
    powers[i].push_back(Polynomial<Coeff>::constant(variables, Coeff(1)));
    const unsigned d = p.degree(p.variables()[i]);
    for (unsigned k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * substitutions[i]);
  }
  Polynomial<Coeff> out(variables);
  for (const auto& [e, c] : p.terms()) {
    Polynomial<Coeff> term = Polynomial<Coeff>::constant(variables, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= powers[i][e[i]];
    out += term;
  }
  return out;
}

/// Fixes one variable of an integer polynomial at a rational value and drops
/// it from the variable list.
inline RationalPoly specialize(const ExactPoly& p, std::string_view name, const BigRational& value) {
  const std::size_t idx = p.index_of(name);
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < p.variables().size(); ++i)
    if (i != idx) rest.push_back(p.variables()[i]);
  RationalPoly out(rest);
  for (const auto& [e, c] : p.terms()) {
    BigRational factor;
    mpz_pow_ui(factor.get_num_mpz_t(), value.get_num_mpz_t(), e[idx]);
    mpz_pow_ui(factor.get_den_mpz_t(), value.get_den_mpz_t(), e[idx]);
    factor.canonicalize();
    Exponents reduced;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != idx) reduced.push_back(e[i]);
    out.add_term(std::move(reduced), BigRational(factor * c));
  }
  return out;
}

struct Division {
  RationalPoly quotient;
  RationalPoly remainder;
};

/// Multivariate long division in lexicographic order. With a single divisor
/// the remainder vanishes exactly when the divisor divides the dividend.
inline Division divide(const RationalPoly& dividend, const RationalPoly& divisor) {
  if (divisor.is_zero()) throw std::domain_error("division by the zero polynomial");
  if (dividend.variables() != divisor.variables())
    throw std::invalid_argument("divide: variable lists differ");
  const auto& vars = dividend.variables();
  const auto [lead_e, lead_c] = divisor.leading_term();
  Division out{RationalPoly(vars), RationalPoly(vars)};
  RationalPoly work = dividend;
  while (!work.is_zero()) {
    auto [e, c] = work.leading_term();
    bool divisible = true;
    Exponents shift(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] < lead_e[i]) {
        divisible = false;
        break;
      }
      shift[i] = e[i] - lead_e[i];
    }
    if (divisible) {
      BigRational k = c / lead_c;
      RationalPoly step(vars);
      step.add_term(shift, k);
      out.quotient.add_term(shift, k);
      work -= step * divisor;
    } else {
      out.remainder.add_term(e, c);
      RationalPoly lead(vars);
      lead.add_term(e, c);
      work -= lead;
    }
  }
  return out;
}

}  // namespace fnr
