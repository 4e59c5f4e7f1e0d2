#pragma once

// Exponential polynomials phi = sum_j a_j z^(-j/l) with Gaussian-rational coefficients.

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/rational.hpp"

namespace stokes {

/// phi in z^(-1/l) Q(i)[z^(-1/l)], stored canonically: zero coefficients are dropped and
/// gcd(l, exponents) = 1. The zero polynomial has l = 1 and no terms.
class ExpPolynomial {
 public:
  using Terms = std::map<long, ComplexRational>;  // j -> coefficient of z^(-j/l)

  ExpPolynomial() = default;
  ExpPolynomial(long ram_index, Terms terms) : l_(ram_index), terms_(std::move(terms)) {
    if (l_ < 1) throw DomainError("ramification index must be positive");
    for (const auto& [j, c] : terms_)
      if (j < 1) throw DomainError("exponent numerator must be positive (phi has no constant or positive-power terms)");
    canonicalize();
  }

  /// c * z^(-n).
  static ExpPolynomial monomial(ComplexRational c, long n, long l = 1) { return ExpPolynomial(l, Terms{{n, std::move(c)}}); }

  long ram_index() const { return l_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_ramified() const { return l_ > 1; }

  /// Largest stored j (so the pole order in z is pole_order() / ram_index()).
  long pole_order() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

  const ComplexRational& leading_coefficient() const {
    if (terms_.empty()) throw DomainError("zero polynomial has no leading coefficient");
    return terms_.rbegin()->second;
  }

  ComplexRational coefficient(long j) const {
    auto it = terms_.find(j);
    return it == terms_.end() ? ComplexRational{} : it->second;
  }

  /// Same function written over ramification index l * k (exponents scaled by k); not canonical.
  Terms terms_over(long multiple) const {
    Terms out;
    for (const auto& [j, c] : terms_) out.emplace(j * multiple, c);
    return out;
  }

  /// phi(w^k): unramified in w when k is a multiple of l.
  ExpPolynomial lift(long k) const {
    if (k < 1 || k % l_ != 0) throw DomainError("lift index must be a positive multiple of the ramification index");
    return ExpPolynomial(1, terms_over(k / l_));
  }

  ExpPolynomial scaled(const ComplexRational& c) const {
    Terms out;
    for (const auto& [j, a] : terms_) out.emplace(j, a * c);
    return ExpPolynomial(l_, std::move(out));
  }

  friend ExpPolynomial operator-(const ExpPolynomial& p) { return p.scaled(ComplexRational(-1)); }
  friend ExpPolynomial operator+(const ExpPolynomial& a, const ExpPolynomial& b);
  friend ExpPolynomial operator-(const ExpPolynomial& a, const ExpPolynomial& b) { return a + (-b); }

  friend bool operator==(const ExpPolynomial& a, const ExpPolynomial& b) { return a.l_ == b.l_ && a.terms_ == b.terms_; }
  friend bool operator!=(const ExpPolynomial& a, const ExpPolynomial& b) { return !(a == b); }

  /// Canonical text, terms in decreasing exponent order, e.g. "(1+2i)/z^3 - 4/z".
  std::string to_string() const;

 private:
  void canonicalize() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second.is_zero())
        it = terms_.erase(it);
      else
        ++it;
    }
    if (terms_.empty()) {
      l_ = 1;
      return;
    }
    long g = l_;
    for (const auto& [j, c] : terms_) g = std::gcd(g, j);
    if (g > 1) {
      Terms reduced;
      for (auto& [j, c] : terms_) reduced.emplace(j / g, std::move(c));
      terms_ = std::move(reduced);
      l_ /= g;
    }
  }

  long l_ = 1;
  Terms terms_;
};

inline ExpPolynomial operator+(const ExpPolynomial& a, const ExpPolynomial& b) {
  long l = std::lcm(a.l_, b.l_);
  ExpPolynomial::Terms sum = a.terms_over(l / a.l_);
  for (const auto& [j, c] : b.terms_over(l / b.l_)) {
    auto [it, inserted] = sum.emplace(j, c);
    if (!inserted) it->second += c;
  }
  return ExpPolynomial(l, std::move(sum));
}

/// Katz slope n/l in lowest terms (0 for the zero polynomial).
inline Rational katz_slope(const ExpPolynomial& phi) { return make_rational(phi.pole_order(), phi.ram_index()); }

/// lambda > 0 with phi1 = lambda * phi2, if any. Both zero gives lambda = 1.
inline std::optional<Rational> positive_proportionality(const ExpPolynomial& phi1, const ExpPolynomial& phi2) {
  if (phi1.is_zero() && phi2.is_zero()) return Rational(1);
  if (phi1.is_zero() || phi2.is_zero()) return std::nullopt;
  if (phi1.ram_index() != phi2.ram_index() || phi1.terms().size() != phi2.terms().size()) return std::nullopt;
  std::optional<Rational> lambda;
  auto it2 = phi2.terms().begin();
  for (const auto& [j, c1] : phi1.terms()) {
    if (it2->first != j) return std::nullopt;
    ComplexRational ratio = c1 / it2->second;
    if (!ratio.is_positive_real()) return std::nullopt;
    if (lambda && *lambda != ratio.re()) return std::nullopt;
    lambda = ratio.re();
    ++it2;
  }
  return lambda;
}

/// phi o zeta for zeta an inverse branch of z -> z^l: every exponent j/l' becomes j/(l l').
inline ExpPolynomial ramify(const ExpPolynomial& phi, long l) {
  if (l < 1) throw DomainError("ramify: l must be positive");
  return ExpPolynomial(phi.ram_index() * l, phi.terms());
}

/// Exponent of exp(phi) after tensoring with L^omega.
inline ExpPolynomial twist_add(const ExpPolynomial& phi, const ExpPolynomial& omega) { return phi + omega; }

// ---------------------------------------------------------------------------------------------
// Text form

namespace detail {

// Exponent after '^': integer, "(p/q)", or a signed variant "(-p/q)" / "-p" when negative_allowed.
inline Rational parse_exponent(Scanner& sc) {
  if (sc.accept('(')) {
    int sign = 1;
    if (sc.accept('-')) sign = -1;
    Rational e;
    if (sc.accept('(')) {
      e = sc.number();
      if (sc.accept('/')) e /= sc.number();
      sc.expect(')');
    } else {
      e = sc.number();
      if (sc.accept('/')) {
        Rational den = sc.number();
        if (sgn(den) == 0) sc.fail("zero denominator in exponent");
        e /= den;
      }
    }
    sc.expect(')');
    return e * sign;
  }
  int sign = 1;
  if (sc.accept('-')) sign = -1;
  if (!sc.peek_digit()) sc.fail("expected exponent");
  return sc.number() * sign;
}

inline std::string format_exponent(long j, long l) {
  Rational e = make_rational(j, l);
  if (e == 1) return "z";
  if (e.get_den() == 1) return "z^" + e.get_str();
  return "z^(" + e.get_str() + ")";
}

}  // namespace detail

/// Parses the expression grammar: terms "c/z^e" or "c*z^(-e)" joined by '+'/'-'.
inline ExpPolynomial parse_exppoly(std::string_view text) {
  detail::Scanner sc(text);
  std::vector<std::pair<Rational, ComplexRational>> terms;  // (exponent of 1/z, coefficient)
  if (sc.at_end()) sc.fail("empty expression");
  bool first = true;
  while (!sc.at_end()) {
    std::size_t term_pos = sc.position();
    int sign = 1;
    if (sc.accept('-'))
      sign = -1;
    else if (sc.accept('+'))
      ;
    else if (!first)
      sc.fail("expected '+' or '-'");
    first = false;

    ComplexRational coeff(1);
    bool has_coeff = false;
    if (sc.peek() == '(') {
      sc.accept('(');
      coeff = detail::parse_gaussian_summand(sc, true);
      while (sc.peek() == '+' || sc.peek() == '-') coeff += detail::parse_gaussian_summand(sc, true);
      sc.expect(')');
      has_coeff = true;
    } else if (sc.peek_digit() || sc.peek() == 'i') {
      coeff = detail::parse_gaussian_summand(sc, false);
      has_coeff = true;
    }
    coeff *= ComplexRational(sign);

    Rational exponent;  // power of 1/z
    if (sc.accept('/')) {
      if (!has_coeff) sc.fail("missing coefficient before '/'");
      if (!sc.accept('z')) sc.fail("expected 'z'");
      exponent = 1;
      if (sc.accept('^')) exponent = detail::parse_exponent(sc);
    } else if (sc.peek() == '*' || sc.peek() == 'z') {
      if (sc.accept('*') && sc.peek() != 'z') sc.fail("expected 'z'");
      sc.accept('z');
      Rational power = 1;
      if (sc.accept('^')) power = detail::parse_exponent(sc);
      exponent = -power;
    } else {
      if (!has_coeff) sc.fail("expected a term");
      exponent = 0;
    }
    if (sgn(exponent) <= 0 && !coeff.is_zero())
      throw ParseError("nonnegative exponent: phi must lie in z^(-1/l)C[z^(-1/l)]", term_pos);
    if (!coeff.is_zero()) terms.emplace_back(exponent, coeff);
  }
  long l = 1;
  for (const auto& [e, c] : terms) l = std::lcm(l, e.get_den().get_si());
  ExpPolynomial::Terms map;
  for (auto& [e, c] : terms) {
    Rational scaled = e * l;
    long j = scaled.get_num().get_si();
    auto [it, inserted] = map.emplace(j, c);
    if (!inserted) it->second += c;
  }
  return ExpPolynomial(l, std::move(map));
}

inline std::string ExpPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [j, c] = *it;
    bool negative = (c.is_real() && sgn(c.re()) < 0) || (sgn(c.re()) == 0 && sgn(c.im()) < 0);
    ComplexRational mag = negative ? -c : c;
    std::string coeff;
    if (mag.is_real() && mag.re().get_den() == 1)
      coeff = mag.re().get_str();
    else if (sgn(mag.re()) == 0 && mag.im().get_den() == 1)
      coeff = mag.to_string();
    else
      coeff = "(" + mag.to_string() + ")";
    if (first)
      out += negative ? "-" : "";
    else
      out += negative ? " - " : " + ";
    out += coeff + "/" + detail::format_exponent(j, l_);
    first = false;
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Numeric evaluation (oracle path). Ramified terms use the determination on the cut plane with
// arg z in [0, 2pi), i.e. z^(1/l) = |z|^(1/l) exp(i arg(z)/l).

class NumericExpPolynomial {
 public:
  NumericExpPolynomial() = default;
  NumericExpPolynomial(long l, std::vector<std::pair<long, std::complex<double>>> terms)
      : l_(l), terms_(std::move(terms)) {
    if (l_ < 1) throw DomainError("ramification index must be positive");
  }
  explicit NumericExpPolynomial(const ExpPolynomial& phi) : l_(phi.ram_index()) {
    for (const auto& [j, c] : phi.terms()) terms_.emplace_back(j, c.to_complex());
  }

  long ram_index() const { return l_; }
  const std::vector<std::pair<long, std::complex<double>>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  std::complex<double> operator()(std::complex<double> z) const {
    double r = std::abs(z);
    double theta = std::arg(z);
    if (theta < 0) theta += 2 * std::numbers::pi;
    std::complex<double> sum = 0;
    for (const auto& [j, c] : terms_) {
      double e = static_cast<double>(j) / static_cast<double>(l_);
      sum += c * std::polar(std::pow(r, -e), -e * theta);
    }
    return sum;
  }

  /// log|exp(phi(z))|.
  double log_abs_exp(std::complex<double> z) const { return (*this)(z).real(); }

  NumericExpPolynomial scaled(double lambda) const {
    auto t = terms_;
    for (auto& [j, c] : t) c *= lambda;
    return {l_, std::move(t)};
  }

 private:
  long l_ = 1;
  std::vector<std::pair<long, std::complex<double>>> terms_;
};

}  // namespace stokes
