#pragma once

// Exact Gaussian rationals Q(i) on top of GMP rationals.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "stokes/errors.hpp"

namespace stokes {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Element of Q(i). Arithmetic is exact; division by zero throws.
class ComplexRational {
 public:
  ComplexRational() = default;
  ComplexRational(long re) : re_(re) {}  // NOLINT: implicit by design of literals
  ComplexRational(Rational re) : re_(std::move(re)) {}  // NOLINT
  ComplexRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

  static ComplexRational i() { return {Rational(0), Rational(1)}; }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_positive_real() const { return sgn(im_) == 0 && sgn(re_) > 0; }

  ComplexRational conj() const { return {re_, -im_}; }
  Rational norm() const { return re_ * re_ + im_ * im_; }

  ComplexRational& operator+=(const ComplexRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    if (o.is_zero()) throw DomainError("division by zero in Q(i)");
    Rational n = o.norm();
    Rational r = (re_ * o.re_ + im_ * o.im_) / n;
    Rational m = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re_, -a.im_}; }

  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

  ComplexRational pow(unsigned e) const {
    ComplexRational result(1);
    ComplexRational base = *this;
    while (e != 0) {
      if (e & 1U) result *= base;
      base *= base;
      e >>= 1U;
    }
    return result;
  }

  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

  /// Exact text "a/b+c/d i" (the matrix-entry format); "0", "3", "2i", "-1/2 i" etc.
  std::string to_string() const {
    if (sgn(im_) == 0) return re_.get_str();
    std::string imag_part;
    Rational mag = abs(im_);
    if (mag == 1)
      imag_part = "i";
    else if (mag.get_den() == 1)
      imag_part = mag.get_str() + "i";
    else
      imag_part = mag.get_str() + " i";
    if (sgn(re_) == 0) return (sgn(im_) < 0 ? "-" : "") + imag_part;
    return re_.get_str() + (sgn(im_) < 0 ? "-" : "+") + imag_part;
  }

  friend std::ostream& operator<<(std::ostream& os, const ComplexRational& c) { return os << c.to_string(); }

 private:
  Rational re_{0};
  Rational im_{0};
};

inline ComplexRational zero_like(const ComplexRational&) { return {}; }
inline ComplexRational one_like(const ComplexRational&) { return ComplexRational(1); }
inline std::complex<double> to_complex(const ComplexRational& c) { return c.to_complex(); }

namespace detail {

// Cursor over a literal; shared by the matrix-entry and expression parsers.
class Scanner {
 public:
  explicit Scanner(std::string_view text, std::size_t base_offset = 0) : text_(text), base_(base_offset) {}

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n')) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char peek_at(std::size_t ahead) {
    skip_ws();
    std::size_t p = pos_ + ahead;
    return p < text_.size() ? text_[p] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::size_t position() const { return base_ + pos_; }
  std::size_t raw_position() const { return pos_; }
  void reset(std::size_t raw) { pos_ = raw; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, base_ + pos_);
  }

  bool peek_digit() {
    char c = peek();
    return c >= '0' && c <= '9';
  }

  // Unsigned decimal integer, optionally with a fractional part ("0.785").
  Rational number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (start == pos_) fail("expected a number");
    std::string digits(text_.substr(start, pos_ - start));
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      std::size_t fstart = pos_;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
      std::string frac(text_.substr(fstart, pos_ - fstart));
      mpz_class num(digits + frac);
      mpz_class den(1);
      for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
      Rational q(num, den);
      q.canonicalize();
      return q;
    }
    return Rational(mpz_class(digits));
  }

 private:
  std::string_view text_;
  std::size_t base_ = 0;
  std::size_t pos_ = 0;
};

// One signed real-or-imaginary summand: [sign] (number[/number] [i] | i).
inline ComplexRational parse_gaussian_summand(Scanner& sc, bool allow_sign) {
  int sign = 1;
  if (allow_sign) {
    if (sc.accept('-'))
      sign = -1;
    else
      sc.accept('+');
  }
  if (sc.peek() == 'i') {
    sc.accept('i');
    return {Rational(0), Rational(sign)};
  }
  Rational value = sc.number();
  if (sc.peek() == '/' && sc.peek_at(1) >= '0' && sc.peek_at(1) <= '9') {
    sc.accept('/');
    Rational den = sc.number();
    if (sgn(den) == 0) sc.fail("zero denominator");
    value /= den;
  }
  value *= sign;
  if (sc.peek() == 'i') {
    sc.accept('i');
    return {Rational(0), value};
  }
  return {value, Rational(0)};
}

}  // namespace detail

/// Parses "a/b+c/d i", "(1+2i)", "-1/2", "2i", "i". Whitespace is ignored.
inline ComplexRational parse_complex_rational(std::string_view text) {
  detail::Scanner sc(text);
  bool paren = sc.accept('(');
  ComplexRational value = detail::parse_gaussian_summand(sc, true);
  while (sc.peek() == '+' || sc.peek() == '-') value += detail::parse_gaussian_summand(sc, true);
  if (paren) sc.expect(')');
  if (!sc.at_end()) sc.fail("trailing characters in complex rational");
  return value;
}

}  // namespace stokes
