#pragma once

// Truncated power series sum_{k<=N} c_k z^k over an exact coefficient ring R.
// R needs +, -, *, ==, is_zero(), and the free functions zero_like(r), one_like(r),
// scalar_like(r, ComplexRational), inverse(r) found by ADL.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stokes/bigfloat.hpp"
#include "stokes/errors.hpp"
#include "stokes/rational.hpp"

namespace stokes {

inline ComplexRational scalar_like(const ComplexRational&, const ComplexRational& c) { return c; }
inline ComplexRational inverse(const ComplexRational& c) { return ComplexRational(1) / c; }

template <typename R>
class PowerSeries {
 public:
  PowerSeries(std::vector<R> coeffs, std::size_t order) : c_(std::move(coeffs)), n_(order) {
    if (c_.empty()) throw DomainError("power series needs at least one coefficient");
    R zero = zero_like(c_.front());
    c_.resize(n_ + 1, zero);
  }

  /// The constant `value` truncated at `order`.
  static PowerSeries constant(const R& value, std::size_t order) { return PowerSeries({value}, order); }
  /// z, truncated at `order`, with coefficients shaped like `proto`.
  static PowerSeries variable(const R& proto, std::size_t order) {
    return PowerSeries({zero_like(proto), one_like(proto)}, order);
  }

  std::size_t order() const { return n_; }
  const std::vector<R>& coeffs() const { return c_; }
  const R& operator[](std::size_t k) const { return c_.at(k); }

  /// Index of the first nonzero coefficient, or order()+1 if all vanish.
  std::size_t valuation() const {
    for (std::size_t k = 0; k <= n_; ++k)
      if (!c_[k].is_zero()) return k;
    return n_ + 1;
  }

  PowerSeries truncated(std::size_t order) const {
    std::vector<R> c(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(std::min(order, n_) + 1));
    return PowerSeries(std::move(c), std::min(order, n_));
  }

  friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
    std::size_t n = std::min(a.n_, b.n_);
    std::vector<R> c;
    c.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c.push_back(a.c_[k] + b.c_[k]);
    return PowerSeries(std::move(c), n);
  }
  friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
    std::size_t n = std::min(a.n_, b.n_);
    std::vector<R> c;
    c.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) c.push_back(a.c_[k] - b.c_[k]);
    return PowerSeries(std::move(c), n);
  }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    std::size_t n = std::min(a.n_, b.n_);
    std::vector<R> c(n + 1, zero_like(a.c_[0]));
    for (std::size_t i = 0; i <= n; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j <= n; ++j) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    }
    return PowerSeries(std::move(c), n);
  }

  PowerSeries scaled(const R& s) const {
    std::vector<R> c;
    c.reserve(n_ + 1);
    for (const auto& x : c_) c.push_back(x * s);
    return PowerSeries(std::move(c), n_);
  }

  /// Multiplicative inverse; the constant term must be a unit.
  PowerSeries reciprocal() const {
    R inv0 = inverse(c_[0]);  // throws DomainError on non-units
    std::vector<R> c(n_ + 1, zero_like(c_[0]));
    c[0] = inv0;
    for (std::size_t k = 1; k <= n_; ++k) {
      R acc = zero_like(c_[0]);
      for (std::size_t i = 1; i <= k; ++i) acc = acc + c_[i] * c[k - i];
      c[k] = zero_like(c_[0]) - acc * inv0;
    }
    return PowerSeries(std::move(c), n_);
  }

  friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
    if (b.c_[0].is_zero()) throw DomainError("power series division by a non-unit");
    return a * b.reciprocal();
  }

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.n_ == b.n_ && a.c_ == b.c_; }

  /// "1 + 1/2 z + 1/8 z^2 + O(z^3)"
  std::string to_string() const {
    std::string out;
    for (std::size_t k = 0; k <= n_; ++k) {
      if (c_[k].is_zero()) continue;
      if (!out.empty()) out += " + ";
      std::string c = c_[k].to_string();
      if (k == 0)
        out += c;
      else
        out += "(" + c + ")" + (k == 1 ? std::string("z") : "z^" + std::to_string(k));
    }
    if (out.empty()) out = "0";
    return out + " + O(z^" + std::to_string(n_ + 1) + ")";
  }

 private:
  std::vector<R> c_;
  std::size_t n_;
};

/// s^(1/n) with constant term `root0`, which must satisfy root0^n = s[0].
/// Miller's recurrence: f = g^a gives k g0 f_k = sum_{i=1..k} ((a+1) i - k) g_i f_{k-i}.
template <typename R>
PowerSeries<R> nth_root(const PowerSeries<R>& s, unsigned n, const R& root0) {
  if (n == 0) throw DomainError("nth_root: n must be positive");
  if (s[0].is_zero()) throw DomainError("nth_root needs a unit constant term");
  R check = one_like(root0);
  for (unsigned k = 0; k < n; ++k) check = check * root0;
  if (!(check == s[0])) throw DomainError("nth_root: supplied constant is not an n-th root of s[0]");
  std::size_t N = s.order();
  Rational a = make_rational(1, static_cast<long>(n));
  R inv_g0 = inverse(s[0]);
  std::vector<R> f(N + 1, zero_like(root0));
  f[0] = root0;
  for (std::size_t k = 1; k <= N; ++k) {
    R acc = zero_like(root0);
    for (std::size_t i = 1; i <= k; ++i) {
      Rational w = (a + 1) * static_cast<long>(i) - static_cast<long>(k);
      if (sgn(w) == 0 || s[i].is_zero()) continue;
      acc = acc + scalar_like(root0, ComplexRational(w)) * s[i] * f[k - i];
    }
    f[k] = acc * inv_g0 * scalar_like(root0, ComplexRational(make_rational(1, static_cast<long>(k))));
  }
  return PowerSeries<R>(std::move(f), N);
}

/// a(b(z)); b must have zero constant term. With v = valuation(b), the result is valid to
/// order min(v (N_a + 1) - 1, N_b).
template <typename R>
PowerSeries<R> compose(const PowerSeries<R>& a, const PowerSeries<R>& b) {
  if (!b[0].is_zero()) throw DomainError("compose: inner series must have zero constant term");
  std::size_t v = b.valuation();
  std::size_t order = b.order();
  if (v <= b.order()) order = std::min(order, v * (a.order() + 1) - 1);
  PowerSeries<R> inner = b.truncated(order);
  PowerSeries<R> result = PowerSeries<R>::constant(a[a.order()], order);
  for (std::size_t m = a.order(); m-- > 0;)
    result = result * inner + PowerSeries<R>::constant(a[m], order);
  return result;
}

enum class SeriesOp { add, sub, mul, div, nth_root, compose };

/// Dispatcher over the binary operations; nth_root uses `b[0]` as the chosen root of a[0]
/// and `root_degree` as n.
template <typename R>
PowerSeries<R> series_arith(const PowerSeries<R>& a, const PowerSeries<R>& b, SeriesOp op, unsigned root_degree = 2) {
  switch (op) {
    case SeriesOp::add: return a + b;
    case SeriesOp::sub: return a - b;
    case SeriesOp::mul: return a * b;
    case SeriesOp::div: return a / b;
    case SeriesOp::nth_root: return nth_root(a, root_degree, b[0]);
    case SeriesOp::compose: return compose(a, b);
  }
  throw DomainError("unknown series operation");
}

// ---------------------------------------------------------------------------------------------
// Exact roots in Q(i)

namespace detail {

// Best rational approximation of x with denominator <= bound (continued fractions).
inline Rational limit_denominator(const Rational& x, const mpz_class& bound) {
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  while (true) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > bound) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class rem = n - a * d;
    n = d;
    d = rem;
    if (d == 0) break;
  }
  if (q1 == 0) return Rational(x);
  mpz_class k = (bound - q0) / q1;
  Rational b1(p0 + k * p1, q0 + k * q1);
  Rational b2(p1, q1);
  b1.canonicalize();
  b2.canonicalize();
  return abs(b2 - x) <= abs(b1 - x) ? b2 : b1;
}

}  // namespace detail

/// The principal n-th root of a (argument in (-pi/n, pi/n]) when it lies in Q(i).
inline std::optional<ComplexRational> exact_principal_root(const ComplexRational& a, unsigned n) {
  if (n == 0) throw DomainError("root degree must be positive");
  if (a.is_zero()) return ComplexRational{};
  if (n == 1) return a;
  // If c^n = a with c = alpha/beta in lowest terms then beta^n | D, so |beta|^2 <= D^(2/n) bounds
  // the denominators of Re c and Im c.
  mpz_class D = lcm(a.re().get_den(), a.im().get_den());
  mpz_class bound;
  mpz_class d2 = D * D;
  mpz_root(bound.get_mpz_t(), d2.get_mpz_t(), n);
  bound += 1;
  auto bits = static_cast<mpfr_prec_t>(
      128 + 4 * mpz_sizeinbase(bound.get_mpz_t(), 2) + mpz_sizeinbase(a.re().get_num_mpz_t(), 2) +
      mpz_sizeinbase(a.im().get_num_mpz_t(), 2));
  BigFloat re(a.re(), bits), im(a.im(), bits);
  BigFloat modulus = (re * re + im * im).rootn(2).rootn(n);
  BigFloat angle = BigFloat::atan2(im, re) / BigFloat(static_cast<long>(n), bits);
  Rational cr = detail::limit_denominator((modulus * angle.cos()).to_rational(), bound);
  Rational ci = detail::limit_denominator((modulus * angle.sin()).to_rational(), bound);
  ComplexRational c(cr, ci);
  if (c.pow(n) == a) return c;
  return std::nullopt;
}

}  // namespace stokes
