#pragma once

// Minimal RAII wrapper around mpfr_t. Every value carries its own precision; results of binary
// operations take the larger operand precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cstdlib>
#include <string>
#include <utility>

namespace stokes {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const mpq_class& q, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  BigFloat(long x, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept : BigFloat(o) {}
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept { return *this = static_cast<const BigFloat&>(o); }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  static BigFloat pi(mpfr_prec_t bits) {
    BigFloat r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static BigFloat atan2(const BigFloat& y, const BigFloat& x) {
    BigFloat r(std::max(y.precision(), x.precision()));
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  /// 2^e at the given precision.
  static BigFloat exp2(long e, mpfr_prec_t bits) {
    BigFloat r(1L, bits);
    mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_add); }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_sub); }
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_mul); }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) { return binary(a, b, mpfr_div); }
  friend BigFloat operator-(const BigFloat& a) {
    BigFloat r(a.precision());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  BigFloat floor() const {
    BigFloat r(precision());
    mpfr_floor(r.v_, v_);
    return r;
  }
  BigFloat abs() const {
    BigFloat r(precision());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
  }

  /// Value reduced into [0, period).
  BigFloat reduce(const BigFloat& period) const {
    BigFloat q = (*this / period).floor();
    BigFloat r = *this - q * period;
    if (mpfr_sgn(r.v_) < 0) r = r + period;
    if (mpfr_cmp(r.v_, period.v_) >= 0) r = r - period;
    return r;
  }

  BigFloat rootn(unsigned long n) const {
    BigFloat r(precision());
    mpfr_rootn_ui(r.v_, v_, n, MPFR_RNDN);
    return r;
  }
  BigFloat cos() const {
    BigFloat r(precision());
    mpfr_cos(r.v_, v_, MPFR_RNDN);
    return r;
  }
  BigFloat sin() const {
    BigFloat r(precision());
    mpfr_sin(r.v_, v_, MPFR_RNDN);
    return r;
  }
  /// Exact rational value of the binary float.
  mpq_class to_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

  int sign() const { return mpfr_sgn(v_); }
  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return compare(a, b) > 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }

  /// Fixed decimal text with as many significant digits as the precision supports.
  std::string to_decimal() const {
    auto digits = static_cast<std::size_t>(static_cast<double>(precision()) * 0.30102999566398120);
    if (digits < 1) digits = 1;
    mpfr_exp_t exp = 0;
    char* raw = mpfr_get_str(nullptr, &exp, 10, digits, v_, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    if (mpfr_zero_p(v_)) return "0";
    std::string sign;
    if (!mant.empty() && mant[0] == '-') {
      sign = "-";
      mant.erase(0, 1);
    }
    std::string out;
    if (exp <= 0) {
      out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
    } else if (static_cast<std::size_t>(exp) >= mant.size()) {
      out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
    } else {
      out = mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
    }
    return sign + out;
  }

 private:
  template <typename Op>
  static BigFloat binary(const BigFloat& a, const BigFloat& b, Op op) {
    BigFloat r(std::max(a.precision(), b.precision()));
    op(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

}  // namespace stokes
