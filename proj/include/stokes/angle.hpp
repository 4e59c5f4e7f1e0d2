#pragma once

// Directions on the unit circle with exact symbolic form (arg(c) + q*pi) / d, and finite unions
// of open arcs with such endpoints.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stokes/bigfloat.hpp"
#include "stokes/errors.hpp"
#include "stokes/rational.hpp"

namespace stokes {

/// Evaluation precision for angle comparisons. Values closer than 2^(-bits/2) are re-evaluated at
/// twice the precision, up to `max_bits`, after which they are declared equal and flagged.
struct PrecisionPolicy {
  mpfr_prec_t initial_bits = 128;
  mpfr_prec_t max_bits = 512;
};

namespace detail {

// If arg(c) is an exact multiple of pi/4 (c real, imaginary or on a diagonal) return that
// multiple k with arg(c) = k*pi/4 and arg in (-pi, pi].
inline std::optional<int> octant_of(const ComplexRational& c) {
  int sr = sgn(c.re());
  int si = sgn(c.im());
  if (si == 0) return sr > 0 ? 0 : 4;
  if (sr == 0) return si > 0 ? 2 : -2;
  if (c.re() == c.im()) return sr > 0 ? 1 : -3;
  if (c.re() == -c.im()) return sr > 0 ? -1 : 3;
  return std::nullopt;
}

inline BigFloat arg_big(const ComplexRational& c, mpfr_prec_t bits) {
  return BigFloat::atan2(BigFloat(c.im(), bits + 16), BigFloat(c.re(), bits + 16));
}

// Rational reduced into [0, m).
inline Rational mod_rational(const Rational& x, const Rational& m) {
  Rational q = x / m;
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  Rational r = x - Rational(f) * m;
  r.canonicalize();
  return r;
}

}  // namespace detail

class AngleExpr {
 public:
  AngleExpr() = default;
  AngleExpr(std::optional<ComplexRational> arg_of, Rational pi_multiple, long divisor = 1)
      : arg_of_(std::move(arg_of)), pi_(std::move(pi_multiple)), d_(divisor) {
    if (d_ < 1) throw DomainError("angle divisor must be >= 1");
    if (arg_of_ && arg_of_->is_zero()) throw DomainError("arg(0) is undefined");
    normalize();
  }

  /// q*pi.
  static AngleExpr pi_times(Rational q) { return AngleExpr(std::nullopt, std::move(q), 1); }
  /// arg(c), principal value in (-pi, pi].
  static AngleExpr arg(const ComplexRational& c) { return AngleExpr(c, Rational(0), 1); }

  const std::optional<ComplexRational>& arg_of() const { return arg_of_; }
  const Rational& pi_multiple() const { return pi_; }
  long divisor() const { return d_; }

  /// this + q*pi.
  AngleExpr plus_pi(const Rational& q) const { return AngleExpr(arg_of_, pi_ + q * d_, d_); }

  /// this / k.
  AngleExpr divided(long k) const {
    if (k < 1) throw DomainError("angle division by non-positive integer");
    return AngleExpr(arg_of_, pi_, d_ * k);
  }

  /// k * this (mod 2pi). k*arg(c) is rewritten as arg(c^k) plus the exact 2pi winding.
  AngleExpr times(long k) const {
    if (k < 1) throw DomainError("angle multiplier must be positive");
    if (!arg_of_) return AngleExpr(std::nullopt, pi_ * k, d_);
    ComplexRational ck = arg_of_->pow(static_cast<unsigned>(k));
    double a = std::atan2(arg_of_->im().get_d(), arg_of_->re().get_d());
    double ak = std::atan2(ck.im().get_d(), ck.re().get_d());
    long winding = std::lround((static_cast<double>(k) * a - ak) / (2 * std::numbers::pi));
    return AngleExpr(ck, pi_ * k + Rational(2 * winding), d_);
  }

  /// Value in [0, 2pi) at the requested precision.
  BigFloat value(mpfr_prec_t bits) const {
    BigFloat pi = BigFloat::pi(bits + 16);
    BigFloat v = BigFloat(pi_, bits + 16) * pi;
    if (arg_of_) v = v + detail::arg_big(*arg_of_, bits);
    v = v / BigFloat(d_, bits + 16);
    return v.reduce(pi * BigFloat(2L, bits + 16));
  }

  double radians() const { return value(64).to_double(); }

  /// Exact equality of the two directions on the circle.
  friend bool exactly_equal(const AngleExpr& a, const AngleExpr& b) {
    // a == b mod 2pi  <=>  d_b*arg(c_a) - d_a*arg(c_b) + (d_b q_a - d_a q_b) pi == 0 mod 2pi d_a d_b.
    ComplexRational ca = a.arg_of_.value_or(ComplexRational(1));
    ComplexRational cb = b.arg_of_.value_or(ComplexRational(1));
    ComplexRational w = ca.pow(static_cast<unsigned>(b.d_)) * cb.conj().pow(static_cast<unsigned>(a.d_));
    auto k = detail::octant_of(w);
    if (!k) return false;
    double x = static_cast<double>(b.d_) * std::atan2(ca.im().get_d(), ca.re().get_d()) -
               static_cast<double>(a.d_) * std::atan2(cb.im().get_d(), cb.re().get_d());
    long m = std::lround((x - *k * std::numbers::pi / 4) / (2 * std::numbers::pi));
    Rational total = make_rational(*k, 4) + Rational(2 * m) + a.pi_ * b.d_ - b.pi_ * a.d_;
    Rational ratio = total / Rational(2 * a.d_ * b.d_);
    ratio.canonicalize();
    return ratio.get_den() == 1;
  }

  /// "(arg(1+2i)+1/2·π)/3"
  std::string to_string() const {
    std::string pi_part;
    if (sgn(pi_) != 0) pi_part = (pi_ == 1 ? std::string() : pi_.get_str() + "·") + "π";
    std::string inner;
    if (arg_of_) {
      inner = "arg(" + arg_of_->to_string() + ")";
      if (!pi_part.empty()) inner += "+" + pi_part;
    } else {
      inner = pi_part.empty() ? "0" : pi_part;
    }
    if (d_ == 1) return inner;
    return "(" + inner + ")/" + std::to_string(d_);
  }

 private:
  void normalize() {
    if (arg_of_) {
      if (auto k = detail::octant_of(*arg_of_)) {
        pi_ += make_rational(*k, 4);
        arg_of_.reset();
      }
    }
    // (x + 2d pi)/d == x/d + 2pi
    pi_ = detail::mod_rational(pi_, Rational(2 * d_));
  }

  std::optional<ComplexRational> arg_of_;
  Rational pi_{0};
  long d_ = 1;
};

/// Three-way angle comparison on [0, 2pi) with precision escalation. Accumulates a flag when two
/// provably-distinct directions could not be separated at the maximum precision.
class AngleComparator {
 public:
  explicit AngleComparator(PrecisionPolicy policy = {}) : policy_(policy) {}

  int compare(const AngleExpr& a, const AngleExpr& b) {
    if (exactly_equal(a, b)) return 0;
    for (mpfr_prec_t bits = policy_.initial_bits;; bits *= 2) {
      if (bits > policy_.max_bits) bits = policy_.max_bits;
      BigFloat diff = a.value(bits) - b.value(bits);
      BigFloat tol = BigFloat::exp2(-static_cast<long>(bits / 2), bits);
      if (diff.abs() > tol) return diff.sign();
      if (bits >= policy_.max_bits) break;
    }
    flagged_ = true;
    return 0;
  }

  bool less(const AngleExpr& a, const AngleExpr& b) { return compare(a, b) < 0; }
  bool equal(const AngleExpr& a, const AngleExpr& b) { return compare(a, b) == 0; }

  /// Starting at `from` and moving counterclockwise, is `x` reached strictly before `y`?
  bool ccw_before(const AngleExpr& from, const AngleExpr& x, const AngleExpr& y) {
    int xs = compare(x, from);
    int ys = compare(y, from);
    bool x_after = xs >= 0;
    bool y_after = ys >= 0;
    if (x_after != y_after) return x_after;
    return compare(x, y) < 0;
  }

  const PrecisionPolicy& policy() const { return policy_; }
  bool flagged() const { return flagged_; }

 private:
  PrecisionPolicy policy_;
  bool flagged_ = false;
};

struct Arc {
  AngleExpr start;
  AngleExpr end;  // counterclockwise from start

  /// Length / pi when both endpoints share their arg term and divisor (always the case for
  /// support arcs of a single exponential polynomial).
  std::optional<Rational> exact_length_over_pi() const {
    if (start.divisor() != end.divisor() || start.arg_of() != end.arg_of()) return std::nullopt;
    Rational len = (end.pi_multiple() - start.pi_multiple()) / start.divisor();
    len = detail::mod_rational(len, Rational(2));
    return len;
  }
};

/// Finite union of pairwise disjoint open arcs, sorted by start angle in [0, 2pi).
class ArcSet {
 public:
  ArcSet() = default;
  explicit ArcSet(std::vector<Arc> arcs, PrecisionPolicy policy = {}) : arcs_(std::move(arcs)) {
    AngleComparator cmp(policy);
    std::sort(arcs_.begin(), arcs_.end(), [&](const Arc& a, const Arc& b) { return cmp.less(a.start, b.start); });
    flagged_ = cmp.flagged();
  }

  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t size() const { return arcs_.size(); }
  bool empty() const { return arcs_.empty(); }
  bool precision_flagged() const { return flagged_; }

  /// theta strictly inside some arc.
  bool contains(const AngleExpr& theta, AngleComparator& cmp) const {
    for (const auto& arc : arcs_)
      if (in_open(arc, theta, cmp)) return true;
    return false;
  }

  /// theta inside some arc or equal to an endpoint.
  bool closure_contains(const AngleExpr& theta, AngleComparator& cmp) const {
    for (const auto& arc : arcs_) {
      if (cmp.equal(theta, arc.start) || cmp.equal(theta, arc.end)) return true;
      if (in_open(arc, theta, cmp)) return true;
    }
    return false;
  }

  bool is_endpoint(const AngleExpr& theta, AngleComparator& cmp) const {
    for (const auto& arc : arcs_)
      if (cmp.equal(theta, arc.start) || cmp.equal(theta, arc.end)) return true;
    return false;
  }

  /// The closed ccw interval [a, b] lies inside a single open arc.
  bool covers_closed(const AngleExpr& a, const AngleExpr& b, AngleComparator& cmp) const {
    for (const auto& arc : arcs_)
      if (in_open(arc, a, cmp) && in_open(arc, b, cmp) && !cmp.ccw_before(arc.start, b, a) && !cmp.equal(a, b))
        return true;
    return false;
  }

  /// The open ccw interval (a, b) lies inside the closure of the union.
  bool closure_covers_open(const AngleExpr& a, const AngleExpr& b, AngleComparator& cmp) const {
    // Closed arcs that touch are merged before testing containment.
    std::vector<Arc> merged;
    for (const auto& arc : arcs_) {
      if (!merged.empty() && cmp.equal(merged.back().end, arc.start))
        merged.back().end = arc.end;
      else
        merged.push_back(arc);
    }
    if (merged.size() > 1 && cmp.equal(merged.back().end, merged.front().start)) {
      merged.front().start = merged.back().start;
      merged.pop_back();
    }
    if (merged.size() == 1 && cmp.equal(merged.front().start, merged.front().end) && arcs_.size() > 1) return true;
    for (const auto& arc : merged) {
      auto in_closed = [&](const AngleExpr& x) {
        return cmp.equal(x, arc.start) || cmp.equal(x, arc.end) || in_open(arc, x, cmp);
      };
      if (in_closed(a) && in_closed(b) && (cmp.equal(a, arc.start) || !cmp.ccw_before(arc.start, b, a))) return true;
    }
    return false;
  }

  static bool in_open(const Arc& arc, const AngleExpr& theta, AngleComparator& cmp) {
    if (cmp.equal(theta, arc.start) || cmp.equal(theta, arc.end)) return false;
    return cmp.ccw_before(arc.start, theta, arc.end);
  }

 private:
  std::vector<Arc> arcs_;
  bool flagged_ = false;
};

}  // namespace stokes
