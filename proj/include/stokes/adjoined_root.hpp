#pragma once

// Q(i)[rho]/(rho^d - a): Gaussian rationals with one radical adjoined.

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/rational.hpp"

namespace stokes {

struct RootContext {
  unsigned degree = 1;              // d
  ComplexRational radicand;         // a
  std::complex<double> numeric{1};  // the chosen root, for evaluation only
};

class AdjoinedRoot {
 public:
  AdjoinedRoot(std::shared_ptr<const RootContext> ctx, std::vector<ComplexRational> coeffs)
      : ctx_(std::move(ctx)), c_(std::move(coeffs)) {
    if (!ctx_) throw DomainError("adjoined root without context");
    c_.resize(ctx_->degree);
  }
  AdjoinedRoot(std::shared_ptr<const RootContext> ctx, const ComplexRational& scalar)
      : AdjoinedRoot(std::move(ctx), std::vector<ComplexRational>{scalar}) {}

  static AdjoinedRoot rho(std::shared_ptr<const RootContext> ctx) {
    std::vector<ComplexRational> c(ctx->degree);
    if (ctx->degree == 1)
      c[0] = ctx->radicand;
    else
      c[1] = ComplexRational(1);
    return AdjoinedRoot(std::move(ctx), std::move(c));
  }

  const std::shared_ptr<const RootContext>& context() const { return ctx_; }
  const std::vector<ComplexRational>& coeffs() const { return c_; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }
  /// Lies in Q(i).
  bool is_scalar() const {
    for (std::size_t k = 1; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return false;
    return true;
  }

  friend AdjoinedRoot operator+(const AdjoinedRoot& a, const AdjoinedRoot& b) {
    auto c = a.c_;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += b.c_[k];
    return {a.ctx_, std::move(c)};
  }
  friend AdjoinedRoot operator-(const AdjoinedRoot& a, const AdjoinedRoot& b) {
    auto c = a.c_;
    for (std::size_t k = 0; k < c.size(); ++k) c[k] -= b.c_[k];
    return {a.ctx_, std::move(c)};
  }
  friend AdjoinedRoot operator*(const AdjoinedRoot& a, const AdjoinedRoot& b) {
    std::size_t d = a.c_.size();
    std::vector<ComplexRational> c(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (a.c_[i].is_zero()) continue;
      for (std::size_t j = 0; j < d; ++j) {
        if (b.c_[j].is_zero()) continue;
        ComplexRational t = a.c_[i] * b.c_[j];
        if (i + j >= d)
          c[i + j - d] += t * a.ctx_->radicand;
        else
          c[i + j] += t;
      }
    }
    return {a.ctx_, std::move(c)};
  }
  friend bool operator==(const AdjoinedRoot& a, const AdjoinedRoot& b) { return a.c_ == b.c_; }

  std::complex<double> to_complex() const {
    std::complex<double> sum = 0, p = 1;
    for (const auto& x : c_) {
      sum += x.to_complex() * p;
      p *= ctx_->numeric;
    }
    return sum;
  }

  /// "1 + 1/2 ρ + ..." with ρ the adjoined root.
  std::string to_string() const {
    std::string out;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (c_[k].is_zero()) continue;
      if (!out.empty()) out += " + ";
      std::string term = c_[k].to_string();
      if (k > 0) term = "(" + term + ")ρ" + (k > 1 ? "^" + std::to_string(k) : "");
      out += term;
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::shared_ptr<const RootContext> ctx_;
  std::vector<ComplexRational> c_;
};

inline AdjoinedRoot zero_like(const AdjoinedRoot& r) { return {r.context(), ComplexRational{}}; }
inline AdjoinedRoot one_like(const AdjoinedRoot& r) { return {r.context(), ComplexRational(1)}; }
inline AdjoinedRoot scalar_like(const AdjoinedRoot& r, const ComplexRational& c) { return {r.context(), c}; }
inline std::complex<double> to_complex(const AdjoinedRoot& r) { return r.to_complex(); }

/// Inverse by solving (multiplication-by-r) x = 1 exactly. Throws on zero divisors.
inline AdjoinedRoot inverse(const AdjoinedRoot& r) {
  std::size_t d = r.coeffs().size();
  // Column j of M is r * rho^j.
  std::vector<std::vector<ComplexRational>> m(d, std::vector<ComplexRational>(d + 1));
  std::vector<ComplexRational> basis(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<ComplexRational> e(d);
    e[j] = ComplexRational(1);
    AdjoinedRoot col = r * AdjoinedRoot(r.context(), e);
    for (std::size_t i = 0; i < d; ++i) m[i][j] = col.coeffs()[i];
  }
  m[0][d] = ComplexRational(1);
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && m[piv][col].is_zero()) ++piv;
    if (piv == d) throw DomainError("element of Q(i)[rho] is not invertible");
    std::swap(m[piv], m[col]);
    ComplexRational inv = ComplexRational(1) / m[col][col];
    for (auto& x : m[col]) x *= inv;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == col || m[i][col].is_zero()) continue;
      ComplexRational f = m[i][col];
      for (std::size_t k = col; k <= d; ++k) m[i][k] -= f * m[col][k];
    }
  }
  std::vector<ComplexRational> x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = m[i][d];
  return {r.context(), std::move(x)};
}

}  // namespace stokes
