#pragma once

// Dense matrices over Q(i), polynomials over Q(i), and invariant factors of xI - T.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/rational.hpp"

namespace stokes {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<ComplexRational>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    for (const auto& row : rows) {
      if (row.size() != c_) throw DomainError("ragged matrix literal");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = ComplexRational(1);
    return m;
  }
  /// Single Jordan block of size n with eigenvalue lambda.
  static Matrix jordan(std::size_t n, const ComplexRational& lambda) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = lambda;
      if (i + 1 < n) m(i, i + 1) = ComplexRational(1);
    }
    return m;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }

  ComplexRational& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const ComplexRational& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.c_ != y.r_) throw DomainError("matrix dimension mismatch");
    Matrix out(x.r_, y.c_);
    for (std::size_t i = 0; i < x.r_; ++i)
      for (std::size_t k = 0; k < x.c_; ++k) {
        if (x(i, k).is_zero()) continue;
        for (std::size_t j = 0; j < y.c_; ++j) out(i, j) += x(i, k) * y(k, j);
      }
    return out;
  }
  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    if (x.r_ != y.r_ || x.c_ != y.c_) throw DomainError("matrix dimension mismatch");
    Matrix out = x;
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] += y.a_[i];
    return out;
  }
  friend Matrix operator-(const Matrix& x, const Matrix& y) {
    if (x.r_ != y.r_ || x.c_ != y.c_) throw DomainError("matrix dimension mismatch");
    Matrix out = x;
    for (std::size_t i = 0; i < out.a_.size(); ++i) out.a_[i] -= y.a_[i];
    return out;
  }
  friend bool operator==(const Matrix& x, const Matrix& y) { return x.r_ == y.r_ && x.c_ == y.c_ && x.a_ == y.a_; }
  friend bool operator!=(const Matrix& x, const Matrix& y) { return !(x == y); }

  /// Row echelon form in place; returns the rank and accumulates the determinant factor.
  std::size_t eliminate(ComplexRational* det = nullptr) {
    std::size_t rank = 0;
    ComplexRational d(1);
    for (std::size_t col = 0; col < c_ && rank < r_; ++col) {
      std::size_t piv = rank;
      while (piv < r_ && (*this)(piv, col).is_zero()) ++piv;
      if (piv == r_) {
        d = ComplexRational{};
        continue;
      }
      if (piv != rank) {
        for (std::size_t j = 0; j < c_; ++j) std::swap((*this)(piv, j), (*this)(rank, j));
        d = -d;
      }
      ComplexRational p = (*this)(rank, col);
      d *= p;
      ComplexRational inv = ComplexRational(1) / p;
      for (std::size_t j = col; j < c_; ++j) (*this)(rank, j) *= inv;
      for (std::size_t i = 0; i < r_; ++i) {
        if (i == rank || (*this)(i, col).is_zero()) continue;
        ComplexRational f = (*this)(i, col);
        for (std::size_t j = col; j < c_; ++j) (*this)(i, j) -= f * (*this)(rank, j);
      }
      ++rank;
    }
    if (det) *det = rank == r_ && square() ? d : ComplexRational{};
    return rank;
  }

  std::size_t rank() const {
    Matrix m = *this;
    return m.eliminate();
  }

  ComplexRational determinant() const {
    if (!square()) throw DomainError("determinant of a non-square matrix");
    if (r_ == 0) return ComplexRational(1);
    Matrix m = *this;
    ComplexRational d;
    m.eliminate(&d);
    return d;
  }

  Matrix inverse() const {
    if (!square()) throw DomainError("inverse of a non-square matrix");
    Matrix aug(r_, 2 * r_);
    for (std::size_t i = 0; i < r_; ++i) {
      for (std::size_t j = 0; j < r_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, r_ + i) = ComplexRational(1);
    }
    if (aug.eliminate() < r_) throw DomainError("matrix is singular");
    for (std::size_t i = 0; i < r_; ++i)
      if (aug(i, i) != ComplexRational(1)) throw DomainError("matrix is singular");
    Matrix out(r_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < r_; ++j) out(i, j) = aug(i, r_ + j);
    return out;
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < r_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < c_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
      s += "]";
    }
    return s + "]";
  }

 private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<ComplexRational> a_;
};

inline Matrix block_diagonal(const std::vector<Matrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix out(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

/// dim {X : t2 X = X t1} for X of shape rows(t2) x rows(t1).
inline std::size_t intertwiner_dimension(const Matrix& t1, const Matrix& t2) {
  std::size_t p = t1.rows(), q = t2.rows();
  // Unknown X(a, b) has index a*p + b; equation (i, j) reads sum_k t2(i,k) X(k,j) - X(i,k) t1(k,j).
  Matrix sys(q * p, q * p);
  for (std::size_t i = 0; i < q; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      std::size_t eq = i * p + j;
      for (std::size_t k = 0; k < q; ++k) sys(eq, k * p + j) += t2(i, k);
      for (std::size_t k = 0; k < p; ++k) sys(eq, i * p + k) -= t1(k, j);
    }
  return q * p - sys.rank();
}

// ---------------------------------------------------------------------------------------------

/// Polynomial over Q(i), coefficients low to high, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<ComplexRational> c) : c_(std::move(c)) { trim(); }
  static Poly constant(const ComplexRational& a) { return Poly({a}); }
  static Poly x() { return Poly({ComplexRational{}, ComplexRational(1)}); }

  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<ComplexRational>& coeffs() const { return c_; }
  const ComplexRational& lead() const { return c_.back(); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<ComplexRational> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + b * Poly::constant(ComplexRational(-1)); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<ComplexRational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// (quotient, remainder).
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<ComplexRational> r = a.c_;
    std::vector<ComplexRational> q(a.c_.size() >= b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 0);
    ComplexRational inv = ComplexRational(1) / b.lead();
    for (std::size_t k = q.size(); k-- > 0;) {
      ComplexRational f = r[k + b.c_.size() - 1] * inv;
      q[k] = f;
      if (f.is_zero()) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[k + j] -= f * b.c_[j];
    }
    return {Poly(std::move(q)), Poly(std::move(r))};
  }

  Poly monic() const {
    if (is_zero()) return {};
    ComplexRational inv = ComplexRational(1) / lead();
    std::vector<ComplexRational> c = c_;
    for (auto& x : c) x *= inv;
    return Poly(std::move(c));
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t k = c_.size(); k-- > 0;) {
      if (c_[k].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[k].to_string() + ")";
      if (k > 0) s += k == 1 ? "x" : "x^" + std::to_string(k);
    }
    return s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<ComplexRational> c_;
};

/// Invariant factors of T (monic, degree >= 1, each dividing the next): the non-unit diagonal of
/// the Smith form of xI - T over Q(i)[x]. Two matrices are similar iff these lists agree.
inline std::vector<Poly> invariant_factors(const Matrix& t) {
  if (!t.square()) throw DomainError("invariant factors need a square matrix");
  const std::size_t n = t.rows();
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Poly entry = Poly::constant(-t(i, j));
      if (i == j) entry = entry + Poly::x();
      m[i][j] = entry;
    }
  std::vector<Poly> diag;
  for (std::size_t k = 0; k < n; ++k) {
    while (true) {
      // Pivot: nonzero entry of least degree in the trailing block.
      std::size_t pi = n, pj = n;
      for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = k; j < n; ++j)
          if (!m[i][j].is_zero() && (pi == n || m[i][j].degree() < m[pi][pj].degree())) {
            pi = i;
            pj = j;
          }
      if (pi == n) break;  // trailing block vanishes
      std::swap(m[k], m[pi]);
      for (auto& row : m) std::swap(row[k], row[pj]);
      bool clean = true;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (m[i][k].is_zero()) continue;
        auto [q, r] = divmod(m[i][k], m[k][k]);
        for (std::size_t j = k; j < n; ++j) m[i][j] = m[i][j] - q * m[k][j];
        if (!r.is_zero()) clean = false;
      }
      for (std::size_t j = k + 1; j < n; ++j) {
        if (m[k][j].is_zero()) continue;
        auto [q, r] = divmod(m[k][j], m[k][k]);
        for (std::size_t i = k; i < n; ++i) m[i][j] = m[i][j] - q * m[i][k];
        if (!r.is_zero()) clean = false;
      }
      if (!clean) continue;
      // Divisibility: the pivot must divide every remaining entry.
      bool divides = true;
      for (std::size_t i = k + 1; i < n && divides; ++i)
        for (std::size_t j = k + 1; j < n; ++j)
          if (!divmod(m[i][j], m[k][k]).second.is_zero()) {
            for (std::size_t c = k; c < n; ++c) m[k][c] = m[k][c] + m[i][c];
            divides = false;
            break;
          }
      if (divides) break;
    }
    diag.push_back(m[k][k].monic());
  }
  std::vector<Poly> out;
  for (const auto& p : diag)
    if (p.degree() >= 1) out.push_back(p);
  return out;
}

}  // namespace stokes
