#pragma once

// Good models  (+) L^phi (x) R_phi  with regular parts given by monodromy, and the Hom / iso
// deciders for their tempered solution sheaves.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stokes/angle.hpp"
#include "stokes/errors.hpp"
#include "stokes/exppoly.hpp"
#include "stokes/matrix.hpp"

namespace stokes {

/// A regular holonomic module up to isomorphism: its invertible monodromy matrix.
class RegularPart {
 public:
  RegularPart() : t_(Matrix::identity(1)) {}
  explicit RegularPart(Matrix monodromy) : t_(std::move(monodromy)) {
    if (!t_.square() || t_.rows() == 0) throw DomainError("monodromy must be a non-empty square matrix");
    if (t_.determinant().is_zero()) throw DomainError("monodromy must be invertible");
  }
  static RegularPart trivial(std::size_t rank) { return RegularPart(Matrix::identity(rank)); }

  std::size_t rank() const { return t_.rows(); }
  const Matrix& monodromy() const { return t_; }

 private:
  Matrix t_;
};

inline RegularPart direct_sum(const std::vector<RegularPart>& parts) {
  std::vector<Matrix> blocks;
  for (const auto& p : parts) blocks.push_back(p.monodromy());
  return RegularPart(block_diagonal(blocks));
}

/// dim Hom(R1, R2) = dim {X : T2 X = X T1}.
inline std::size_t regular_hom_dim(const RegularPart& r1, const RegularPart& r2) {
  return intertwiner_dimension(r1.monodromy(), r2.monodromy());
}

/// R1 ~ R2: monodromies similar over Q(i), via invariant factors.
inline bool regular_iso(const RegularPart& r1, const RegularPart& r2) {
  if (r1.rank() != r2.rank()) return false;
  return invariant_factors(r1.monodromy()) == invariant_factors(r2.monodromy());
}

struct ModelTerm {
  ExpPolynomial phi;
  RegularPart reg;
};

/// (+) L^phi (x) R_phi. Terms with equal phi are merged into one block-diagonal regular part, so
/// the stored phi are pairwise distinct.
class GoodModel {
 public:
  GoodModel() = default;
  GoodModel(long ram_index, std::vector<ModelTerm> terms) : l_(ram_index) {
    if (l_ < 1) throw DomainError("good model ramification index must be positive");
    for (auto& t : terms) {
      if (l_ % t.phi.ram_index() != 0)
        throw DomainError("term " + t.phi.to_string() + " has ramification not dividing l = " + std::to_string(l_));
      auto it = std::find_if(terms_.begin(), terms_.end(), [&](const ModelTerm& u) { return u.phi == t.phi; });
      if (it == terms_.end())
        terms_.push_back(std::move(t));
      else
        it->reg = direct_sum({it->reg, t.reg});
    }
  }

  long ram_index() const { return l_; }
  const std::vector<ModelTerm>& terms() const { return terms_; }
  bool unramified() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const ModelTerm& t) { return !t.phi.is_ramified(); });
  }
  Rational katz() const {
    Rational k(0);
    for (const auto& t : terms_) k = std::max(k, katz_slope(t.phi));
    return k;
  }
  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& t : terms_) r += static_cast<std::size_t>(t.phi.ram_index()) * t.reg.rank();
    return r;
  }

 private:
  long l_ = 1;
  std::vector<ModelTerm> terms_;
};

/// Hom between tempered solutions of L^phi1 (x) R1 and L^phi2 (x) R2.
inline std::size_t tempered_hom_dim(const ExpPolynomial& phi1, const RegularPart& r1, const ExpPolynomial& phi2,
                                    const RegularPart& r2) {
  if (phi1.is_zero() != phi2.is_zero()) return 0;
  if (positive_proportionality(phi1, phi2)) return regular_hom_dim(r1, r2);
  return 0;
}

struct RayClass {
  ExpPolynomial representative;
  std::vector<std::size_t> members;  // term indices
};

/// Terms grouped by R_{>0} phi; the zero term, if any, is its own class.
inline std::vector<RayClass> ray_partition(const GoodModel& model) {
  std::vector<RayClass> out;
  const auto& terms = model.terms();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(), [&](const RayClass& c) {
      return positive_proportionality(c.representative, terms[i].phi).has_value();
    });
    if (it == out.end())
      out.push_back({terms[i].phi, {i}});
    else
      it->members.push_back(i);
  }
  return out;
}

struct IsoCertificate {
  bool isomorphic = false;
  std::vector<std::pair<std::size_t, std::size_t>> ray_matching;  // class index in m1 -> in m2
  std::optional<std::string> first_failing;                          // "rays" or "regular_parts"
};

namespace detail {

inline RegularPart ray_sum(const GoodModel& m, const RayClass& c) {
  std::vector<RegularPart> parts;
  for (auto i : c.members) parts.push_back(m.terms()[i].reg);
  return direct_sum(parts);
}

inline void require_unramified(const GoodModel& m, const char* op) {
  if (!m.unramified()) throw DomainError(std::string(op) + ": ramified good models are not supported");
}

}  // namespace detail

/// Tempered solutions of two unramified good models are isomorphic off 0 iff the ray sets agree
/// and, ray by ray, the sums of regular parts are isomorphic.
inline IsoCertificate tempered_iso_good_models(const GoodModel& m1, const GoodModel& m2) {
  detail::require_unramified(m1, "tempered_iso_good_models");
  detail::require_unramified(m2, "tempered_iso_good_models");
  IsoCertificate cert;
  auto rays1 = ray_partition(m1), rays2 = ray_partition(m2);
  std::vector<bool> used(rays2.size(), false);
  for (std::size_t i = 0; i < rays1.size(); ++i) {
    std::optional<std::size_t> match;
    for (std::size_t j = 0; j < rays2.size() && !match; ++j)
      if (!used[j] && positive_proportionality(rays1[i].representative, rays2[j].representative)) match = j;
    if (!match) {
      cert.first_failing = "rays";
      return cert;
    }
    used[*match] = true;
    cert.ray_matching.emplace_back(i, *match);
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    cert.first_failing = "rays";
    return cert;
  }
  for (const auto& [i, j] : cert.ray_matching) {
    if (!regular_iso(detail::ray_sum(m1, rays1[i]), detail::ray_sum(m2, rays2[j]))) {
      cert.first_failing = "regular_parts";
      return cert;
    }
  }
  cert.isomorphic = true;
  return cert;
}

struct FullyFaithfulReport {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  bool equal = false;
};

/// Hom of tempered solutions after twisting both models by omega, against the Hom of the models
/// themselves. Requires katz(m_i) < pole order of omega.
inline FullyFaithfulReport fully_faithful_check(const GoodModel& m1, const GoodModel& m2, const ExpPolynomial& omega) {
  detail::require_unramified(m1, "fully_faithful_check");
  detail::require_unramified(m2, "fully_faithful_check");
  Rational pole = katz_slope(omega);
  if (!(m1.katz() < pole) || !(m2.katz() < pole))
    throw HypothesisError("fully_faithful_check: need katz(M_i) < k <= -v(omega); got katz " + m1.katz().get_str() +
                          ", " + m2.katz().get_str() + " and -v(omega) = " + pole.get_str());
  FullyFaithfulReport out;
  for (const auto& a : m1.terms())
    for (const auto& b : m2.terms()) {
      out.lhs += tempered_hom_dim(twist_add(a.phi, omega), a.reg, twist_add(b.phi, omega), b.reg);
      if (a.phi == b.phi) out.rhs += regular_hom_dim(a.reg, b.reg);
    }
  out.equal = out.lhs == out.rhs;
  return out;
}

namespace detail {

// exp(2 pi i r) when it lies in {1, i, -1, -i}.
inline std::optional<ComplexRational> root_of_unity_in_qi(const Rational& r) {
  Rational f = mod_rational(r, Rational(1));
  if (f == 0) return ComplexRational(1);
  if (f == make_rational(1, 4)) return ComplexRational::i();
  if (f == make_rational(1, 2)) return ComplexRational(-1);
  if (f == make_rational(3, 4)) return -ComplexRational::i();
  return std::nullopt;
}

}  // namespace detail

/// phi(z^(1/l)) and phi'(z^(1/l)) differ by z^(1/l) -> zeta^h z^(1/l), zeta = exp(2 pi i / l):
/// the two are determinations of the same multivalued exponent.
inline bool galois_conjugate(const ExpPolynomial& a, const ExpPolynomial& b) {
  if (a.ram_index() != b.ram_index()) return false;
  if (a.terms().size() != b.terms().size()) return false;
  long l = a.ram_index();
  for (long h = 0; h < l; ++h) {
    bool ok = true;
    for (const auto& [j, c] : a.terms()) {
      // coefficient of z^(-j/l) picks up zeta^(-h j)
      auto u = detail::root_of_unity_in_qi(make_rational(-h * j, l));
      if (!u || b.coefficient(j) != c * *u) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// The Omega-graded stalks agree: equal exponents (up to determination) carry equal total rank.
inline bool graded_stalk_equal(const GoodModel& m1, const GoodModel& m2) {
  struct Orbit {
    ExpPolynomial phi;
    std::size_t rank1 = 0, rank2 = 0;
  };
  std::vector<Orbit> orbits;
  auto add = [&](const ExpPolynomial& phi, std::size_t rank, bool first) {
    auto it = std::find_if(orbits.begin(), orbits.end(), [&](const Orbit& o) { return galois_conjugate(o.phi, phi); });
    if (it == orbits.end()) it = orbits.insert(orbits.end(), Orbit{phi});
    (first ? it->rank1 : it->rank2) += rank;
  };
  for (const auto& t : m1.terms()) add(t.phi, t.reg.rank(), true);
  for (const auto& t : m2.terms()) add(t.phi, t.reg.rank(), false);
  return std::all_of(orbits.begin(), orbits.end(), [](const Orbit& o) { return o.rank1 == o.rank2; });
}

/// Monodromy of the solution local system on the punctured disk. A term with ramified phi of
/// index l contributes the elementary module of rank l * rank(R): block h goes to block h+1 and the
/// last block returns to the first through T, so M^l = diag(T, ..., T). Blocks are ordered by
/// determination (determination-major).
inline RegularPart underlying_local_system(const GoodModel& model) {
  std::vector<Matrix> blocks;
  for (const auto& t : model.terms()) {
    auto l = static_cast<std::size_t>(t.phi.ram_index());
    const Matrix& T = t.reg.monodromy();
    std::size_t r = T.rows();
    if (l == 1) {
      blocks.push_back(T);
      continue;
    }
    Matrix m(l * r, l * r);
    for (std::size_t h = 0; h + 1 < l; ++h)
      for (std::size_t i = 0; i < r; ++i) m((h + 1) * r + i, h * r + i) = ComplexRational(1);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) m(i, (l - 1) * r + j) = T(i, j);
    blocks.push_back(std::move(m));
  }
  if (blocks.empty()) throw DomainError("good model without terms");
  return RegularPart(block_diagonal(blocks));
}

struct TwistedIsoReport {
  bool isomorphic = false;
  bool local_system_ok = false;
  bool graded_stalk_ok = false;
  std::optional<std::string> first_failing;  // "local_system" or "graded_stalk"
};

/// Tempered solutions twisted by omega are isomorphic iff (a) the local systems agree and (b) the
/// graded stalks agree. Requires katz(m_i) < k < pole order of omega.
inline TwistedIsoReport tempered_iso_twisted(const GoodModel& m1, const GoodModel& m2, const ExpPolynomial& omega,
                                             long k) {
  if (k < 1) throw HypothesisError("tempered_iso_twisted: k must be positive");
  if (!(m1.katz() < k) || !(m2.katz() < k))
    throw HypothesisError("tempered_iso_twisted: need katz(M_i) < k = " + std::to_string(k) + "; got " +
                          m1.katz().get_str() + ", " + m2.katz().get_str());
  if (!(katz_slope(omega) > k))
    throw HypothesisError("tempered_iso_twisted: need -v(omega) > k; got -v(omega) = " + katz_slope(omega).get_str() +
                          ", k = " + std::to_string(k));
  TwistedIsoReport out;
  out.local_system_ok = regular_iso(underlying_local_system(m1), underlying_local_system(m2));
  out.graded_stalk_ok = graded_stalk_equal(m1, m2);
  out.isomorphic = out.local_system_ok && out.graded_stalk_ok;
  if (!out.local_system_ok)
    out.first_failing = "local_system";
  else if (!out.graded_stalk_ok)
    out.first_failing = "graded_stalk";
  return out;
}

// ---------------------------------------------------------------------------------------------
// Newton polygon

/// P = sum_j a_j(z) (d/dz)^j described by the valuations v(a_j); nullopt is +infinity.
struct OperatorSpec {
  long order = 0;
  std::vector<std::optional<long>> valuations;  // index j = 0..order

  OperatorSpec(long m, std::vector<std::optional<long>> v) : order(m), valuations(std::move(v)) {
    if (order < 1) throw DomainError("operator order must be positive");
    if (valuations.size() != static_cast<std::size_t>(order + 1))
      throw DomainError("operator needs one valuation per j = 0..m");
    if (!valuations.back()) throw DomainError("leading coefficient must be nonzero");
  }
};

namespace detail {

// max_j ((j - v_j) - (m - v_m)) / (m - j) over finite v_j, j < m; nullopt if there is none.
inline std::optional<Rational> steepest_from_top(const OperatorSpec& op) {
  long m = op.order;
  long ym = m - *op.valuations.back();
  std::optional<Rational> best;
  for (long j = 0; j < m; ++j) {
    const auto& v = op.valuations[static_cast<std::size_t>(j)];
    if (!v) continue;
    Rational s = make_rational((j - *v) - ym, m - j);
    if (!best || s > *best) best = s;
  }
  return best;
}

}  // namespace detail

/// Largest positive slope of the Newton polygon of points (j, j - v(a_j)), read off the edge of
/// the upper hull that ends at the order-m vertex; 0 for regular singular operators.
inline Rational newton_polygon_katz(const OperatorSpec& op) {
  std::vector<std::pair<long, long>> pts;
  for (long j = 0; j <= op.order; ++j)
    if (const auto& v = op.valuations[static_cast<std::size_t>(j)]) pts.emplace_back(j, j - *v);
  // Upper hull by monotone chain, left to right.
  std::vector<std::pair<long, long>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      long cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
      if (cross >= 0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  Rational katz(0);
  if (hull.size() >= 2) {
    const auto& a = hull[hull.size() - 2];
    const auto& b = hull.back();
    // Edge into the order-m vertex; descending to the right means positive slope in our convention.
    Rational s = make_rational(a.second - b.second, b.first - a.first);
    if (s > katz) katz = s;
  }
  auto check = detail::steepest_from_top(op);
  Rational expected = check && *check > 0 ? *check : Rational(0);
  if (katz != expected) throw std::logic_error("Newton polygon hull disagrees with the pairwise slope bound");
  return katz;
}

}  // namespace stokes
