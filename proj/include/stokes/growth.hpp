#pragma once

// Directional growth of exp(phi): support arcs I_phi, Stokes directions, sector verdicts and
// witnesses separating exp(phi1) from exp(phi2).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stokes/angle.hpp"
#include "stokes/errors.hpp"
#include "stokes/exppoly.hpp"
#include "stokes/region.hpp"

namespace stokes {

enum class DirectionClass { Decay, Growth, Oscillatory };
enum class Verdict { Tempered, NotTempered, Boundary };

inline const char* to_string(DirectionClass c) {
  switch (c) {
    case DirectionClass::Decay: return "Decay";
    case DirectionClass::Growth: return "Growth";
    case DirectionClass::Oscillatory: return "Oscillatory";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Tempered: return "Tempered";
    case Verdict::NotTempered: return "NotTempered";
    case Verdict::Boundary: return "Boundary";
  }
  return "?";
}

/// Open sector of amplitude 2 eps pi around `center`.
struct Sector {
  AngleExpr center;
  Rational half_amplitude;  // eps, in units of pi
  Rational radius{1};

  Sector(AngleExpr c, Rational eps, Rational r = Rational(1))
      : center(std::move(c)), half_amplitude(std::move(eps)), radius(std::move(r)) {
    if (sgn(half_amplitude) <= 0 || half_amplitude >= 1) throw DomainError("sector half-amplitude must lie in (0, pi)");
    if (sgn(radius) <= 0) throw DomainError("sector radius must be positive");
  }
  AngleExpr lower() const { return center.plus_pi(-half_amplitude); }
  AngleExpr upper() const { return center.plus_pi(half_amplitude); }
};

namespace detail {

inline void require_nonzero(const ExpPolynomial& phi, const char* op) {
  if (phi.is_zero()) throw DomainError(std::string(op) + ": phi must be nonzero");
}

// Arcs of an unramified phi: ((tau + pi/2 + 2k pi)/n, (tau + 3pi/2 + 2k pi)/n).
inline std::vector<Arc> unramified_arcs(const ExpPolynomial& phi) {
  long n = phi.pole_order();
  const ComplexRational& an = phi.leading_coefficient();
  std::vector<Arc> arcs;
  for (long k = 0; k < n; ++k)
    arcs.push_back({AngleExpr(an, make_rational(1, 2) + 2 * k, n), AngleExpr(an, make_rational(3, 2) + 2 * k, n)});
  return arcs;
}

inline std::vector<AngleExpr> unramified_stokes(const ExpPolynomial& phi) {
  long n = phi.pole_order();
  const ComplexRational& an = phi.leading_coefficient();
  std::vector<AngleExpr> out;
  for (long k = 0; k < 2 * n; ++k) out.push_back(AngleExpr(an, make_rational(1, 2) + k, n));
  return out;
}

// Numeric counterclockwise length from a to b in [0, 2pi).
inline double ccw_length(const AngleExpr& a, const AngleExpr& b) {
  double d = b.radians() - a.radians();
  if (d < 0) d += 2 * std::numbers::pi;
  return d;
}

// Pieces of `arc` inside the open window (0, 2pi/l) of the cover, as arcs in the cover.
inline std::vector<Arc> clip_to_window(const Arc& arc, long l, AngleComparator& cmp) {
  AngleExpr w0 = AngleExpr::pi_times(0);
  AngleExpr w1 = AngleExpr::pi_times(make_rational(2, l));
  std::vector<AngleExpr> cuts{arc.start};
  for (const auto& p : {w0, w1})
    if (ArcSet::in_open(arc, p, cmp)) cuts.push_back(p);
  std::sort(cuts.begin() + 1, cuts.end(),
            [&](const AngleExpr& x, const AngleExpr& y) { return cmp.ccw_before(arc.start, x, y); });
  cuts.push_back(arc.end);
  std::vector<Arc> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Arc piece{cuts[i], cuts[i + 1]};
    // A piece lies entirely inside or outside the window; test its midpoint numerically.
    double mid = piece.start.radians() + ccw_length(piece.start, piece.end) / 2;
    mid = std::fmod(mid, 2 * std::numbers::pi);
    if (mid > 0 && mid < 2 * std::numbers::pi / static_cast<double>(l)) out.push_back(piece);
  }
  return out;
}

// Cover angle alpha in [0, 2pi/l) mapped to theta = l alpha.
inline AngleExpr push_down(const AngleExpr& alpha, long l) {
  if (l == 1) return alpha;
  return alpha.times(l);
}

}  // namespace detail

/// I_phi = {theta : Re(phi) -> -infinity along theta}, i.e. cos(tau - n theta) < 0 for the leading
/// term. Ramified phi use the determination with arg z in [0, 2pi); the cut direction 0 is never
/// inside an arc.
inline ArcSet support_arcs(const ExpPolynomial& phi, PrecisionPolicy policy = {}) {
  detail::require_nonzero(phi, "support_arcs");
  if (!phi.is_ramified()) return ArcSet(detail::unramified_arcs(phi), policy);
  long l = phi.ram_index();
  AngleComparator cmp(policy);
  std::vector<Arc> arcs;
  for (const auto& arc : detail::unramified_arcs(phi.lift(l)))
    for (const auto& piece : detail::clip_to_window(arc, l, cmp))
      arcs.push_back({detail::push_down(piece.start, l), detail::push_down(piece.end, l)});
  return ArcSet(std::move(arcs), policy);
}

/// The 2n directions where the leading term of Re(phi) changes sign, sorted in [0, 2pi). For
/// ramified phi, the directions of the cover lying in [0, 2pi/l), pushed down.
inline std::vector<AngleExpr> stokes_directions(const ExpPolynomial& phi, PrecisionPolicy policy = {}) {
  detail::require_nonzero(phi, "stokes_directions");
  AngleComparator cmp(policy);
  std::vector<AngleExpr> out;
  if (!phi.is_ramified()) {
    out = detail::unramified_stokes(phi);
  } else {
    long l = phi.ram_index();
    AngleExpr w1 = AngleExpr::pi_times(make_rational(2, l));
    for (const auto& a : detail::unramified_stokes(phi.lift(l)))
      if (cmp.less(a, w1)) out.push_back(detail::push_down(a, l));
  }
  std::sort(out.begin(), out.end(), [&](const AngleExpr& x, const AngleExpr& y) { return cmp.less(x, y); });
  return out;
}

inline DirectionClass classify_direction(const ArcSet& arcs, const AngleExpr& theta, AngleComparator& cmp) {
  if (arcs.is_endpoint(theta, cmp)) return DirectionClass::Oscillatory;
  return arcs.contains(theta, cmp) ? DirectionClass::Decay : DirectionClass::Growth;
}

/// Decay inside I_phi, Growth outside its closure, Oscillatory on an endpoint. Directions that
/// cannot be separated from an endpoint at the maximum precision also come out Oscillatory, and
/// set cmp.flagged().
inline DirectionClass classify_direction(const ExpPolynomial& phi, const AngleExpr& theta, AngleComparator& cmp) {
  return classify_direction(support_arcs(phi, cmp.policy()), theta, cmp);
}

inline DirectionClass classify_direction(const ExpPolynomial& phi, const AngleExpr& theta) {
  AngleComparator cmp;
  return classify_direction(phi, theta, cmp);
}

/// Tempered if the closed direction interval of the sector lies in one arc of I_phi, NotTempered
/// if its open interval leaves closure(I_phi), Boundary otherwise.
inline Verdict sector_verdict(const ExpPolynomial& phi, const Sector& s, AngleComparator& cmp) {
  detail::require_nonzero(phi, "sector_verdict");
  AngleExpr a = s.lower(), b = s.upper();
  if (phi.is_ramified()) {
    AngleExpr cut = AngleExpr::pi_times(0);
    if (cmp.equal(a, cut) || cmp.equal(b, cut) || ArcSet::in_open(Arc{a, b}, cut, cmp))
      throw DomainError("sector_verdict: sector meets the branch cut arg z = 0 of a ramified phi");
  }
  ArcSet arcs = support_arcs(phi, cmp.policy());
  if (arcs.covers_closed(a, b, cmp)) return Verdict::Tempered;
  if (!arcs.closure_covers_open(a, b, cmp)) return Verdict::NotTempered;
  return Verdict::Boundary;
}

inline Verdict sector_verdict(const ExpPolynomial& phi, const Sector& s) {
  AngleComparator cmp;
  return sector_verdict(phi, s, cmp);
}

/// A direction where exactly one of exp(phi1), exp(phi2) is tempered on a set concentrated there.
/// tempered_fn / growth_fn are the comparison functions classify_direction reports as Decay and
/// Growth at `direction`: phi_side and phi_other in the leading-data case, psi12 / psi21 in the
/// same-leading-term case.
struct Witness {
  AngleExpr direction;
  int tempered_side = 1;
  RegionSpec region;
  ExpPolynomial tempered_fn;
  ExpPolynomial growth_fn;
  bool via_psi = false;
};

namespace detail {

// A point q*pi with q dyadic strictly inside the open arc, near its middle.
inline std::optional<AngleExpr> dyadic_point(const Arc& arc, AngleComparator& cmp) {
  double mid = arc.start.radians() + ccw_length(arc.start, arc.end) / 2;
  for (int k = 0; k <= 52; ++k) {
    double scale = std::ldexp(1.0, k);
    long num = std::lround(mid / std::numbers::pi * scale);
    AngleExpr q = AngleExpr::pi_times(Rational(num) / Rational(mpz_class(1) << k));
    if (ArcSet::in_open(arc, q, cmp)) return q;
  }
  return std::nullopt;
}

struct Candidate {
  Arc piece;
  AngleExpr point;
  int side;
  double start_offset;  // ccw distance from the window start
};

// Pieces of A \ closure(B) inside the window, each with a test point.
inline void difference_pieces(const ArcSet& a, const ArcSet& b, const std::optional<Arc>& window, int side,
                              AngleComparator& cmp, std::vector<Candidate>& out) {
  for (const auto& arc : a.arcs()) {
    std::vector<AngleExpr> cuts;
    auto consider = [&](const AngleExpr& p) {
      if (ArcSet::in_open(arc, p, cmp)) cuts.push_back(p);
    };
    for (const auto& other : b.arcs()) {
      consider(other.start);
      consider(other.end);
    }
    if (window) {
      consider(window->start);
      consider(window->end);
    }
    std::sort(cuts.begin(), cuts.end(),
              [&](const AngleExpr& x, const AngleExpr& y) { return cmp.ccw_before(arc.start, x, y); });
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [&](const AngleExpr& x, const AngleExpr& y) { return cmp.equal(x, y); }),
               cuts.end());
    cuts.insert(cuts.begin(), arc.start);
    cuts.push_back(arc.end);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      Arc piece{cuts[i], cuts[i + 1]};
      auto q = dyadic_point(piece, cmp);
      if (!q) continue;
      if (b.closure_contains(*q, cmp)) continue;
      if (window && !ArcSet::in_open(*window, *q, cmp)) continue;
      double offset = window ? ccw_length(window->start, piece.start) : piece.start.radians();
      out.push_back({piece, *q, side, offset});
    }
  }
}

inline ConcentratedWedge wedge_along(const AngleExpr& theta) { return {theta.radians(), 0.5}; }

}  // namespace detail

/// Region concentrated along the Stokes direction theta of phi on which exp(phi) and exp(-phi)
/// are both tempered.
inline EtaImageRegion concentrated_region(const ExpPolynomial& phi, const AngleExpr& theta, std::size_t truncation = 16,
                                          PrecisionPolicy policy = {}) {
  detail::require_nonzero(phi, "concentrated_region");
  AngleComparator cmp(policy);
  long l = phi.ram_index();
  ExpPolynomial lifted = phi.lift(l);
  auto grid = detail::unramified_stokes(lifted);
  AngleExpr w1 = AngleExpr::pi_times(make_rational(2, l));
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (l > 1 && !cmp.less(grid[k], w1)) continue;
    if (cmp.equal(detail::push_down(grid[k], l), theta))
      return make_eta_region(lifted, static_cast<int>(k), truncation, static_cast<int>(l));
  }
  throw DomainError("concentrated_region: theta is not a Stokes direction of phi");
}

/// Nothing when phi1 = lambda phi2 with lambda > 0; otherwise a Witness, inside `within` when
/// given. Ramified inputs are handled in the cover w^L = z, L = lcm(l1, l2), restricted to
/// directions off the cut.
inline std::optional<Witness> distinguishing_witness(const ExpPolynomial& phi1, const ExpPolynomial& phi2,
                                                     const std::optional<Sector>& within = std::nullopt,
                                                     PrecisionPolicy policy = {}) {
  detail::require_nonzero(phi1, "distinguishing_witness");
  detail::require_nonzero(phi2, "distinguishing_witness");
  if (positive_proportionality(phi1, phi2)) return std::nullopt;

  AngleComparator cmp(policy);
  const long L = std::lcm(phi1.ram_index(), phi2.ram_index());
  const ExpPolynomial P1 = phi1.lift(L), P2 = phi2.lift(L);
  const long n1 = P1.pole_order(), n2 = P2.pole_order();

  std::optional<Arc> window;
  if (within) {
    Rational amplitude = 2 * within->half_amplitude / L;  // in units of pi, measured in the cover
    Rational bound = make_rational(2, std::max({n1, n2, 2L}));
    if (!(amplitude > bound))
      throw HypothesisError("distinguishing_witness: sector amplitude " + amplitude.get_str() + "·π must exceed 2π/" +
                            std::to_string(std::max({n1, n2, 2L})));
    AngleExpr a = within->lower(), b = within->upper();
    if (L > 1) {
      AngleExpr cut = AngleExpr::pi_times(0);
      if (cmp.equal(a, cut) || cmp.equal(b, cut) || ArcSet::in_open(Arc{a, b}, cut, cmp))
        throw DomainError("distinguishing_witness: sector meets the branch cut arg z = 0");
      window = Arc{a.divided(L), b.divided(L)};
    } else {
      window = Arc{a, b};
    }
  } else if (L > 1) {
    window = Arc{AngleExpr::pi_times(0), AngleExpr::pi_times(make_rational(2, L))};
  }

  auto finish = [&](Witness w) {
    w.direction = detail::push_down(w.direction, L);
    if (L > 1) {
      w.tempered_fn = ExpPolynomial(L, w.tempered_fn.terms());
      w.growth_fn = ExpPolynomial(L, w.growth_fn.terms());
    }
    return w;
  };

  const ComplexRational ratio = P2.leading_coefficient() / P1.leading_coefficient();
  if (n1 != n2 || !ratio.is_positive_real()) {
    ArcSet I1 = support_arcs(P1, policy), I2 = support_arcs(P2, policy);
    std::vector<detail::Candidate> cands;
    detail::difference_pieces(I1, I2, window, 1, cmp, cands);
    detail::difference_pieces(I2, I1, window, 2, cmp, cands);
    std::stable_sort(cands.begin(), cands.end(),
                     [](const detail::Candidate& x, const detail::Candidate& y) { return x.start_offset < y.start_offset; });
    for (const auto& c : cands) {
      const ExpPolynomial& good = c.side == 1 ? P1 : P2;
      const ExpPolynomial& bad = c.side == 1 ? P2 : P1;
      if (classify_direction(good, c.point, cmp) != DirectionClass::Decay ||
          classify_direction(bad, c.point, cmp) != DirectionClass::Growth)
        continue;
      Witness w{c.point, c.side, detail::wedge_along(detail::push_down(c.point, L)), good, bad, false};
      return finish(std::move(w));
    }
  } else {
    // Same leading term up to c > 0: compare through psi12 = P1 - P2/c and psi21 = P2 - c P1 on
    // the Stokes grid of P1.
    const ExpPolynomial psi12 = P1 - P2.scaled(ComplexRational(1) / ratio);
    const ExpPolynomial psi21 = P2 - P1.scaled(ratio);
    ArcSet I12 = support_arcs(psi12, policy);
    auto grid = detail::unramified_stokes(P1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const AngleExpr& alpha = grid[k];
      if (window && !ArcSet::in_open(*window, alpha, cmp)) continue;
      DirectionClass cls = classify_direction(I12, alpha, cmp);
      if (cls == DirectionClass::Oscillatory) continue;
      int side = cls == DirectionClass::Growth ? 2 : 1;
      const ExpPolynomial& base = side == 2 ? P2 : P1;
      Witness w;
      w.direction = alpha;
      w.tempered_side = side;
      w.region = make_eta_region(base, static_cast<int>(k), 16, static_cast<int>(L));
      w.tempered_fn = side == 2 ? psi21 : psi12;
      w.growth_fn = side == 2 ? psi12 : psi21;
      w.via_psi = true;
      return finish(std::move(w));
    }
  }
  if (L == 1 && !within)
    throw std::logic_error("distinguishing_witness: no separating direction found for non-proportional inputs");
  throw HypothesisError("distinguishing_witness: no separating direction inside the admissible window");
}

/// Witness for exp(phi1 o zeta + omega) against exp(phi2 o zeta + omega), zeta an inverse branch of
/// z -> z^l. Requires katz(omega) > katz(phi_j o zeta) + 1 for both j.
inline std::optional<Witness> twisted_witness(const ExpPolynomial& phi1, const ExpPolynomial& phi2,
                                              const ExpPolynomial& omega, long l, PrecisionPolicy policy = {}) {
  ExpPolynomial r1 = ramify(phi1, l), r2 = ramify(phi2, l);
  Rational need = std::max(katz_slope(r1), katz_slope(r2)) + 1;
  if (!(katz_slope(omega) > need))
    throw HypothesisError("twisted_witness: pole order of omega (" + katz_slope(omega).get_str() +
                          ") must exceed max(-v(phi_j)/l + 1) = " + need.get_str());
  if (r1 == r2) return std::nullopt;
  return distinguishing_witness(twist_add(r1, omega), twist_add(r2, omega), std::nullopt, policy);
}

}  // namespace stokes
