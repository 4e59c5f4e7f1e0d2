#pragma once

// Test regions in C^x: membership, distance to the boundary, and sampling windows.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "stokes/errors.hpp"
#include "stokes/exppoly.hpp"
#include "stokes/puiseux.hpp"

namespace stokes {

using cplx = std::complex<double>;

namespace detail {

inline constexpr double kPi = std::numbers::pi;

// Angle of z - in (-pi, pi] - measured from `center`.
inline double angle_offset(cplx z, double center) {
  double d = std::arg(z) - center;
  d = std::remainder(d, 2 * kPi);
  return d;
}

inline double dist_to_segment(cplx p, cplx a, cplx b) {
  cplx ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 == 0 ? 0 : std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

// Distance from p to the ray {t e^(i alpha), t >= 0}.
inline double dist_to_ray(cplx p, double alpha) {
  double off = std::fabs(angle_offset(p, alpha));
  if (off >= kPi / 2) return std::abs(p);
  return std::abs(p) * std::sin(off);
}

// Upper half of the circle |p - c| = r (the y >= 0 part).
inline double dist_to_upper_semicircle(cplx p, cplx c, double r) {
  cplx d = p - c;
  if (d.imag() >= 0) return std::fabs(std::abs(d) - r);
  return std::min(std::abs(p - (c + r)), std::abs(p - (c - r)));
}

inline bool in_u1(cplx p) {
  double x = p.real(), y = p.imag();
  if (!(std::fabs(x) < 1) || !(y < 1)) return false;
  double v = std::fabs(x) - x * x;
  return y > std::sqrt(std::max(v, 0.0));
}

// Exact distance from a point of U1 to its boundary: the arcs y = sqrt(|x| - x^2) (upper halves of
// the circles centered at (+-1/2, 0) of radius 1/2), the segments x = +-1 for 0 <= y <= 1 and
// y = 1 for |x| <= 1.
inline double dist_u1(cplx p) {
  double d = dist_to_upper_semicircle(p, cplx(0.5, 0), 0.5);
  d = std::min(d, dist_to_upper_semicircle(p, cplx(-0.5, 0), 0.5));
  d = std::min(d, dist_to_segment(p, cplx(-1, 1), cplx(1, 1)));
  d = std::min(d, dist_to_segment(p, cplx(1, 0), cplx(1, 1)));
  d = std::min(d, dist_to_segment(p, cplx(-1, 0), cplx(-1, 1)));
  return d;
}

}  // namespace detail

/// {|z| < radius, |arg z - center| < half_amplitude}.
struct SectorRegion {
  double center = 0;
  double half_amplitude = 0;
  double radius = 1;
};

/// {Re(c/z) < A, |z| < radius}: the complement of the closed disk of center c/(2A) and radius
/// |c|/(2A), cut to the disk of the given radius.
struct BallComplementRegion {
  cplx c{1};
  double A = 1;
  double radius = 1;
};

struct ParabolicU1 {};
struct ParabolicU2 {};

/// {Re phi(z) < A, 0 < |z| < radius}.
struct SublevelRegion {
  NumericExpPolynomial phi;
  double A = 1;
  double radius = 1;
};

/// eta(V) with eta(w) = w sigma(w) and V the branch of {w : w^n in scale * U_(1 or 2)} along the
/// w-direction (pi/2 + k pi)/n, cut to |w| <= w_radius. With cover L > 1 the set lives in the
/// variable z^(1/L) (arg z in [0, 2pi)) and is pushed down to z.
struct EtaImageRegion {
  int cover = 1;
  int n = 1;
  int k = 0;
  std::vector<cplx> sigma;  // truncated sigma coefficients
  double scale = 1;
  double w_radius = 1;
  int truncation = 16;
};

/// U1 rotated so that it is concentrated along `direction` and scaled by `scale`.
struct ConcentratedWedge {
  double direction = detail::kPi / 2;
  double scale = 1;
};

struct PolygonRegion {
  std::vector<cplx> vertices;
};

using RegionSpec = std::variant<SectorRegion, BallComplementRegion, ParabolicU1, ParabolicU2, SublevelRegion,
                                EtaImageRegion, ConcentratedWedge, PolygonRegion>;

namespace detail {

inline cplx eta_eval(const EtaImageRegion& r, cplx w) {
  cplx s = 0;
  for (std::size_t k = r.sigma.size(); k-- > 0;) s = s * w + r.sigma[k];
  return w * s;
}

inline cplx eta_derivative(const EtaImageRegion& r, cplx w) {
  cplx s = 0;
  for (std::size_t k = r.sigma.size(); k-- > 0;) s = s * w + static_cast<double>(k + 1) * r.sigma[k];
  return s;
}

// Newton inversion of eta from z / sigma(0); nullopt when it does not settle.
inline std::optional<cplx> eta_invert(const EtaImageRegion& r, cplx z) {
  cplx w = z / r.sigma.front();
  for (int it = 0; it < 60; ++it) {
    cplx d = eta_derivative(r, w);
    if (d == cplx(0)) return std::nullopt;
    cplx step = (eta_eval(r, w) - z) / d;
    w -= step;
    if (std::abs(step) <= 1e-15 * std::abs(w)) return w;
  }
  if (std::abs(eta_eval(r, w) - z) <= 1e-12 * std::abs(z)) return w;
  return std::nullopt;
}

inline cplx cover_root(cplx z, int L) {
  if (L == 1) return z;
  double th = std::arg(z);
  if (th < 0) th += 2 * kPi;
  return std::polar(std::pow(std::abs(z), 1.0 / L), th / L);
}

inline bool eta_contains(const EtaImageRegion& r, cplx z) {
  if (z == cplx(0)) return false;
  auto w = eta_invert(r, cover_root(z, r.cover));
  if (!w || std::abs(*w) > r.w_radius) return false;
  double axis = (kPi / 2 + r.k * kPi) / r.n;
  if (std::fabs(angle_offset(*w, axis)) >= kPi / (2 * r.n)) return false;
  cplx u = std::pow(*w, r.n) / r.scale;
  return r.k % 2 == 0 ? in_u1(u) : in_u1(std::conj(u));
}

inline bool polygon_contains(const PolygonRegion& p, cplx z) {
  bool inside = false;
  const auto& v = p.vertices;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].imag() > z.imag()) != (v[j].imag() > z.imag())) {
      double x = (v[j].real() - v[i].real()) * (z.imag() - v[i].imag()) / (v[j].imag() - v[i].imag()) + v[i].real();
      if (z.real() < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace detail

inline bool contains(const RegionSpec& region, cplx z) {
  using namespace detail;
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SectorRegion>) {
          double m = std::abs(z);
          return m > 0 && m < r.radius && std::fabs(angle_offset(z, r.center)) < r.half_amplitude;
        } else if constexpr (std::is_same_v<T, BallComplementRegion>) {
          double m = std::abs(z);
          if (!(m > 0 && m < r.radius)) return false;
          return std::abs(z - r.c / (2 * r.A)) > std::abs(r.c) / (2 * r.A);
        } else if constexpr (std::is_same_v<T, ParabolicU1>) {
          return in_u1(z);
        } else if constexpr (std::is_same_v<T, ParabolicU2>) {
          return in_u1(std::conj(z));
        } else if constexpr (std::is_same_v<T, SublevelRegion>) {
          double m = std::abs(z);
          return m > 0 && m < r.radius && r.phi.log_abs_exp(z) < r.A;
        } else if constexpr (std::is_same_v<T, EtaImageRegion>) {
          return eta_contains(r, z);
        } else if constexpr (std::is_same_v<T, ConcentratedWedge>) {
          cplx u = z * std::polar(1.0 / r.scale, kPi / 2 - r.direction);
          return in_u1(u);
        } else {
          return polygon_contains(r, z);
        }
      },
      region);
}

/// Radius of a disk around 0 containing the region.
inline double bounding_radius(const RegionSpec& region) {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SectorRegion> || std::is_same_v<T, BallComplementRegion> ||
                      std::is_same_v<T, SublevelRegion>) {
          return r.radius;
        } else if constexpr (std::is_same_v<T, ParabolicU1> || std::is_same_v<T, ParabolicU2>) {
          return std::sqrt(2.0);
        } else if constexpr (std::is_same_v<T, EtaImageRegion>) {
          double sum = 0, p = r.w_radius;
          for (const auto& c : r.sigma) {
            sum += std::abs(c) * p;
            p *= r.w_radius;
          }
          return std::pow(sum, r.cover);
        } else if constexpr (std::is_same_v<T, ConcentratedWedge>) {
          return r.scale * std::sqrt(2.0);
        } else {
          double m = 0;
          for (const auto& v : r.vertices) m = std::max(m, std::abs(v));
          return m;
        }
      },
      region);
}

namespace detail {

// Conservative distance for regions without a closed form: march along 32 directions until the
// membership predicate flips, bisect, take the minimum and shrink it by 0.9.
inline double marched_distance(const RegionSpec& region, cplx z) {
  constexpr int kDirections = 32;
  double m = std::abs(z);
  double h0 = 1e-7 * m * std::min(1.0, m);
  double limit = 4 * bounding_radius(region) + m;
  double best = std::abs(z);  // the origin is never inside
  for (int d = 0; d < kDirections; ++d) {
    cplx u = std::polar(1.0, 2 * kPi * d / kDirections);
    double in = 0, out = h0;
    while (out < best && out < limit && contains(region, z + out * u)) {
      in = out;
      out *= 2;
    }
    if (out >= best) continue;
    for (int it = 0; it < 40; ++it) {
      double mid = (in + out) / 2;
      if (contains(region, z + mid * u))
        in = mid;
      else
        out = mid;
    }
    best = std::min(best, out);
  }
  return 0.9 * best;
}

}  // namespace detail

/// Distance from a member point to the boundary: exact for sectors, disk complements, U1/U2,
/// wedges and polygons, a ray-marched lower estimate otherwise.
inline double boundary_distance(const RegionSpec& region, cplx z) {
  using namespace detail;
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SectorRegion>) {
          double d = std::min(dist_to_ray(z, r.center - r.half_amplitude), dist_to_ray(z, r.center + r.half_amplitude));
          return std::min(d, r.radius - std::abs(z));
        } else if constexpr (std::is_same_v<T, BallComplementRegion>) {
          double d = std::abs(z - r.c / (2 * r.A)) - std::abs(r.c) / (2 * r.A);
          return std::min(d, r.radius - std::abs(z));
        } else if constexpr (std::is_same_v<T, ParabolicU1>) {
          return dist_u1(z);
        } else if constexpr (std::is_same_v<T, ParabolicU2>) {
          return dist_u1(std::conj(z));
        } else if constexpr (std::is_same_v<T, ConcentratedWedge>) {
          return r.scale * dist_u1(z * std::polar(1.0 / r.scale, kPi / 2 - r.direction));
        } else if constexpr (std::is_same_v<T, PolygonRegion>) {
          double d = std::numeric_limits<double>::infinity();
          const auto& v = r.vertices;
          for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) d = std::min(d, dist_to_segment(z, v[j], v[i]));
          return d;
        } else {
          return marched_distance(region, z);
        }
      },
      region);
}

/// Angular window (center, half-width) covering the slice of the region at modulus r.
inline std::pair<double, double> angular_window(const RegionSpec& region, double r) {
  using namespace detail;
  return std::visit(
      [&](const auto& reg) -> std::pair<double, double> {
        using T = std::decay_t<decltype(reg)>;
        if constexpr (std::is_same_v<T, SectorRegion>) {
          return {reg.center, reg.half_amplitude};
        } else if constexpr (std::is_same_v<T, ParabolicU1>) {
          // Points of U1 satisfy |x| < x^2 + y^2.
          return {kPi / 2, std::asin(std::min(1.0, r))};
        } else if constexpr (std::is_same_v<T, ParabolicU2>) {
          return {3 * kPi / 2, std::asin(std::min(1.0, r))};
        } else if constexpr (std::is_same_v<T, ConcentratedWedge>) {
          return {reg.direction, std::asin(std::min(1.0, r / reg.scale))};
        } else if constexpr (std::is_same_v<T, EtaImageRegion>) {
          double axis = (kPi / 2 + reg.k * kPi) / reg.n;
          double wr = std::pow(r, 1.0 / reg.cover) / std::abs(reg.sigma.front());
          cplx wc = std::polar(wr, axis);
          double center = std::arg(eta_eval(reg, wc));
          double u = std::pow(wr, reg.n) / reg.scale;
          double half = 2.5 * std::asin(std::min(1.0, 2 * u)) / reg.n + 1e-12;
          if (reg.cover > 1) {
            if (center < 0) center += 2 * kPi;
            center *= reg.cover;
            half *= reg.cover;
          }
          return {center, std::min(kPi, half)};
        } else {
          return {0.0, kPi};
        }
      },
      region);
}

/// Short human-readable tag.
inline std::string region_name(const RegionSpec& region) {
  static const char* names[] = {"sector", "ball_complement", "U1", "U2", "sublevel", "eta_image", "wedge", "polygon"};
  return names[region.index()];
}

// ---------------------------------------------------------------------------------------------

/// Region along the k-th Stokes direction of phi on which exp(phi) and exp(-phi) are both
/// tempered: eta(V) for the truncated normalization eta(w) = w sigma_N(w).
inline EtaImageRegion make_eta_region(const ExpPolynomial& phi, int k, std::size_t truncation = 16, int cover = 1) {
  SigmaSeries sigma = sigma_solve(phi, truncation);
  EtaImageRegion r;
  r.cover = cover;
  r.n = static_cast<int>(phi.pole_order());
  if (k < 0 || k >= 2 * r.n) throw DomainError("Stokes index out of range");
  r.k = k;
  r.sigma = numeric_coefficients(sigma);
  r.truncation = static_cast<int>(truncation);
  double s0 = std::abs(r.sigma.front());
  // Geometric growth rate of the coefficients; the radius keeps the tail bound
  // q^(N+1) / (1 - q) below 2.5% (a tenth of the quarter-width margin) with q <= 1/2.
  double growth = 0;
  for (std::size_t j = 1; j < r.sigma.size(); ++j) {
    double c = std::abs(r.sigma[j]) / s0;
    if (c > 0) growth = std::max(growth, std::pow(c, 1.0 / static_cast<double>(j)));
  }
  if (growth == 0) {  // eta is linear, no truncation error
    r.scale = 1;
    r.w_radius = std::pow(std::sqrt(2.0), 1.0 / r.n) * 1.0001;
    return r;
  }
  double lo = 0, hi = 0.5;
  auto tail = [&](double q) { return std::pow(q, static_cast<double>(truncation + 1)) / (1 - q); };
  if (tail(hi) <= 0.025) {
    lo = hi;
  } else {
    for (int it = 0; it < 60; ++it) {
      double mid = (lo + hi) / 2;
      (tail(mid) <= 0.025 ? lo : hi) = mid;
    }
  }
  r.w_radius = lo / growth;
  r.scale = std::pow(r.w_radius, r.n) / std::sqrt(2.0);
  return r;
}

}  // namespace stokes
