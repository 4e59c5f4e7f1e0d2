#pragma once

// The normalization eta(z) = z sigma(z) with phi(eta(z)) = z^(-n), and numeric tracing of the
// level curve Re phi = A near the origin.

#include <climits>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stokes/adjoined_root.hpp"
#include "stokes/errors.hpp"
#include "stokes/exppoly.hpp"
#include "stokes/power_series.hpp"

namespace stokes {

using SigmaSeries = PowerSeries<AdjoinedRoot>;

/// eta_residual's value when phi(eta_N(z)) - z^(-n) vanishes identically.
inline constexpr int kInfiniteValuation = INT_MAX;

namespace detail {

inline void require_unramified_nonzero(const ExpPolynomial& phi, const char* op) {
  if (phi.is_zero()) throw DomainError(std::string(op) + ": phi must be nonzero");
  if (phi.is_ramified()) throw DomainError(std::string(op) + ": phi must be unramified (l = 1)");
}

// Root context for sigma(0): exact when a_n has a Gaussian-rational principal n-th root,
// otherwise rho with rho^n = a_n adjoined.
inline std::shared_ptr<const RootContext> sigma_root_context(const ExpPolynomial& phi) {
  auto n = static_cast<unsigned>(phi.pole_order());
  const ComplexRational& an = phi.leading_coefficient();
  auto ctx = std::make_shared<RootContext>();
  std::complex<double> a = an.to_complex();
  ctx->numeric = std::polar(std::pow(std::abs(a), 1.0 / n), std::arg(a) / n);
  if (auto c = exact_principal_root(an, n)) {
    ctx->degree = 1;
    ctx->radicand = *c;
    ctx->numeric = c->to_complex();
  } else {
    ctx->degree = n;
    ctx->radicand = an;
  }
  return ctx;
}

// z^m * s, truncated at s.order().
template <typename R>
PowerSeries<R> shifted(const PowerSeries<R>& s, std::size_t m) {
  std::vector<R> c(s.order() + 1, zero_like(s[0]));
  for (std::size_t k = 0; k + m <= s.order(); ++k) c[k + m] = s[k];
  return PowerSeries<R>(std::move(c), s.order());
}

// sum_j a_j z^(n-j) sigma^(n-j) - sigma^n, truncated at `order`.
inline SigmaSeries defining_residual(const ExpPolynomial& phi, const SigmaSeries& sigma, std::size_t order) {
  long n = phi.pole_order();
  const AdjoinedRoot& proto = sigma[0];
  SigmaSeries s = sigma.order() >= order ? sigma.truncated(order)
                                        : PowerSeries<AdjoinedRoot>(sigma.coeffs(), order);
  std::vector<SigmaSeries> powers{SigmaSeries::constant(one_like(proto), order)};
  for (long k = 1; k <= n; ++k) powers.push_back(powers.back() * s);
  SigmaSeries q = SigmaSeries::constant(zero_like(proto), order) - powers[static_cast<std::size_t>(n)];
  for (const auto& [j, a] : phi.terms()) {
    auto m = static_cast<std::size_t>(n - j);
    q = q + shifted(powers[m], m).scaled(scalar_like(proto, a));
  }
  return q;
}

}  // namespace detail

/// sigma with sigma^n = sum_j a_j z^(n-j) sigma^(n-j) mod z^(N+1), sigma(0) the principal n-th
/// root of a_n. Coefficients live in Q(i) or in Q(i)[rho], rho^n = a_n.
inline SigmaSeries sigma_solve(const ExpPolynomial& phi, std::size_t N) {
  detail::require_unramified_nonzero(phi, "sigma_solve");
  if (N < 1) throw DomainError("sigma_solve: N must be positive");
  auto ctx = detail::sigma_root_context(phi);
  long n = phi.pole_order();
  AdjoinedRoot s0 = AdjoinedRoot::rho(ctx);
  AdjoinedRoot s0_pow = one_like(s0);
  for (long k = 1; k < n; ++k) s0_pow = s0_pow * s0;
  // dF/dsigma at sigma(0) is -n s0^(n-1): every later coefficient solves a linear equation.
  AdjoinedRoot denom_inv = inverse(s0_pow * scalar_like(s0, ComplexRational(n)));
  std::vector<AdjoinedRoot> coeffs{s0};
  for (std::size_t k = 1; k <= N; ++k) {
    coeffs.push_back(zero_like(s0));
    SigmaSeries trial(coeffs, k);
    SigmaSeries q = detail::defining_residual(phi, trial, k);
    coeffs[k] = q[k] * denom_inv;
  }
  SigmaSeries sigma(std::move(coeffs), N);
  // The solution is unramified (a series in z, not z^(1/l)) exactly when every order cancels.
  if (detail::defining_residual(phi, sigma, N).valuation() <= N)
    throw std::logic_error("sigma_solve: residual does not vanish through order N, solution is not a power series");
  return sigma;
}

/// Valuation of phi(z sigma_N(z)) - z^(-n) as a Laurent series, or kInfiniteValuation.
inline int eta_residual(const ExpPolynomial& phi, std::size_t N) {
  SigmaSeries sigma = sigma_solve(phi, N);
  long n = phi.pole_order();
  // phi(z sigma) - z^-n = z^-n sigma^-n Q with Q the exact polynomial below; sigma is a unit.
  std::size_t full = static_cast<std::size_t>(n) * N + static_cast<std::size_t>(n);
  SigmaSeries q = detail::defining_residual(phi, sigma, full);
  std::size_t v = q.valuation();
  if (v > full) return kInfiniteValuation;
  return static_cast<int>(v) - static_cast<int>(n);
}

/// Coefficients of sigma evaluated with the chosen numeric root.
inline std::vector<std::complex<double>> numeric_coefficients(const SigmaSeries& s) {
  std::vector<std::complex<double>> out;
  for (const auto& c : s.coeffs()) out.push_back(c.to_complex());
  return out;
}

// ---------------------------------------------------------------------------------------------
// Level curves

struct Polyline {
  int branch_index = 0;
  std::vector<std::pair<double, double>> points;  // decreasing modulus
  std::optional<std::string> warning;              // set when tracing stopped early
};

namespace detail {

inline long double re_phi(const ExpPolynomial& phi, long double rho, long double theta) {
  long double sum = 0;
  for (const auto& [j, a] : phi.terms()) {
    long double ar = a.re().get_d(), ai = a.im().get_d();
    long double scale = std::pow(rho, -static_cast<long double>(j));
    long double ang = -static_cast<long double>(j) * theta;
    sum += scale * (ar * std::cos(ang) - ai * std::sin(ang));
  }
  return sum;
}

// d/dtheta Re phi(rho e^(i theta)).
inline long double re_phi_dtheta(const ExpPolynomial& phi, long double rho, long double theta) {
  long double sum = 0;
  for (const auto& [j, a] : phi.terms()) {
    long double ar = a.re().get_d(), ai = a.im().get_d();
    long double jj = static_cast<long double>(j);
    long double scale = std::pow(rho, -jj);
    long double ang = -jj * theta;
    sum += scale * jj * (ar * std::sin(ang) + ai * std::cos(ang));
  }
  return sum;
}

}  // namespace detail

/// The 2n branches of Re phi = A at the origin, one polyline per Stokes direction
/// (tau + pi/2 + k pi)/n, traced over `samples` geometrically decreasing moduli.
inline std::vector<Polyline> level_curve_branches(const ExpPolynomial& phi, const Rational& A, int samples) {
  detail::require_unramified_nonzero(phi, "level_curve_branches");
  if (sgn(A) <= 0) throw DomainError("level_curve_branches: A must be positive");
  if (samples < 2) samples = 2;
  const long n = phi.pole_order();
  const long double a = A.get_d();
  const long double pi = std::numbers::pi_v<long double>;
  std::complex<double> an = phi.leading_coefficient().to_complex();
  const long double tau = std::arg(an);
  const long double half = pi / (2 * n);
  const long double tol = 1e-9L * std::max<long double>(1, a);

  std::vector<long double> seeds;
  for (long k = 0; k < 2 * n; ++k) seeds.push_back((tau + pi / 2 + k * pi) / n);
  auto f = [&](long double rho, long double th) { return detail::re_phi(phi, rho, th) - a; };
  auto brackets_ok = [&](long double rho) {
    for (long double s : seeds)
      if (f(rho, s - half) * f(rho, s + half) >= 0) return false;
    return true;
  };

  long double total = 0;
  for (const auto& [j, c] : phi.terms()) total += std::abs(c.to_complex());
  const long double rho_min = std::pow(static_cast<long double>(n) * total * 1e-5L, 1.0L / n);
  long double rho0 = 1;
  while (!brackets_ok(rho0) && rho0 > rho_min) rho0 *= 0.97L;
  const long double ratio = std::pow(rho_min / rho0, 1.0L / (samples - 1));

  std::vector<Polyline> out;
  for (long k = 0; k < 2 * n; ++k) {
    Polyline line;
    line.branch_index = static_cast<int>(k);
    long double rho = rho0;
    for (int step = 0; step < samples; ++step, rho *= ratio) {
      long double lo = seeds[static_cast<std::size_t>(k)] - half;
      long double hi = seeds[static_cast<std::size_t>(k)] + half;
      long double flo = f(rho, lo);
      if (flo * f(rho, hi) >= 0) {
        line.warning = "no sign change at rho=" + std::to_string(static_cast<double>(rho));
        break;
      }
      for (int it = 0; it < 80 && hi - lo > 1e-15L; ++it) {
        long double mid = (lo + hi) / 2;
        long double fm = f(rho, mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      long double th = (lo + hi) / 2;
      for (int it = 0; it < 4; ++it) {
        long double d = detail::re_phi_dtheta(phi, rho, th);
        if (d == 0) break;
        long double next = th - f(rho, th) / d;
        if (next < lo - 1e-12L || next > hi + 1e-12L) break;
        th = next;
      }
      if (std::fabs(f(rho, th)) >= tol) {
        std::ostringstream msg;
        msg << "root solver did not converge at rho=" << static_cast<double>(rho);
        line.warning = msg.str();
        break;
      }
      line.points.emplace_back(static_cast<double>(rho * std::cos(th)), static_cast<double>(rho * std::sin(th)));
    }
    out.push_back(std::move(line));
  }
  return out;
}

inline std::string polylines_csv(const std::vector<Polyline>& lines) {
  std::ostringstream os;
  os.precision(17);
  os << "branch,x,y\n";
  for (const auto& l : lines)
    for (const auto& [x, y] : l.points) os << l.branch_index << ',' << x << ',' << y << '\n';
  return os.str();
}

/// One path per branch, viewBox [-1,1]^2, y axis pointing up.
inline std::string polylines_svg(const std::vector<Polyline>& lines) {
  std::ostringstream os;
  os.precision(9);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1 -1 2 2\" width=\"512\" height=\"512\">\n";
  for (const auto& l : lines) {
    if (l.points.empty()) continue;
    os << "  <path data-branch=\"" << l.branch_index << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.004\" d=\"";
    bool first = true;
    for (const auto& [x, y] : l.points) {
      os << (first ? "M" : " L") << x << ' ' << -y;
      first = false;
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace stokes
