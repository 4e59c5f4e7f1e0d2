#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "stokes/puiseux.hpp"

using namespace stokes;

namespace {

using Series = PowerSeries<ComplexRational>;

ComplexRational cr(long re, long im = 0) { return {Rational(re), Rational(im)}; }
ComplexRational q(long num, long den) { return ComplexRational(make_rational(num, den)); }

Series series(std::vector<ComplexRational> c, std::size_t order) { return Series(std::move(c), order); }

Series random_series(std::mt19937_64& rng, std::size_t order, bool unit) {
  std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
  std::vector<ComplexRational> c;
  for (std::size_t k = 0; k <= order; ++k)
    c.emplace_back(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng)));
  if (unit && c[0].is_zero()) c[0] = cr(1);
  return Series(c, order);
}

// Direct Laurent substitution in doubles: phi(z sigma(z)) - z^-n at a small real z.
std::complex<double> eta_defect(const ExpPolynomial& phi, const SigmaSeries& s, double z) {
  std::complex<double> sig = 0, p = 1;
  for (const auto& c : s.coeffs()) {
    sig += c.to_complex() * p;
    p *= z;
  }
  std::complex<double> eta = z * sig, val = 0;
  for (const auto& [j, a] : phi.terms()) val += a.to_complex() / std::pow(eta, static_cast<double>(j));
  return val - std::pow(z, -static_cast<double>(phi.pole_order()));
}

}  // namespace

TEST_CASE("series arithmetic examples") {
  auto a = series({cr(1), cr(1)}, 4), b = series({cr(1), cr(-1)}, 4);
  CHECK(series_arith(a, b, SeriesOp::mul) == series({cr(1), cr(0), cr(-1)}, 4));

  auto r = series_arith(series({cr(1), cr(1)}, 2), Series::constant(cr(1), 2), SeriesOp::nth_root, 2);
  CHECK(r == series({cr(1), q(1, 2), q(-1, 8)}, 2));
  CHECK(r * r == series({cr(1), cr(1)}, 2));

  auto geom = Series(std::vector<ComplexRational>(5, cr(1)), 4);
  auto z2 = series({cr(0), cr(0), cr(1)}, 4);
  CHECK(series_arith(geom, z2, SeriesOp::compose) == series({cr(1), cr(0), cr(1), cr(0), cr(1)}, 4));
}

TEST_CASE("series errors") {
  auto nonunit = series({cr(0), cr(1)}, 3);
  CHECK_THROWS_AS(series({cr(1)}, 3) / nonunit, DomainError);
  CHECK_THROWS_AS(nth_root(nonunit, 2, cr(0)), DomainError);
  CHECK_THROWS_AS(nth_root(series({cr(4)}, 3), 2, cr(3)), DomainError);
  CHECK_THROWS_AS(compose(series({cr(1), cr(1)}, 3), series({cr(1), cr(1)}, 3)), DomainError);
}

TEST_CASE("truncation orders") {
  auto a = series({cr(1), cr(2)}, 6), b = series({cr(3)}, 4);
  CHECK((a + b).order() == 4);
  CHECK((a * b).order() == 4);
  // inner valuation 2, outer order 2: valid to z^5
  auto outer = series({cr(1), cr(1), cr(1)}, 2), inner = series({cr(0), cr(0), cr(1)}, 8);
  CHECK(compose(outer, inner).order() == 5);
}

TEST_CASE("ring axioms up to truncation") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    auto a = random_series(rng, 6, false), b = random_series(rng, 6, false), c = random_series(rng, 6, false);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    auto u = random_series(rng, 6, true);
    CHECK((a / u) * u == a);
  }
}

TEST_CASE("nth_root inverts powers") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    auto s = random_series(rng, 5, true);
    for (unsigned n : {2u, 3u, 4u}) {
      Series base = s;
      Series p = Series::constant(cr(1), 5);
      for (unsigned k = 0; k < n; ++k) p = p * base;
      Series r = nth_root(p, n, s[0]);
      CHECK(r == s);
    }
  }
}

TEST_CASE("exact principal roots") {
  CHECK(*exact_principal_root(cr(4), 2) == cr(2));
  CHECK(*exact_principal_root(cr(-4), 2) == cr(0, 2));
  CHECK_FALSE(exact_principal_root(cr(-8), 3));  // 1 + sqrt(3) i
  // (-2i)^3 = 8i, but the principal cube root of 8i is 2 exp(i pi/6)
  CHECK_FALSE(exact_principal_root(cr(0, 8), 3));
  CHECK(*exact_principal_root(cr(8), 3) == cr(2));
  CHECK(*exact_principal_root(cr(-2, 2), 3) == cr(1, 1));
  CHECK(*exact_principal_root(cr(-3, 4), 2) == cr(1, 2));
  CHECK(*exact_principal_root(ComplexRational(make_rational(9, 16)), 2) == q(3, 4));
  CHECK_FALSE(exact_principal_root(cr(2), 2));
  CHECK_FALSE(exact_principal_root(cr(0, 1), 2));
  // principal: arg in (-pi/n, pi/n]
  CHECK(*exact_principal_root(cr(1), 4) == cr(1));
  CHECK(*exact_principal_root(cr(-1), 2) == cr(0, 1));
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> d(-6, 6), e(1, 5);
  for (int t = 0; t < 100; ++t) {
    ComplexRational c(make_rational(d(rng), e(rng)), make_rational(d(rng), e(rng)));
    if (c.is_zero()) continue;
    for (unsigned n : {2u, 3u, 4u}) {
      auto r = exact_principal_root(c.pow(n), n);
      double a = std::arg(c.to_complex());
      bool principal = a > -std::numbers::pi / n && a <= std::numbers::pi / n;
      if (n == 3 && !principal) continue;  // other cube roots of unity leave Q(i)
      REQUIRE(r);
      if (principal) CHECK(*r == c);
      CHECK(r->pow(n) == c.pow(n));
      double arg = std::arg(r->to_complex());
      CHECK(arg > -std::numbers::pi / n - 1e-12);
      CHECK(arg <= std::numbers::pi / n + 1e-12);
    }
  }
}

TEST_CASE("sigma examples") {
  auto s = sigma_solve(parse_exppoly("1/z"), 8);
  for (std::size_t k = 0; k <= 8; ++k) CHECK(s[k].to_complex() == std::complex<double>(k == 0 ? 1 : 0));

  s = sigma_solve(parse_exppoly("1/z^2 + 1/z"), 2);
  // sigma^2 = 1 + z sigma: 1 + z/2 + z^2/8
  REQUIRE(s[0].is_scalar());
  CHECK(s[0].coeffs()[0] == cr(1));
  CHECK(s[1].coeffs()[0] == q(1, 2));
  CHECK(s[2].coeffs()[0] == q(1, 8));

  s = sigma_solve(parse_exppoly("4/z^2"), 1);
  CHECK(s[0].coeffs()[0] == cr(2));
  CHECK(s[1].is_zero());
}

TEST_CASE("sigma back-substitution is exact through order N") {
  for (const char* text : {"1/z^2 + 1/z", "(3+4i)/z^2 - 2/z", "-8/z^3 + i/z^2 + 1/z", "2/z^2 + 1/z", "i/z^3 + 1/z",
                           "16/z^4 + (1-i)/z^3 + 1/z"}) {
    auto phi = parse_exppoly(text);
    auto s = sigma_solve(phi, 10);
    auto res = detail::defining_residual(phi, s, 10);
    for (std::size_t k = 0; k <= 10; ++k) CHECK(res[k].is_zero());
  }
}

TEST_CASE("adjoined root when a_n has no gaussian root") {
  auto phi = parse_exppoly("2/z^2 + 1/z");
  auto s = sigma_solve(phi, 6);
  CHECK(s[0].context()->degree == 2);
  CHECK(std::abs(s[0].to_complex() - std::sqrt(2.0)) < 1e-12);
  // the series is a genuine solution numerically
  CHECK(std::abs(eta_defect(phi, s, 1e-2)) < 1e-6);
}

TEST_CASE("eta residual examples") {
  CHECK(eta_residual(parse_exppoly("1/z"), 8) == kInfiniteValuation);
  CHECK(eta_residual(parse_exppoly("4/z^2"), 8) == kInfiniteValuation);
  CHECK(eta_residual(parse_exppoly("1/z^2 + 1/z"), 8) >= 7);
}

TEST_CASE("eta residual valuation grows with slope one") {
  // Single steps can jump by 2 when a sigma coefficient vanishes; the fitted slope is 1.
  for (const char* text : {"1/z^2 + 1/z", "1/z^3 + 1/z^2 + 1/z", "1/z^4 + 2/z^3 - 1/z"}) {
    auto phi = parse_exppoly(text);
    long n = phi.pole_order();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, m = 0;
    for (int N = 4; N <= 24; ++N) {
      int v = eta_residual(phi, static_cast<std::size_t>(N));
      CHECK(v >= N - n + 1);
      sx += N;
      sy += v;
      sxx += N * N;
      sxy += N * v;
      m += 1;
    }
    double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
    CHECK(slope == Catch::Approx(1.0).margin(0.1));
  }
}

TEST_CASE("eta residual agrees with direct substitution") {
  // |phi(eta_N(z)) - z^-n| ~ C |z|^v for small z.
  auto phi = parse_exppoly("1/z^3 + 1/z^2 + 1/z");
  auto s = sigma_solve(phi, 6);
  int v = eta_residual(phi, 6);
  double r1 = std::abs(eta_defect(phi, s, 0.04)), r2 = std::abs(eta_defect(phi, s, 0.02));
  CHECK(std::log2(r1 / r2) == Catch::Approx(v).margin(0.3));
}

TEST_CASE("level curve of 1/z is the circle x = A (x^2 + y^2)") {
  for (int a : {1, 2}) {
    auto lines = level_curve_branches(parse_exppoly("1/z"), Rational(a), 40);
    REQUIRE(lines.size() == 2);
    for (const auto& l : lines) {
      CHECK_FALSE(l.warning);
      REQUIRE(l.points.size() == 40);
      double prev = 1e9;
      for (auto [x, y] : l.points) {
        CHECK(std::fabs(x - a * (x * x + y * y)) < 1e-9);
        double m = std::hypot(x, y);
        CHECK(m < prev);
        prev = m;
      }
    }
  }
  // spot check of the closed form
  CHECK(0.5 / (0.5 * 0.5 + 0.5 * 0.5) == 1.0);
}

TEST_CASE("level curve of 1/z^2 has four branches tangent to the diagonals") {
  auto lines = level_curve_branches(parse_exppoly("1/z^2"), Rational(1), 60);
  REQUIRE(lines.size() == 4);
  std::vector<double> expect{std::numbers::pi / 4, 3 * std::numbers::pi / 4, 5 * std::numbers::pi / 4,
                             7 * std::numbers::pi / 4};
  for (std::size_t k = 0; k < 4; ++k) {
    auto [x, y] = lines[k].points.back();
    double th = std::atan2(y, x);
    if (th < 0) th += 2 * std::numbers::pi;
    CHECK(th == Catch::Approx(expect[k]).margin(1e-3));
    for (auto [px, py] : lines[k].points) {
      std::complex<double> z(px, py);
      CHECK(std::fabs((1.0 / (z * z)).real() - 1) < 1e-9);
    }
  }
}

TEST_CASE("traced points separate the sublevel set from its complement") {
  auto phi = parse_exppoly("(1+i)/z^3 - 2/z");
  NumericExpPolynomial f(phi);
  auto lines = level_curve_branches(phi, Rational(3), 30);
  REQUIRE(lines.size() == 6);
  for (const auto& l : lines)
    for (auto [x, y] : l.points) {
      std::complex<double> z(x, y);
      double r = std::abs(z);
      double below = f(z * std::polar(1.0, 1e-4 * r)).real() - 3, above = f(z * std::polar(1.0, -1e-4 * r)).real() - 3;
      CHECK(below * above < 0);
    }
}

TEST_CASE("polyline output formats") {
  auto lines = level_curve_branches(parse_exppoly("1/z"), Rational(1), 5);
  auto csv = polylines_csv(lines);
  CHECK(csv.rfind("branch,x,y\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
  auto svg = polylines_svg(lines);
  CHECK(svg.find("viewBox=\"-1 -1 2 2\"") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), 'M') == 2);
}

TEST_CASE("puiseux preconditions") {
  CHECK_THROWS_AS(sigma_solve(ExpPolynomial{}, 4), DomainError);
  CHECK_THROWS_AS(sigma_solve(parse_exppoly("1/z^(1/2)"), 4), DomainError);
  CHECK_THROWS_AS(level_curve_branches(parse_exppoly("1/z"), Rational(-1), 10), DomainError);
}
