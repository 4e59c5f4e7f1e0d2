#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "stokes/growth.hpp"

using namespace stokes;

namespace {

const double pi = std::numbers::pi;

ComplexRational cr(long re, long im = 0) { return {Rational(re), Rational(im)}; }
AngleExpr pis(long num, long den) { return AngleExpr::pi_times(make_rational(num, den)); }

ExpPolynomial random_phi(std::mt19937_64& rng, long max_pole, long l = 1) {
  std::uniform_int_distribution<long> num(-8, 8), den(1, 8), pole(1, max_pole);
  ExpPolynomial::Terms t;
  long n = pole(rng);
  for (long j = 1; j <= n; ++j) {
    ComplexRational c(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng)));
    if (j == n && c.is_zero()) c = cr(1, 1);
    t[j] = c;
  }
  return ExpPolynomial(l, t);
}

// Re of the leading term along theta on the cut plane arg in [0, 2pi): negative means decay.
double leading_re(const ExpPolynomial& phi, double theta) {
  double e = static_cast<double>(phi.pole_order()) / static_cast<double>(phi.ram_index());
  return (phi.leading_coefficient().to_complex() * std::polar(1.0, -e * theta)).real();
}

bool same_direction(const AngleExpr& a, const AngleExpr& b) {
  AngleComparator cmp;
  return cmp.equal(a, b);
}

void check_against_grid(const ExpPolynomial& phi) {
  AngleComparator cmp;
  ArcSet arcs = support_arcs(phi);
  double scale = std::abs(phi.leading_coefficient().to_complex());
  for (long m = 0; m < 360; ++m) {
    AngleExpr theta = pis(2 * m + 1, 360);
    double s = leading_re(phi, theta.radians());
    if (std::fabs(s) < 1e-9 * scale) continue;
    CHECK(arcs.contains(theta, cmp) == (s < 0));
  }
}

void check_sound(const ExpPolynomial& p1, const ExpPolynomial& p2, const Witness& w) {
  CHECK(classify_direction(w.tempered_fn, w.direction) == DirectionClass::Decay);
  CHECK(classify_direction(w.growth_fn, w.direction) == DirectionClass::Growth);
  if (!w.via_psi) {
    CHECK(w.tempered_fn == (w.tempered_side == 1 ? p1 : p2));
    CHECK(w.growth_fn == (w.tempered_side == 1 ? p2 : p1));
  }
}

}  // namespace

TEST_CASE("support arc examples") {
  auto a = support_arcs(parse_exppoly("1/z"));
  REQUIRE(a.size() == 1);
  CHECK(same_direction(a.arcs()[0].start, pis(1, 2)));
  CHECK(same_direction(a.arcs()[0].end, pis(3, 2)));

  a = support_arcs(parse_exppoly("1/z^2"));
  REQUIRE(a.size() == 2);
  CHECK(same_direction(a.arcs()[0].start, pis(1, 4)));
  CHECK(same_direction(a.arcs()[0].end, pis(3, 4)));
  CHECK(same_direction(a.arcs()[1].start, pis(5, 4)));
  CHECK(same_direction(a.arcs()[1].end, pis(7, 4)));

  a = support_arcs(parse_exppoly("i/z"));
  REQUIRE(a.size() == 1);
  CHECK(same_direction(a.arcs()[0].start, pis(1, 1)));
  CHECK(same_direction(a.arcs()[0].end, pis(2, 1)));

  for (const char* t : {"1/z", "1/z^2", "i/z", "(1+2i)/z^3 - 4/z", "-3/z^5 + 1/z"}) check_against_grid(parse_exppoly(t));
  CHECK_THROWS_AS(support_arcs(ExpPolynomial{}), DomainError);
}

TEST_CASE("arc structure for random unramified phi") {
  std::mt19937_64 rng(17);
  AngleComparator cmp;
  for (int t = 0; t < 60; ++t) {
    auto phi = random_phi(rng, 6);
    long n = phi.pole_order();
    auto arcs = support_arcs(phi);
    REQUIRE(arcs.size() == static_cast<std::size_t>(n));
    for (const auto& arc : arcs.arcs()) CHECK(*arc.exact_length_over_pi() == make_rational(1, n));
    auto st = stokes_directions(phi);
    REQUIRE(st.size() == static_cast<std::size_t>(2 * n));
    for (std::size_t i = 0; i + 1 < st.size(); ++i) CHECK(cmp.less(st[i], st[i + 1]));
    for (const auto& d : st) CHECK(arcs.is_endpoint(d, cmp));
    for (const auto& arc : arcs.arcs()) {
      CHECK(std::any_of(st.begin(), st.end(), [&](const AngleExpr& d) { return cmp.equal(d, arc.start); }));
      CHECK(std::any_of(st.begin(), st.end(), [&](const AngleExpr& d) { return cmp.equal(d, arc.end); }));
    }
    if (t < 20) check_against_grid(phi);
  }
}

TEST_CASE("negation complements and positive scaling preserves the arcs") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<long> q(1, 9);
  AngleComparator cmp;
  for (int t = 0; t < 40; ++t) {
    auto phi = random_phi(rng, 5);
    auto arcs = support_arcs(phi), neg = support_arcs(-phi);
    auto scaled = support_arcs(phi.scaled(ComplexRational(make_rational(q(rng), q(rng)))));
    REQUIRE(scaled.size() == arcs.size());
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      CHECK(exactly_equal(scaled.arcs()[i].start, arcs.arcs()[i].start));
      CHECK(exactly_equal(scaled.arcs()[i].end, arcs.arcs()[i].end));
    }
    for (long m = 0; m < 90; ++m) {
      AngleExpr theta = pis(2 * m + 1, 90);
      if (arcs.is_endpoint(theta, cmp)) continue;
      CHECK(neg.contains(theta, cmp) == !arcs.closure_contains(theta, cmp));
    }
  }
}

TEST_CASE("ramified arcs live on the cut plane") {
  auto phi = parse_exppoly("1/z^(1/2)");
  // Re(z^(-1/2)) = r^(-1/2) cos(theta/2) < 0 for theta in (pi, 2pi)
  auto arcs = support_arcs(phi);
  REQUIRE(arcs.size() == 1);
  CHECK(same_direction(arcs.arcs()[0].start, pis(1, 1)));
  CHECK(same_direction(arcs.arcs()[0].end, pis(0, 1)));
  auto st = stokes_directions(phi);
  REQUIRE(st.size() == 1);
  CHECK(same_direction(st[0], pis(1, 1)));

  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) check_against_grid(random_phi(rng, 5, 2 + t % 3));
}

TEST_CASE("stokes direction examples") {
  auto check = [](const char* text, std::vector<AngleExpr> expect) {
    auto st = stokes_directions(parse_exppoly(text));
    REQUIRE(st.size() == expect.size());
    for (std::size_t i = 0; i < st.size(); ++i) CHECK(same_direction(st[i], expect[i]));
  };
  check("1/z", {pis(1, 2), pis(3, 2)});
  check("1/z^2", {pis(1, 4), pis(3, 4), pis(5, 4), pis(7, 4)});
  check("-1/z", {pis(1, 2), pis(3, 2)});
}

TEST_CASE("classify_direction examples") {
  auto phi = parse_exppoly("1/z");
  CHECK(classify_direction(phi, pis(1, 1)) == DirectionClass::Decay);
  CHECK(classify_direction(phi, pis(0, 1)) == DirectionClass::Growth);
  CHECK(classify_direction(phi, pis(1, 2)) == DirectionClass::Oscillatory);

  // a direction a hair off an endpoint cannot be separated at 512 bits
  Rational eps = Rational(1) / Rational(mpz_class(1) << 400);
  AngleComparator cmp;
  auto near = AngleExpr(ComplexRational(eps, Rational(1)), Rational(0), 1);
  CHECK(classify_direction(phi, near, cmp) == DirectionClass::Oscillatory);
  CHECK(cmp.flagged());
}

TEST_CASE("sector verdict examples") {
  auto phi = parse_exppoly("1/z");
  CHECK(sector_verdict(phi, Sector{pis(1, 1), make_rational(1, 4), Rational(1)}) == Verdict::Tempered);
  CHECK(sector_verdict(phi, Sector{pis(0, 1), make_rational(1, 4), Rational(1)}) == Verdict::NotTempered);
  CHECK(sector_verdict(phi, Sector{pis(1, 1), make_rational(1, 2), Rational(1)}) == Verdict::Boundary);
  CHECK_THROWS_AS(Sector(pis(0, 1), Rational(0), Rational(1)), DomainError);
  CHECK_THROWS_AS(sector_verdict(parse_exppoly("1/z^(1/2)"), Sector{pis(0, 1), make_rational(1, 4), Rational(1)}),
                  DomainError);
  CHECK(sector_verdict(parse_exppoly("1/z^(1/2)"), Sector{pis(3, 2), make_rational(1, 8), Rational(1)}) ==
        Verdict::Tempered);
}

TEST_CASE("witness examples") {
  auto p1 = parse_exppoly("1/z"), p2 = parse_exppoly("i/z");
  auto w = distinguishing_witness(p1, p2);
  REQUIRE(w);
  CHECK(same_direction(w->direction, pis(3, 4)));
  CHECK(w->tempered_side == 1);
  check_sound(p1, p2, *w);

  CHECK_FALSE(distinguishing_witness(parse_exppoly("2/z^2"), parse_exppoly("1/z^2")));

  auto q1 = parse_exppoly("1/z^2 + 1/z"), q2 = parse_exppoly("1/z^2 + 2/z");
  w = distinguishing_witness(q1, q2);
  REQUIRE(w);
  CHECK(w->via_psi);
  // grid pi/4 + j pi/2
  bool on_grid = false;
  for (long j = 0; j < 4; ++j) on_grid |= same_direction(w->direction, pis(1 + 2 * j, 4));
  CHECK(on_grid);
  check_sound(q1, q2, *w);
  // psi21 = 1/z: side 1 exactly when the direction is in I_(1/z)
  AngleComparator cmp;
  bool in_i = support_arcs(parse_exppoly("1/z")).contains(w->direction, cmp);
  CHECK((w->tempered_side == 1) == !in_i);
}

TEST_CASE("witness soundness on random pairs") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> q(1, 6);
  for (int t = 0; t < 80; ++t) {
    auto p1 = random_phi(rng, 4);
    ExpPolynomial p2;
    switch (t % 3) {
      case 0: p2 = p1.scaled(ComplexRational(make_rational(q(rng), q(rng)))); break;
      case 1: {  // same leading term, different tail
        auto tail = random_phi(rng, std::max<long>(1, p1.pole_order() - 1));
        p2 = p1 + (tail.pole_order() < p1.pole_order() ? tail : ExpPolynomial::monomial(cr(1), 1));
        if (p2.pole_order() != p1.pole_order()) p2 = p1 + ExpPolynomial::monomial(cr(0, 1), 1);
        break;
      }
      default: p2 = random_phi(rng, 4);
    }
    auto w = distinguishing_witness(p1, p2);
    CHECK(w.has_value() == !positive_proportionality(p1, p2).has_value());
    if (!w) continue;
    check_sound(p1, p2, *w);
    auto back = distinguishing_witness(p2, p1);
    REQUIRE(back);
    CHECK(back->tempered_side == 3 - w->tempered_side);
    CHECK(same_direction(back->direction, w->direction));
  }
}

TEST_CASE("witness inside a sector") {
  auto p1 = parse_exppoly("1/z"), p2 = parse_exppoly("i/z");
  Sector s{pis(3, 2), make_rational(3, 5), Rational(1)};
  auto w = distinguishing_witness(p1, p2, s);
  REQUIRE(w);
  AngleComparator cmp;
  CHECK(ArcSet::in_open(Arc{s.lower(), s.upper()}, w->direction, cmp));
  check_sound(p1, p2, *w);
  // amplitude 2 eps must exceed 2pi / max(n1, n2, 2) = pi
  CHECK_THROWS_AS(distinguishing_witness(p1, p2, Sector{pis(1, 1), make_rational(1, 2), Rational(1)}),
                  HypothesisError);
}

TEST_CASE("ramified witnesses") {
  auto p1 = parse_exppoly("1/z^(1/2)"), p2 = parse_exppoly("1/z");
  auto w = distinguishing_witness(p1, p2);
  REQUIRE(w);
  check_sound(p1, p2, *w);
  double d = w->direction.radians();
  CHECK(d > 0);
  CHECK(d < 2 * pi);
}

TEST_CASE("twisted witness examples") {
  auto w = twisted_witness(parse_exppoly("1/z"), parse_exppoly("2/z"), parse_exppoly("1/z^3"), 1);
  REQUIRE(w);
  check_sound(parse_exppoly("1/z + 1/z^3"), parse_exppoly("2/z + 1/z^3"), *w);

  CHECK_FALSE(twisted_witness(parse_exppoly("1/z"), parse_exppoly("1/z"), parse_exppoly("1/z^3"), 1));

  w = twisted_witness(parse_exppoly("1/z"), parse_exppoly("1/z^2"), parse_exppoly("1/z^4"), 2);
  REQUIRE(w);
  CHECK(classify_direction(w->tempered_fn, w->direction) == DirectionClass::Decay);
  CHECK(classify_direction(w->growth_fn, w->direction) == DirectionClass::Growth);

  CHECK_THROWS_AS(twisted_witness(parse_exppoly("1/z"), parse_exppoly("2/z"), parse_exppoly("1/z^2"), 1),
                  HypothesisError);
}

TEST_CASE("concentrated regions") {
  // 1/z along pi/2: eta = id, so the region is U1 itself
  auto r = concentrated_region(parse_exppoly("1/z"), pis(1, 2));
  RegionSpec as_region = r;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  int agree = 0, total = 0;
  for (int i = 0; i < 4000; ++i) {
    cplx z(u(rng), u(rng));
    if (std::abs(z) > 1.0) continue;
    ++total;
    agree += contains(as_region, z) == detail::in_u1(z);
  }
  CHECK(agree == total);

  // 1/z^2 along pi/4: the square-root preimage of U1
  auto r2 = concentrated_region(parse_exppoly("1/z^2"), pis(1, 4));
  RegionSpec spec2 = r2;
  for (int i = 0; i < 2000; ++i) {
    cplx z(u(rng) * 0.8, u(rng) * 0.8);
    bool expect = std::fabs(std::arg(z) - pi / 4) < pi / 4 && detail::in_u1(z * z);
    CHECK(contains(spec2, z) == expect);
  }

  CHECK_THROWS_AS(concentrated_region(parse_exppoly("1/z"), pis(1, 3)), DomainError);
  auto r3 = concentrated_region(parse_exppoly("1/z^2 + 1/z"), stokes_directions(parse_exppoly("1/z^2 + 1/z"))[0]);
  CHECK(r3.n == 2);
  CHECK(r3.w_radius > 0);
}

TEST_CASE("region geometry") {
  SectorRegion s{pi, pi / 4, 0.5};
  CHECK(contains(RegionSpec{s}, std::polar(0.3, pi + 0.1)));
  CHECK_FALSE(contains(RegionSpec{s}, std::polar(0.3, pi / 2)));
  CHECK(boundary_distance(RegionSpec{s}, std::polar(0.3, pi)) == Catch::Approx(0.2));

  BallComplementRegion b{cplx(1), 1, 1};
  CHECK_FALSE(contains(RegionSpec{b}, cplx(0.5, 0)));
  CHECK(contains(RegionSpec{b}, cplx(-0.5, 0)));
  CHECK(boundary_distance(RegionSpec{b}, cplx(-0.25, 0)) == Catch::Approx(0.25));

  CHECK(contains(RegionSpec{ParabolicU1{}}, cplx(0, 0.5)));
  CHECK_FALSE(contains(RegionSpec{ParabolicU1{}}, cplx(0.5, 0.4)));
  CHECK(contains(RegionSpec{ParabolicU2{}}, cplx(0, -0.5)));
  CHECK(boundary_distance(RegionSpec{ParabolicU1{}}, cplx(0, 0.5)) == Catch::Approx(0.5 * std::sqrt(2.0) - 0.5));

  PolygonRegion sq{{cplx(0, 0), cplx(1, 0), cplx(1, 1), cplx(0, 1)}};
  CHECK(contains(RegionSpec{sq}, cplx(0.5, 0.5)));
  CHECK(boundary_distance(RegionSpec{sq}, cplx(0.25, 0.5)) == Catch::Approx(0.25));

  // marched distance is a lower bound within the safety factor
  SublevelRegion sub{NumericExpPolynomial(parse_exppoly("1/z")), 1, 1};
  cplx z(-0.25, 0);
  double d = boundary_distance(RegionSpec{sub}, z);
  CHECK(d <= 0.25);
  CHECK(d >= 0.85 * 0.25);
}

TEST_CASE("ball complement equals the sublevel set of c/z") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (auto [c, A] : {std::pair{cplx(1), 0.5}, std::pair{cplx(1), 2.0}, std::pair{cplx(0, 1), 1.0}}) {
    BallComplementRegion b{c, A, 1};
    ExpPolynomial phi = c.imag() == 0 ? parse_exppoly("1/z") : parse_exppoly("i/z");
    SublevelRegion s{NumericExpPolynomial(phi), A, 1};
    for (int i = 0; i < 3000; ++i) {
      cplx z(u(rng), u(rng));
      CHECK(contains(RegionSpec{b}, z) == contains(RegionSpec{s}, z));
    }
  }
}
