#include <catch_amalgamated.hpp>

#include <random>

#include "stokes/exppoly.hpp"

using namespace stokes;

namespace {

ComplexRational cr(long re, long im = 0) { return {Rational(re), Rational(im)}; }

ExpPolynomial random_phi(std::mt19937_64& rng, long max_pole, long l = 1) {
  std::uniform_int_distribution<long> num(-8, 8), den(1, 8), pole(1, max_pole);
  ExpPolynomial::Terms t;
  long n = pole(rng);
  for (long j = 1; j <= n; ++j) {
    ComplexRational c(make_rational(num(rng), den(rng)), make_rational(num(rng), den(rng)));
    if (j == n && c.is_zero()) c = cr(1);
    t[j] = c;
  }
  return ExpPolynomial(l, t);
}

}  // namespace

TEST_CASE("complex rational literals") {
  CHECK(parse_complex_rational("3") == cr(3));
  CHECK(parse_complex_rational("-1/2") == ComplexRational(make_rational(-1, 2), Rational(0)));
  CHECK(parse_complex_rational("(1+2i)") == cr(1, 2));
  CHECK(parse_complex_rational("2i") == cr(0, 2));
  CHECK(parse_complex_rational("1/2+3/4 i") == ComplexRational(make_rational(1, 2), make_rational(3, 4)));
  CHECK_THROWS_AS(parse_complex_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_complex_rational("1+"), ParseError);
}

TEST_CASE("gaussian arithmetic is exact") {
  ComplexRational a = cr(1, 2), b = cr(3, -1);
  CHECK(a * b == cr(5, 5));
  CHECK((a / b) * b == a);
  CHECK(a.conj() * a == ComplexRational(a.norm()));
  CHECK(ComplexRational::i().pow(4) == cr(1));
  CHECK_THROWS(a / ComplexRational{});
}

TEST_CASE("parse examples") {
  auto p = parse_exppoly("1/z");
  CHECK(p.ram_index() == 1);
  CHECK(p.terms() == ExpPolynomial::Terms{{1, cr(1)}});

  p = parse_exppoly("(1+2i)/z^3 - 4/z");
  CHECK(p.ram_index() == 1);
  CHECK(p.terms() == ExpPolynomial::Terms{{3, cr(1, 2)}, {1, cr(-4)}});

  p = parse_exppoly("1/z^(3/2)");
  CHECK(p.ram_index() == 2);
  CHECK(p.terms() == ExpPolynomial::Terms{{3, cr(1)}});

  CHECK(parse_exppoly("2i*z^(-2)") == ExpPolynomial::monomial(cr(0, 2), 2));
  CHECK(parse_exppoly("0").is_zero());
  CHECK(parse_exppoly("1/z - 1/z").is_zero());
}

TEST_CASE("parse errors carry a position") {
  try {
    parse_exppoly("1/z + 3");
    FAIL("constant term accepted");
  } catch (const ParseError& e) {
    CHECK(e.position() >= 4);
  }
  CHECK_THROWS_AS(parse_exppoly("1/z^"), ParseError);
  CHECK_THROWS_AS(parse_exppoly("z"), ParseError);
  CHECK_THROWS_AS(parse_exppoly("1/z^(-1)"), ParseError);
  CHECK_THROWS_AS(parse_exppoly("1/z^0"), ParseError);
  CHECK_THROWS_AS(parse_exppoly(""), ParseError);
}

TEST_CASE("print then parse is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto p = random_phi(rng, 6, 1 + trial % 3);
    auto q = parse_exppoly(p.to_string());
    CHECK(q == p);
    CHECK(parse_exppoly(q.to_string()).to_string() == q.to_string());
  }
  CHECK(parse_exppoly("(1+2i)/z^3 - 4/z").to_string() == "(1+2i)/z^3 - 4/z");
}

TEST_CASE("canonical form minimizes l") {
  auto p = ExpPolynomial(4, {{2, cr(1)}, {6, cr(3)}});
  CHECK(p.ram_index() == 2);
  CHECK(p.terms() == ExpPolynomial::Terms{{1, cr(1)}, {3, cr(3)}});
  CHECK(ExpPolynomial(3, {}).ram_index() == 1);
  CHECK(ExpPolynomial(p.ram_index(), p.terms()) == p);
}

TEST_CASE("katz slope") {
  CHECK(katz_slope(parse_exppoly("1/z")) == 1);
  CHECK(katz_slope(ExpPolynomial{}) == 0);
  CHECK(katz_slope(parse_exppoly("1/z^(3/2)")) == make_rational(3, 2));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    auto p = random_phi(rng, 5);
    for (long l : {2L, 3L, 6L}) CHECK(katz_slope(ramify(p, l)) == katz_slope(p) / l);
  }
}

TEST_CASE("positive proportionality") {
  auto l = positive_proportionality(parse_exppoly("2/z^2"), parse_exppoly("1/z^2"));
  REQUIRE(l);
  CHECK(*l == 2);
  CHECK_FALSE(positive_proportionality(parse_exppoly("1/z"), parse_exppoly("i/z")));
  // ratios 1/2 and 1 disagree
  CHECK_FALSE(positive_proportionality(parse_exppoly("1/z + 1/z^3"), parse_exppoly("2/z + 1/z^3")));
  CHECK(*positive_proportionality(ExpPolynomial{}, ExpPolynomial{}) == 1);
  CHECK_FALSE(positive_proportionality(parse_exppoly("1/z"), parse_exppoly("-1/z")));
}

TEST_CASE("proportionality is an equivalence") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> q(1, 9);
  for (int i = 0; i < 100; ++i) {
    auto p = random_phi(rng, 4, 1 + i % 2);
    Rational a = make_rational(q(rng), q(rng)), b = make_rational(q(rng), q(rng));
    auto pa = p.scaled(ComplexRational(a)), pab = pa.scaled(ComplexRational(b));
    CHECK(*positive_proportionality(p, p) == 1);
    CHECK(*positive_proportionality(pa, p) == a);
    CHECK(*positive_proportionality(p, pa) == 1 / a);
    CHECK(*positive_proportionality(pab, p) == a * b);
  }
}

TEST_CASE("ramify examples") {
  CHECK(ramify(parse_exppoly("1/z"), 2) == parse_exppoly("1/z^(1/2)"));
  CHECK(ramify(parse_exppoly("1/z^(1/2)"), 2) == parse_exppoly("1/z^(1/4)"));
  CHECK(ramify(parse_exppoly("1/z^2"), 2) == parse_exppoly("1/z"));
  CHECK_THROWS_AS(ramify(parse_exppoly("1/z"), 0), DomainError);
}

TEST_CASE("twist_add") {
  CHECK(twist_add(parse_exppoly("1/z"), parse_exppoly("1/z^3")) == parse_exppoly("1/z + 1/z^3"));
  CHECK(twist_add(parse_exppoly("1/z"), parse_exppoly("-1/z")).is_zero());
  auto t = twist_add(parse_exppoly("1/z^(1/2)"), parse_exppoly("1/z"));
  CHECK(t.ram_index() == 2);
  CHECK(t.terms() == ExpPolynomial::Terms{{1, cr(1)}, {2, cr(1)}});

  std::mt19937_64 rng(9);
  for (int i = 0; i < 60; ++i) {
    auto a = random_phi(rng, 4, 1 + i % 2), b = random_phi(rng, 4, 1 + i % 3), c = random_phi(rng, 3);
    CHECK(twist_add(a, b) == twist_add(b, a));
    CHECK(twist_add(twist_add(a, b), c) == twist_add(a, twist_add(b, c)));
    CHECK(twist_add(a, ExpPolynomial{}) == a);
  }
}

TEST_CASE("numeric evaluation matches exact terms") {
  auto p = parse_exppoly("(1+2i)/z^3 - 4/z");
  NumericExpPolynomial f(p);
  std::complex<double> z(0.3, -0.2);
  std::complex<double> expect = std::complex<double>(1, 2) / (z * z * z) - 4.0 / z;
  CHECK(std::abs(f(z) - expect) < 1e-9 * std::abs(expect));

  // z^(-1/2) on the cut plane: arg z in [0, 2pi)
  NumericExpPolynomial g(parse_exppoly("1/z^(1/2)"));
  auto w = g(std::polar(4.0, 3.0 * std::numbers::pi / 2));
  CHECK(std::abs(w - std::polar(0.5, -3.0 * std::numbers::pi / 4)) < 1e-12);
}
