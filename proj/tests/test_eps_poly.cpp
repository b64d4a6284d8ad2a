#include "crowdgame/eps_poly.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace crowdgame;

TEST_CASE("parse_rational forms") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational(" 7/10 ") == Rational(7, 10));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
  CHECK(to_string(parse_rational("4/8")) == "1/2");
  CHECK(to_string(Rational(3)) == "3");
}

TEST_CASE("polynomial basics") {
  EpsPolynomial p{Rational(1, 2), Rational(0), Rational(3)};
  CHECK(p.degree() == 2);
  CHECK(p.coeff(7) == 0);
  CHECK(p.to_string() == "1/2 + 3*eps^2");
  CHECK(EpsPolynomial{Rational(1), Rational(0), Rational(0)}.degree() == 0);
  CHECK(EpsPolynomial().is_zero());
  CHECK(EpsPolynomial().degree() == -1);
  CHECK(EpsPolynomial().valuation() == -1);
  CHECK(EpsPolynomial::monomial(Rational(-2), 3).valuation() == 3);
  CHECK(EpsPolynomial::monomial(Rational(-2), 3).to_string() == "-2*eps^3");
  CHECK(EpsPolynomial().to_string() == "0");
  CHECK(p.evaluate(Rational(1, 2)) == Rational(5, 4));
  CHECK_THROWS(EpsPolynomial::monomial(Rational(1), 1).divide_by_eps_power(2));
}

TEST_CASE("polynomial ring laws on random inputs") {
  oracle::Gen g(101);
  for (int i = 0; i < 300; ++i) {
    const auto a = g.poly(), b = g.poly(), c = g.poly();
    CHECK((a + b) - b == a);
    CHECK(a * b == b * a);
    CHECK(a * (b + c) == a * b + a * c);
    const Rational x = g.rational();
    CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
    CHECK((a - b).evaluate(x) == a.evaluate(x) - b.evaluate(x));
  }
}

TEST_CASE("rational function normalization") {
  // eps^2 / (2 eps) = eps / 2
  EpsRationalFunction f(EpsPolynomial::monomial(Rational(1), 2), EpsPolynomial::monomial(Rational(2), 1));
  CHECK(f.denominator() == EpsPolynomial::constant(1));
  CHECK(f.numerator() == EpsPolynomial::monomial(Rational(1, 2), 1));
  // the denominator's lowest coefficient is made positive
  EpsRationalFunction g(EpsPolynomial::constant(1), EpsPolynomial{Rational(-1), Rational(1)});
  CHECK(g.denominator().coeff(0) > 0);
  CHECK(g.sign_near_zero() == Sign::Negative);
  CHECK_THROWS_AS(EpsRationalFunction(EpsPolynomial::constant(1), EpsPolynomial()), std::exception);
  // pole at zero
  EpsRationalFunction pole(EpsPolynomial::constant(1), EpsPolynomial::monomial(Rational(1), 1));
  CHECK_THROWS_AS(pole.taylor(2), std::domain_error);
}

TEST_CASE("taylor series of 1/(1 - eps)") {
  EpsRationalFunction f(EpsPolynomial::constant(1), EpsPolynomial{Rational(1), Rational(-1)});
  const auto s = f.taylor(4);
  CHECK(s == std::vector<Rational>(5, Rational(1)));
  CHECK(series_to_string(s) == "[1, 1, 1, 1, 1]");
  CHECK(f.limit() == 1);
}

TEST_CASE("taylor coefficients reproduce values at small eps") {
  oracle::Gen g(7);
  for (int i = 0; i < 100; ++i) {
    auto num = g.poly(4);
    auto den = g.nonzero_poly(4);
    if (den.coeff(0) == 0) den += EpsPolynomial::constant(1);
    const EpsRationalFunction f(num, den);
    const auto s = f.taylor(6);
    const Rational eps(1, 1000000);
    Rational approx = 0, power = 1;
    for (const auto& c : s) {
      approx += c * power;
      power *= eps;
    }
    const Rational err = f.evaluate(eps) - approx;
    // the remainder is O(eps^7); coefficients are small
    CHECK(Rational(abs(err)).get_d() < 1e-30);
  }
}

TEST_CASE("compare_small_eps agrees with evaluation at tiny eps") {
  oracle::Gen g(33);
  const Rational tiny(1, 1000000000);
  for (int i = 0; i < 300; ++i) {
    auto mk = [&] {
      auto den = g.nonzero_poly(3);
      if (den.coeff(0) == 0) den += EpsPolynomial::constant(2);
      return EpsRationalFunction(g.poly(3), den);
    };
    const auto a = mk();
    // sometimes compare against a function that equals a
    const auto b = i % 5 == 0 ? EpsRationalFunction(a.numerator() * EpsPolynomial{Rational(2), Rational(3)},
                                                    a.denominator() * EpsPolynomial{Rational(2), Rational(3)})
                              : mk();
    const Sign s = compare_small_eps(a, b);
    const int at_tiny = sgn(a.evaluate(tiny) - b.evaluate(tiny));
    CHECK(static_cast<int>(s) == at_tiny);
    if (i % 5 == 0) CHECK(s == Sign::Zero);
    CHECK(compare_small_eps(b, a) == sign_of(-static_cast<int>(s)));
  }
}

TEST_CASE("rational function arithmetic") {
  oracle::Gen g(5);
  for (int i = 0; i < 100; ++i) {
    auto den1 = g.nonzero_poly(2), den2 = g.nonzero_poly(2);
    const EpsRationalFunction a(g.poly(3), den1), b(g.poly(3), den2);
    const Rational x(1, 7);
    if (den1.evaluate(x) == 0 || den2.evaluate(x) == 0) continue;
    CHECK((a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x));
    CHECK((a - b).evaluate(x) == a.evaluate(x) - b.evaluate(x));
    CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
    CHECK((a - a).is_zero());
  }
}
