#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "hvr2/rational.hpp"

using hvr2::Rational;

TEST_CASE("rationals normalize to lowest terms with positive denominator") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(6, 3) == Rational(2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, -7).str() == "0");
  CHECK(Rational(-3, 9).str() == "-1/3");
}

TEST_CASE("zero denominator is rejected at construction") {
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(Rational(0, 0), std::invalid_argument);
}

TEST_CASE("arithmetic is exact and satisfies ring identities") {
  Rational a(1, 3), b(1, 6), c(-5, 4);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(-a == Rational(-1, 3));
  CHECK((a + b) * c == a * c + b * c);
  CHECK(a - a == Rational(0));
  CHECK((a / c) * c == a);

  // Repeated cancel-out must return exactly to zero (no drift possible).
  Rational s(0);
  for (long i = 1; i <= 60; ++i) {
    s += Rational(1, i);
  }
  for (long i = 1; i <= 60; ++i) {
    s -= Rational(1, i);
  }
  CHECK(s.is_zero());
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  Rational x(3, 2);
  CHECK_THROWS_AS(x /= Rational(0), std::domain_error);
}

TEST_CASE("string round trip and parse validation") {
  CHECK(Rational::from_string("3/2").str() == "3/2");
  CHECK(Rational::from_string("-4/6").str() == "-2/3");
  CHECK(Rational::from_string("7").str() == "7");
  CHECK(Rational::from_string("-12") == Rational(-12));
  CHECK(Rational::from_string("-0") == Rational(0));
  CHECK(Rational::from_string("0/5").str() == "0");
  CHECK_THROWS(Rational::from_string(""));
  CHECK_THROWS(Rational::from_string("a/b"));
  CHECK_THROWS(Rational::from_string("1/0"));
  CHECK_THROWS(Rational::from_string("1/2/3"));
  // str() -> from_string is the identity on a spread of values.
  for (long p = -7; p <= 7; ++p) {
    for (long q = 1; q <= 5; ++q) {
      Rational r(p, q);
      CHECK(Rational::from_string(r.str()) == r);
    }
  }
}

TEST_CASE("comparisons order by value") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(-1, 3));
  CHECK(Rational(2, 4) <= Rational(1, 2));
  CHECK(Rational(5) > Rational(9, 2));
  CHECK(Rational(0) >= Rational(-1, 1000000));
  CHECK(Rational(3, 7) != Rational(4, 7));
}

TEST_CASE("sign and zero predicates") {
  CHECK(Rational(0).is_zero());
  CHECK(!Rational(1, 9).is_zero());
  CHECK(Rational(-2, 5).sign() == -1);
  CHECK(Rational(0).sign() == 0);
  CHECK(Rational(7, 3).sign() == 1);
}

TEST_CASE("integer powers including negative exponents") {
  CHECK(Rational(2).pow(10) == Rational(1024));
  CHECK(Rational(2, 3).pow(-2) == Rational(9, 4));
  CHECK(Rational(5).pow(0) == Rational(1));
  CHECK(Rational(-1, 2).pow(3) == Rational(-1, 8));
  CHECK(Rational(0).pow(0) == Rational(1));
  CHECK_THROWS(Rational(0).pow(-1));
}

TEST_CASE("stream output matches str") {
  std::ostringstream os;
  os << Rational(-22, 8);
  CHECK(os.str() == "-11/4");
  CHECK(os.str() == Rational(-22, 8).str());
}

TEST_CASE("mixed integer scaling") {
  CHECK(3 * Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 2) * Rational(4) == Rational(2));
}
