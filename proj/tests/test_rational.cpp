#include <doctest.h>

#include "phcalc/errors.hpp"
#include "phcalc/rational.hpp"

using namespace phcalc;

TEST_SUITE("rational") {
  TEST_CASE("literals in fraction, decimal and exponent form") {
    CHECK(parse_rational("7") == 7);
    CHECK(parse_rational("-3/2") == Rational(-3, 2));
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("0.05") == Rational(1, 20));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational(" +2.5e1 ") == 25);
  }

  TEST_CASE("leading zeros are decimal") {
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("010/3") == Rational(10, 3));
    CHECK(parse_rational("08") == 8);
    CHECK(parse_rational("1/010") == Rational(1, 10));
  }

  TEST_CASE("malformed literals are rejected") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), ParseError);
  }

  TEST_CASE("printing is always num/den") {
    CHECK(to_string(Rational(3)) == "3/1");
    CHECK(to_string(Rational(-1, 4)) == "-1/4");
    CHECK(to_string(ratio(4, 8)) == "1/2");
  }

  TEST_CASE("doubles convert exactly") {
    for (double v : {0.1, -2.75, 1e-300, 123456789.125}) CHECK(to_double(from_double(v)) == v);
    CHECK(from_double(0.5) == Rational(1, 2));
  }

  TEST_CASE("floor, abs and the sup norm") {
    CHECK(floor(Rational(-1, 2)) == -1);
    CHECK(floor(Rational(7, 2)) == 3);
    CHECK(floor(Rational(4)) == 4);
    CHECK(abs(Rational(-5, 3)) == Rational(5, 3));
    CHECK(linf_norm({Rational(1, 2), Rational(-3, 4)}) == Rational(3, 4));
  }
}
