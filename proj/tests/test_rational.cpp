#include <doctest.h>

#include "prefplan/rational.hpp"

using namespace prefplan;

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("1/2") == Rational(1, 2));
    CHECK(Rational::parse("2/4") == Rational(1, 2));
    CHECK(Rational::parse("0.5") == Rational(1, 2));
    CHECK(Rational::parse(".25") == Rational(1, 4));
    CHECK(Rational::parse("1") == Rational(1));
    CHECK(Rational::parse("0.1") == Rational(1, 10));
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
}

TEST_CASE("rational arithmetic is exact") {
    Rational third(1, 3);
    CHECK((third + third + third).is_one());
    CHECK(Rational(1, 10) + Rational(9, 10) == Rational(1));
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(9, 10) < Rational(1));
    CHECK(Rational(1, 2).str() == "1/2");
    CHECK(Rational(1).str() == "1/1");
}
