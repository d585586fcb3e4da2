#include "incmeter/rational.hpp"

#include <stdexcept>

#include "catch_amalgamated.hpp"

using incmeter::Rational;

TEST_CASE("rational reduces and normalizes sign") {
  CHECK(Rational(2, 8) == Rational(1, 4));
  CHECK(Rational(0, 7) == Rational(0, 1));
  CHECK(Rational(-2, -8) == Rational(1, 4));
  CHECK(Rational(2, -8) == Rational(-1, 4));
  CHECK(Rational(6, 3).num() == 2);
  CHECK(Rational(6, 3).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("rational ordering") {
  CHECK(Rational(1, 4) < Rational(1, 3));
  CHECK(Rational(1, 3) <= Rational(1, 3));
  CHECK_FALSE(Rational(1, 2) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(0, 1));
  CHECK(Rational(0, 1) <= Rational(1, 1));
}

TEST_CASE("decimal rendering: ten significant digits, half-up, trimmed") {
  CHECK(Rational(0, 1).to_decimal() == "0");
  CHECK(Rational(1, 1).to_decimal() == "1");
  CHECK(Rational(1, 2).to_decimal() == "0.5");
  CHECK(Rational(1, 4).to_decimal() == "0.25");
  CHECK(Rational(3, 4).to_decimal() == "0.75");
  CHECK(Rational(5, 8).to_decimal() == "0.625");
  CHECK(Rational(1, 3).to_decimal() == "0.3333333333");
  CHECK(Rational(2, 3).to_decimal() == "0.6666666667");
  CHECK(Rational(1, 6).to_decimal() == "0.1666666667");
  CHECK(Rational(1, 7).to_decimal() == "0.1428571429");
  CHECK(Rational(1, 9).to_decimal() == "0.1111111111");
  CHECK(Rational(8, 9).to_decimal() == "0.8888888889");
  CHECK(Rational(1, 12).to_decimal() == "0.08333333333");
  CHECK(Rational(1, 11).to_decimal() == "0.09090909091");
  CHECK(Rational(999999999, 1000000000).to_decimal() == "0.999999999");
}

TEST_CASE("decimal rendering edge cases") {
  CHECK(Rational(-1, 4).to_decimal() == "-0.25");
  CHECK(Rational(5, 2).to_decimal() == "2.5");
  CHECK(Rational(10, 1).to_decimal() == "10");
  CHECK(Rational(1, 1000).to_decimal() == "0.001");
  // all-nines carry propagates into a new leading digit
  CHECK(Rational(9999999999999, 10000000000000).to_decimal() == "1");
  CHECK(Rational(1, 8).to_decimal(2) == "0.13");
  CHECK(Rational(1, 3).to_decimal(3) == "0.333");
  CHECK_THROWS_AS(Rational(1, 3).to_decimal(0), std::invalid_argument);
}
