#include <doctest.h>

#include <random>

#include "indexfiber/gaussian_rational.hpp"

using namespace indexfiber;

namespace {

GaussianRational random_gr(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-30, 30);
  std::uniform_int_distribution<int> den(1, 9);
  return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng))};
}

}  // namespace

TEST_CASE("parse_rational accepts integers and fractions") {
  CHECK(GaussianRational::parse_rational("7") == Rational(7));
  CHECK(GaussianRational::parse_rational("-3/4") == Rational(-3, 4));
  CHECK(GaussianRational::parse_rational("6/8") == Rational(3, 4));
  CHECK_THROWS_AS(GaussianRational::parse_rational("1.5"), std::invalid_argument);
  CHECK_THROWS_AS(GaussianRational::parse_rational("x"), std::invalid_argument);
  CHECK_THROWS(GaussianRational::parse_rational("1/0"));
}

TEST_CASE("formatting") {
  CHECK(GaussianRational(Rational(1, 2)).to_string() == "1/2");
  CHECK(GaussianRational(Rational(0), Rational(-2)).to_string() == "-2i");
  CHECK(GaussianRational(Rational(1), Rational(3, 2)).to_string() == "1+3/2i");
}

TEST_CASE("field axioms hold exactly on random elements") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_gr(rng);
    const auto b = random_gr(rng);
    const auto c = random_gr(rng);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a - a == GaussianRational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(a * a.conj() == GaussianRational(a.norm()));
  }
}

TEST_CASE("division by zero throws") {
  CHECK_THROWS_AS(GaussianRational(1) / GaussianRational(0), std::domain_error);
}

TEST_CASE("to_complex and ipow") {
  const GaussianRational z(Rational(1, 2), Rational(-1, 4));
  CHECK(z.to_complex() == Complex(0.5, -0.25));
  CHECK(ipow(GaussianRational(Rational(0), Rational(1)), 4) == GaussianRational(1));
  CHECK(ipow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(ipow(z, 0) == GaussianRational(1));
}
