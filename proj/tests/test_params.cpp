#include <doctest.h>

#include <cmath>

#include "bohrgap/errors.hpp"
#include "bohrgap/params.hpp"
#include "bohrgap/rational.hpp"

using namespace bohrgap;

TEST_CASE("Rational arithmetic stays reduced") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(3, -6) == Rational(-1, 2));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(1, 4) - Rational(1, 2) == Rational(-1, 4));
  CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(Rational(-1, 3) < Rational(0));
  CHECK(Rational(7, 24).to_string() == "7/24");
  CHECK(Rational(5).to_string() == "5");
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
}

TEST_CASE("Rational parsing") {
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-2/6") == Rational(-1, 3));
  CHECK(Rational::parse("0.75") == Rational(3, 4));
  CHECK(Rational::parse(" 1 ") == Rational(1));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK_THROWS(Rational::parse("1/0"));
}

TEST_CASE("Rational overflow is reported") {
  const Rational big(std::int64_t{1} << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("params parse, defaults and derived exponents") {
  const auto p = ConstructionParams::parse(2, "1,1");
  CHECK(p.X == doctest::Approx(1.5));
  CHECK(p.x_is_default);
  CHECK(*p.default_x_exact() == Rational(3, 2));
  CHECK(*p.key_exponent_exact() == Rational(1));

  const auto q = ConstructionParams::parse(3, "3/4,1,1");
  CHECK(*q.rho_sum_exact() == Rational(11, 4));
  CHECK(*q.default_x_exact() == Rational(11, 6));
  CHECK(*q.key_exponent_exact() == Rational(7, 4));
  CHECK(q.rho_string() == "3/4,1,1");

  const auto x = ConstructionParams::parse(2, "1,1", 2.0);
  CHECK_FALSE(x.x_is_default);
  CHECK(x.X == 2.0);
}

TEST_CASE("params validation") {
  CHECK_THROWS_AS(ConstructionParams::parse(1, "1"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "1"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "1,1/2"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "1/2,1/2"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "-1/2,1"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "x,1"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "1/0,1"), InvalidParameter);
  CHECK_THROWS_AS(ConstructionParams::parse(2, "1,1", -1.0), InvalidParameter);
}

TEST_CASE("block sizes are exact floors of 2^{rho L}") {
  const auto p = ConstructionParams::parse(3, "1/2,3/4,1");
  for (int L = 1; L <= 12; ++L) {
    CHECK(p.block_size(3, L) == (std::size_t{1} << L));
    CHECK(p.block_size(1, L) == static_cast<std::size_t>(std::floor(std::exp2(L / 2.0) + 1e-12)));
    // floor(2^{3L/4}) by integer search: largest k with k^4 <= 2^{3L}
    std::size_t k = 1;
    while ((k + 1) * (k + 1) * (k + 1) * (k + 1) <= (std::size_t{1} << (3 * L))) ++k;
    CHECK(p.block_size(2, L) == k);
  }
  const auto d = ConstructionParams::make(2, std::vector<double>{0.5, 1.0});
  CHECK(d.block_size(1, 4) == 4);
  CHECK(d.block_sizes(2) == std::vector<std::size_t>{2, 4});
}
