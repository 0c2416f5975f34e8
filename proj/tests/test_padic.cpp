#include <doctest.h>

#include <random>

#include "gifsdim/errors.hpp"
#include "gifsdim/padic.hpp"

using namespace gifsdim;

namespace {

const std::vector<BigInt> kLambdaPoly{-2, -3, 1};  // x^2 - 3x - 2

std::vector<std::uint32_t> digits_of(const PadicNumber& x) { return {x.digits().begin(), x.digits().end()}; }

}  // namespace

TEST_CASE("from_rational expansions") {
  auto four = PadicNumber::from_rational(4, 1, 2, 5);
  CHECK(four.valuation() == 2);
  CHECK(digits_of(four) == std::vector<std::uint32_t>{1, 0, 0, 0, 0});

  auto minus_one = PadicNumber::from_rational(-1, 1, 2, 5);
  CHECK(minus_one.valuation() == 0);
  CHECK(minus_one.to_digit_string() == "11111");
  CHECK((minus_one + PadicNumber::from_integer(1, 2, 5)).is_zero());

  auto third = PadicNumber::from_rational(1, 3, 2, 6);
  CHECK(third.to_digit_string() == "110101");
  CHECK((third * PadicNumber::from_integer(3, 2, 6)).agrees_with(PadicNumber::from_integer(1, 2, 6), 6));

  CHECK(PadicNumber::from_rational(5, 12, 3, 8).valuation() == -1);
  CHECK_THROWS_AS(PadicNumber::from_rational(1, 0, 2, 5), std::invalid_argument);
  CHECK_THROWS_AS(PadicNumber::from_rational(1, 1, 4, 5), std::invalid_argument);
}

TEST_CASE("arithmetic identities") {
  auto x = PadicNumber::from_rational(7, 5, 3, 20);
  auto z = x + (-x);
  CHECK(z.is_zero());
  CHECK(z.norm() == 0);
  CHECK(PadicNumber::from_rational(1, 4, 2, 10).norm() == 4);
  CHECK(PadicNumber::zero(5).norm() == 0);
  CHECK_THROWS_AS(PadicNumber::zero(2).inverse(), std::domain_error);
  CHECK_THROWS_AS(x + PadicNumber::from_integer(1, 5, 4), std::invalid_argument);
}

TEST_CASE("digit strings parse back") {
  auto x = PadicNumber::parse("01101", 2);
  CHECK(x.valuation() == 1);
  CHECK(x.to_digit_string() == "01101");
  auto y = PadicNumber::parse("v=-2 1201", 3);
  CHECK(y.valuation() == -2);
  CHECK(y.to_digit_string() == "v=-2 1201");
  CHECK_THROWS_AS(PadicNumber::parse("012", 2), ParseError);
  CHECK_THROWS_AS(PadicNumber::parse("", 2), ParseError);
}

TEST_CASE("Hensel roots of x^2 - 3x - 2 in Q_2") {
  auto lambda = hensel_lift(kLambdaPoly, 2, 0, 5);
  CHECK(lambda.to_digit_string() == "01101");
  CHECK(lambda.norm() == Rational(1, 2));
  CHECK(cantor_embed(lambda, 2) == doctest::Approx(0.40625).epsilon(1e-15));

  auto r0 = hensel_lift(kLambdaPoly, 2, 0, 64);
  auto r1 = hensel_lift(kLambdaPoly, 2, 1, 64);
  CHECK(r1.norm() == 1);
  CHECK((r0 * r1).agrees_with(PadicNumber::from_integer(-2, 2, 64), 64));
  CHECK((r0 + r1).agrees_with(PadicNumber::from_integer(3, 2, 64), 64));

  const std::vector<BigInt> x2_17{-17, 0, 1};
  CHECK_THROWS_AS(hensel_lift(x2_17, 2, 1, 5), HypothesisError);
  CHECK_THROWS_AS(hensel_lift(kLambdaPoly, 3, 1, 5), HypothesisError);
}

TEST_CASE("cantor_embed examples") {
  CHECK(cantor_embed(PadicNumber::zero(2), 2) == 0.0);
  CHECK(cantor_embed(PadicNumber::from_integer(-1, 2, 60), 2) == doctest::Approx(1.0));
  // All digits 1, read in base 3.
  CHECK(cantor_embed(PadicNumber::from_integer(-1, 2, 60), 3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cantor_embed(PadicNumber::from_integer(1, 3, 5), 2), std::invalid_argument);
  CHECK_THROWS_AS(cantor_embed(PadicNumber::from_rational(1, 2, 2, 5), 2), std::domain_error);
}

TEST_CASE("property: norm is an ultrametric absolute value") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-100000, 100000), den(1, 500);
  for (std::int64_t p : {2, 3, 5, 7, 11}) {
    for (int i = 0; i < 400; ++i) {
      std::int64_t a = num(rng), b = num(rng);
      if (a == 0 || b == 0 || a + b == 0) continue;
      auto x = PadicNumber::from_rational(a, den(rng), p, 40);
      auto y = PadicNumber::from_rational(b, den(rng), p, 40);
      CHECK((x + y).norm() <= std::max(x.norm(), y.norm()));
      CHECK((x * y).norm() == x.norm() * y.norm());
    }
  }
}

TEST_CASE("property: digit expansion sums back to the rational") {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::int64_t> num(0, 1000000), den(1, 10000);
  for (std::int64_t p : {2, 3, 7}) {
    const int n = 30;
    const BigInt pn = ipow(BigInt(p), n);
    for (int i = 0; i < 300; ++i) {
      std::int64_t a = num(rng), b = den(rng);
      if (a == 0 || a % p == 0 || b % p == 0) continue;
      auto x = PadicNumber::from_rational(a, b, p, n);
      BigInt sum = 0, w = 1;
      for (int j = 0; j < n; ++j, w *= p) sum += x.digit(j) * w;
      BigInt want = (BigInt(a) * mod_inverse(b, pn)) % pn;
      CHECK(sum == want);
    }
  }
}

TEST_CASE("property: Hensel lifts satisfy the polynomial") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::int64_t> coef(-50, 50);
  int checked = 0;
  for (std::int64_t p : {2, 3, 5, 7}) {
    for (int i = 0; i < 50; ++i) {
      // (x - r)(x - s) with r and s distinct mod p has a simple root at r.
      std::int64_t r = coef(rng), s = coef(rng);
      if (((r - s) % p + p) % p == 0) continue;
      std::vector<BigInt> poly{BigInt(r) * s, BigInt(-(r + s)), 1};
      const std::int64_t residue = ((r % p) + p) % p;
      auto x = hensel_lift(poly, p, residue, 48);
      auto fx = evaluate(poly, x);
      CHECK((fx.is_zero() ? fx.absolute_precision() : fx.valuation()) >= 48);
      CHECK(x.agrees_with(PadicNumber::from_integer(r, p, 48), 48));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("property: cantor_embed is monotone and 1-Lipschitz") {
  std::mt19937_64 rng(14);
  std::uniform_int_distribution<std::int64_t> num(1, 1 << 30);
  for (std::int64_t p : {2, 3, 5}) {
    const int n = 12;
    for (int i = 0; i < 500; ++i) {
      auto x = PadicNumber::from_integer(num(rng), p, n).truncated(n);
      auto y = PadicNumber::from_integer(num(rng), p, n).truncated(n);
      const double cx = cantor_embed(x, p), cy = cantor_embed(y, p);
      CHECK(std::abs(cx - cy) <= static_cast<double>((x - y).norm()) + 1e-12);
      std::vector<std::uint32_t> dx, dy;
      for (int j = 0; j < n; ++j) {
        dx.push_back(x.digit(j));
        dy.push_back(y.digit(j));
      }
      if (dx < dy) CHECK(cx < cy);
      if (dy < dx) CHECK(cy < cx);
    }
  }
}
