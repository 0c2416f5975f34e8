#include <doctest.h>

#include <random>

#include "gifsdim/errors.hpp"
#include "gifsdim/quadratic.hpp"

using namespace gifsdim;

namespace {

QuadraticNumber q(const char* text) { return QuadraticNumber::parse(text); }

const QuadraticNumber kKappa = q("(3-sqrt(17))/2");
const QuadraticNumber kLambda = q("(3+sqrt(17))/2");

QuadraticNumber random_element(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> c(-40, 40), d(1, 12);
  QuadraticNumber x;
  do x = QuadraticNumber(c(rng), c(rng), d(rng), 17);
  while (x.is_zero());
  return x;
}

}  // namespace

TEST_CASE("field arithmetic in Q(sqrt 17)") {
  CHECK(kKappa + kLambda == QuadraticNumber::rational(3));
  CHECK((kKappa + kLambda).is_rational());
  CHECK(kKappa * kLambda == QuadraticNumber::rational(-2));
  CHECK(kLambda * kLambda.inverse() == QuadraticNumber::rational(1));
  CHECK(kLambda.inverse() == q("(-3+sqrt(17))/4"));
  CHECK(kLambda.conj() == kKappa);
  CHECK(kLambda.minimal_polynomial() == std::vector<BigInt>{-2, -3, 1});
  // |kappa| = 2 / lambda
  CHECK(kKappa.abs() == QuadraticNumber::rational(2) / kLambda);
}

TEST_CASE("normal form and parsing") {
  QuadraticNumber x(BigInt(6), BigInt(-4), BigInt(-2), 17);
  CHECK(x.a() == -3);
  CHECK(x.b() == 2);
  CHECK(x.c() == 1);
  CHECK(q("0.25") == QuadraticNumber::rational(1, 4));
  CHECK(q("sqrt(8)") == q("2*sqrt(2)"));
  CHECK(q(kLambda.to_string().c_str()) == kLambda);
  CHECK_THROWS_AS(q("sqrt(2)+sqrt(3)"), std::invalid_argument);
  CHECK_THROWS_AS(q("1/0"), std::exception);
  CHECK_THROWS_AS(q("(1+2"), ParseError);
  CHECK_THROWS_AS(q("x+1"), ParseError);
  CHECK_THROWS_AS(QuadraticNumber::rational(0).inverse(), std::domain_error);
}

TEST_CASE("real embedding") {
  CHECK(embed_real(kKappa) == doctest::Approx(-0.5616).epsilon(1e-3));
  CHECK(embed_real(kLambda) == doctest::Approx(3.5616).epsilon(1e-3));
  CHECK(embed_real(QuadraticNumber::rational(3)) == 3.0);
  // Heavy cancellation stays accurate: 10^8 + 1 - sqrt(10^16 + 2*10^8) ~ 5e-9.
  const auto tiny = q("100000001 - sqrt(10000000200000000)");
  CHECK(tiny.sign() == 1);
  CHECK(embed_real(tiny) == doctest::Approx(1.0 / (1e8 + 1 + std::sqrt(1e16 + 2e8))).epsilon(1e-9));
  const auto t2 = q("(33-8*sqrt(17))");
  CHECK(embed_real(t2) == doctest::Approx(33 - 8 * std::sqrt(17.0)).epsilon(1e-12));
  CHECK(embed_real(t2) > 0);
}

TEST_CASE("2-adic embedding of lambda") {
  auto img = embed_padic(kLambda, 2, 0, 5);
  CHECK(img.to_digit_string() == "01101");
  CHECK(img.norm() == Rational(1, 2));
  CHECK(embed_padic(QuadraticNumber::rational(3), 2, 1, 3) == PadicNumber::from_rational(3, 1, 2, 3));
  CHECK(embed_padic(kLambda, 2, 1, 8).norm() == 1);
  CHECK_THROWS_AS(PadicEmbedding(QuadraticNumber::rational(2), 2, 0), std::invalid_argument);
}

TEST_CASE("property: the 2-adic embedding is a ring homomorphism") {
  std::mt19937_64 rng(21);
  const PadicEmbedding e(kLambda, 2, 0, 128);
  const int k = 40;
  for (int i = 0; i < 300; ++i) {
    auto x = random_element(rng), y = random_element(rng);
    CHECK(e.apply(x * y).agrees_with(e.apply(x) * e.apply(y), k));
    CHECK(e.apply(x + y).agrees_with(e.apply(x) + e.apply(y), k));
    CHECK(e.apply(x.inverse()).agrees_with(e.apply(x).inverse(), k));
  }
  CHECK(e.apply(kLambda).agrees_with(hensel_lift(std::vector<BigInt>{-2, -3, 1}, 2, 0, 64), 64));
  CHECK(e.apply(kKappa).norm() == 1);  // kappa lambda = -2
}

TEST_CASE("property: embed_real preserves exact order") {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 1000; ++i) {
    auto x = random_element(rng), y = random_element(rng);
    const int s = compare_real(x, y);
    const double dx = embed_real(x), dy = embed_real(y);
    if (s < 0) CHECK(dx <= dy);
    if (s > 0) CHECK(dx >= dy);
    if (s == 0) CHECK(dx == dy);
    CHECK((x - y).sign() == s);
  }
}
