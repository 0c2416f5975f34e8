#include <doctest.h>

#include <random>

#include "gifsdim/gifs.hpp"
#include "gifsdim/mixed_space.hpp"
#include "gifsdim/properties.hpp"

using namespace gifsdim;

namespace {

const SpaceSignature kRQ2{1, 0, {2}};

Point point(double x, const PadicNumber& y) { return {{x}, {}, {y}}; }

Box box(double lo, double hi, std::int64_t p, int exponent, const PadicNumber& center) {
  return {{{lo, hi}}, {}, {{center, exponent}}};
}

Box box(double lo, double hi, int exponent) { return box(lo, hi, 2, exponent, PadicNumber::zero(2)); }

}  // namespace

TEST_CASE("metric dimension") {
  CHECK(metric_dim({1, 0, {2}}) == 2);
  CHECK(metric_dim({3, 0, {}}) == 3);
  CHECK(metric_dim({0, 1, {3, 5}}) == 4);
  CHECK_THROWS_AS(SpaceSignature({0, 0, {}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(SpaceSignature({1, 0, {6}}).validate(), std::invalid_argument);
}

TEST_CASE("distance, diameter and Haar measure examples") {
  const Point o = point(0.0, PadicNumber::zero(2));
  CHECK(distance(o, o) == 0.0);
  CHECK(distance(o, point(0.25, PadicNumber::from_integer(4, 2, 10))) == 0.25);
  CHECK(distance(o, point(0.1, PadicNumber::from_integer(3, 2, 10))) == 1.0);

  CHECK(diameter(box(0, 1, 0)) == 1.0);
  CHECK(diameter(box(0, 0.125, 3)) == 0.125);
  CHECK(diameter(box(0.3, 0.3, 2)) == 0.25);

  CHECK(haar_measure(box(0, 1, 0)) == 1.0);
  CHECK(haar_measure(box(0, 1, 1)) == 0.5);
  CHECK(haar_measure_exact(box(0, 1, 1)) == Rational(1, 2));
  CHECK(haar_measure(Box{{{0, 2}, {0, 3}}, {}, {}}) == 6.0);
  CHECK(haar_measure(box(0, 1, -2)) == 4.0);
}

TEST_CASE("maps on the example space") {
  const GifsGraph g = fixture("main");
  const AffineMap& f0 = g.edges().front().map;
  const DiagonalMap& t = f0.linear;

  AffineMap shift{DiagonalMap::identity(kRQ2), point(0.5, PadicNumber::from_integer(3, 2, 20)), {}};
  Point img = apply(shift, zero_point(kRQ2));
  CHECK(img.reals[0] == 0.5);
  CHECK(img.padics[0] == shift.translate.padics[0]);

  AffineMap lin{t, zero_point(kRQ2), {}};
  Point y = apply(lin, point(1.0, PadicNumber::from_integer(1, 2, 40)));
  CHECK(std::abs(y.reals[0]) == doctest::Approx(0.5615528128));
  CHECK(y.padics[0].norm() == Rational(1, 2));

  DiagonalMap sq = compose(t, t);
  CHECK(sq.reals[0] == doctest::Approx(t.reals[0] * t.reals[0]));
  CHECK(sq.padics[0].agrees_with(t.padics[0] * t.padics[0], 40));
  CHECK(sq.exact.reals[0] == t.exact.reals[0] * t.exact.reals[0]);

  auto sv = singular_values(t);
  REQUIRE(sv.size() == 2);
  CHECK(sv[0] == doctest::Approx(0.5615528128));
  CHECK(sv[1] == 0.5);
  CHECK(singular_values(DiagonalMap::identity({2, 1, {3}})) == std::vector<double>{1, 1, 1, 1, 1});
  DiagonalMap c;
  c.complexes = {{0.3, 0.4}};
  auto cs = singular_values(c);
  CHECK(cs.size() == 2);
  CHECK(cs[0] == doctest::Approx(0.5));
  CHECK(cs[1] == doctest::Approx(0.5));

  auto exact = exact_singular_values(t);
  REQUIRE(exact);
  CHECK((*exact)[0] == QuadraticNumber::parse("(sqrt(17)-3)/2"));
  CHECK((*exact)[1] == QuadraticNumber::rational(1, 2));
  CHECK_FALSE(exact_singular_values(c));
}

TEST_CASE("complex multipliers that rotate rectangles give the bounding rectangle") {
  const SpaceSignature sig{0, 1, {}};
  DiagonalMap t;
  t.complexes = {std::polar(1.0, 0.7853981633974483)};
  AffineMap f{t, zero_point(sig), {}};
  Box b{{}, {{{-1, 1}, {-1, 1}}}, {}};
  Box r = apply_box(f, b);
  CHECK(r.complexes[0].re.hi == doctest::Approx(std::sqrt(2.0)));
  CHECK(haar_measure(r) >= haar_measure(b));
}

TEST_CASE("property: distance is a metric, ultrametric on p-adic coordinates") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-5, 5);
  std::uniform_int_distribution<std::int64_t> n(-5000, 5000);
  auto random_point = [&](const SpaceSignature& sig) {
    Point x = zero_point(sig);
    for (auto& r : x.reals) r = u(rng);
    for (auto& z : x.complexes) z = {u(rng), u(rng)};
    for (auto& a : x.padics) {
      auto v = n(rng);
      a = v == 0 ? PadicNumber::zero(a.prime()) : PadicNumber::from_integer(v, a.prime(), 30);
    }
    return x;
  };
  const SpaceSignature mixed{2, 1, {3}}, padic{0, 0, {2, 5}};
  for (int i = 0; i < 2000; ++i) {
    auto x = random_point(mixed), y = random_point(mixed), z = random_point(mixed);
    CHECK(distance(x, y) == distance(y, x));
    CHECK(distance(x, z) <= distance(x, y) + distance(y, z) + 1e-12);
    auto a = random_point(padic), b = random_point(padic), c = random_point(padic);
    CHECK(distance(a, c) <= std::max(distance(a, b), distance(b, c)));
  }
}

TEST_CASE("property: Haar scaling per coordinate type") {
  std::mt19937_64 rng(32);
  for (const auto& r : haar_scaling_suite(rng, 500)) {
    INFO(r.name << ": " << r.first_failure);
    CHECK(r.trials == 500);
    CHECK(r.violations == 0);
  }
}

TEST_CASE("property: mu(T B) = mu(B) times the product of singular values") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> a(0.05, 0.95), lo(-3, 3), len(0.1, 2);
  for (int i = 0; i < 500; ++i) {
    const SpaceSignature sig{2, 0, {3}};
    DiagonalMap t;
    t.reals = {a(rng), -a(rng)};
    t.padics = {PadicNumber::from_rational(9, 2, 3, 30)};
    Box b;
    for (int k = 0; k < 2; ++k) {
      double l = lo(rng);
      b.reals.push_back({l, l + len(rng)});
    }
    b.padics.push_back({PadicNumber::from_integer(i + 1, 3, 30), i % 5});
    double prod = 1.0;
    for (double s : singular_values(t)) prod *= s;
    Box tb = apply_box(AffineMap{t, zero_point(sig), {}}, b);
    CHECK(haar_measure(tb) == doctest::Approx(prod * haar_measure(b)).epsilon(1e-12));
    CHECK(diameter(tb) <= singular_values(t)[0] * diameter(b) * (1 + 1e-12));
  }
}
