#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "gifsdim/errors.hpp"
#include "gifsdim/gifs.hpp"
#include "gifsdim/spectral.hpp"
#include "gifsdim/svf.hpp"

using namespace gifsdim;

namespace {

const char* kCantor = R"({
  "space": {"real": 1},
  "vertices": ["v"],
  "edges": [
    {"from": "v", "to": "v", "linear": "1/3"},
    {"from": "v", "to": "v", "linear": "1/3", "translate": "2/3"}
  ]
})";

}  // namespace

TEST_CASE("fixtures") {
  const GifsGraph main = fixture("main");
  CHECK(main.vertex_count() == 2);
  CHECK(main.edges().size() == 6);
  CHECK(adjacency_matrix(main) == IntMatrix{{3, 2}, {1, 0}});

  const GifsGraph boundary = fixture("boundary");
  CHECK(boundary.vertex_count() == 5);
  CHECK(boundary.edges().size() == 10);
  for (const auto& row : adjacency_matrix(boundary)) {
    std::int64_t sum = 0;
    for (auto x : row) sum += x;
    CHECK(sum == 2);
  }
  CHECK(fixture("boundary-full").vertex_count() == 8);
  CHECK_THROWS_AS(fixture("nope"), std::invalid_argument);

  CHECK(is_strongly_connected(main));
  CHECK(is_strongly_connected(boundary));
  for (const char* name : {"main", "boundary-full", "boundary"}) {
    const GifsGraph g = fixture(name);
    CHECK(g.has_uniform_linear_part());
    CHECK(parse_spec(serialize_spec(g)) == g);
  }
}

TEST_CASE("spec files") {
  const GifsGraph g = parse_spec(kCantor);
  CHECK(g.edges().size() == 2);
  CHECK(g.edges()[1].name == "1/3(x)+2/3");
  CHECK(g.edges()[1].map.translate.reals[0] == doctest::Approx(2.0 / 3.0));
  CHECK(parse_spec(serialize_spec(g)) == g);

  CHECK_THROWS_AS(parse_spec("{"), ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"space": {"real": 1}, "vertices": ["v"], "edges": [
    {"from": "v", "to": "w", "linear": "1/2"}]})"),
                  ParseError);
  // An irrational constant needs a selector before it can act on Q_2.
  CHECK_THROWS_AS(parse_spec(R"({"space": {"real": 1, "primes": [2]}, "vertices": ["v"], "edges": [
    {"from": "v", "to": "v", "linear": ["1/2", "sqrt(17)/8"]}]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_spec(R"({"space": {"real": 1}, "vertices": ["v"], "edges": [
    {"from": "v", "to": "v", "linear": "2"}]})"),
                  HypothesisError);
}

TEST_CASE("adjacency of an empty graph") {
  const GifsGraph g({1, 0, {}}, {"a", "b"}, {});
  CHECK(adjacency_matrix(g) == IntMatrix{{0, 0}, {0, 0}});
  CHECK_FALSE(is_strongly_connected(g));
  CHECK(spectral_radius(to_matrix(adjacency_matrix(g))) == 0.0);
}

TEST_CASE("spectral radius") {
  CHECK(spectral_radius({{3, 2}, {1, 0}}) == doctest::Approx((3 + std::sqrt(17.0)) / 2).epsilon(1e-12));
  CHECK(std::abs(spectral_radius(to_matrix(adjacency_matrix(fixture("boundary")))) - 2.0) <= 1e-12);
  CHECK(spectral_radius({{1, 0}, {0, 1}}) == 1.0);
  CHECK(spectral_radius({{0, 1}, {1, 0}}) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(spectral_radius({{0, 1, 0}, {0, 0, 1}, {8, 0, 0}}) == doctest::Approx(2.0).epsilon(1e-13));
  // Reducible: the largest block wins.
  CHECK(spectral_radius({{1, 5, 0}, {0, 3, 1}, {0, 1, 3}}) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {3}}), std::invalid_argument);

  const auto exact = exact_spectral_radius_2x2({{3, 2}, {1, 0}});
  CHECK(exact == QuadraticNumber::parse("(3+sqrt(17))/2"));
  for (const IntMatrix& m : {IntMatrix{{3, 2}, {1, 0}}, IntMatrix{{1, 1}, {1, 0}}, IntMatrix{{2, 3}, {4, 1}}})
    CHECK(spectral_radius(to_matrix(m)) == doctest::Approx(embed_real(exact_spectral_radius_2x2(m))).epsilon(1e-9));
}

TEST_CASE("strongly connected components") {
  auto comps = strongly_connected_components({{1}, {0, 2}, {3}, {2}, {}});
  REQUIRE(comps.size() == 3);
  auto at = [&](std::vector<int> c) { return std::find(comps.begin(), comps.end(), c) - comps.begin(); };
  CHECK(at({4}) < 3);
  // {2, 3} is reachable from {0, 1}, so it comes first.
  CHECK(at({2, 3}) < at({0, 1}));
}

TEST_CASE("paths") {
  const GifsGraph g = fixture("main");
  auto p1 = enumerate_paths(g, 1);
  std::size_t total = 0;
  for (auto& row : p1)
    for (auto& cell : row) total += cell.size();
  CHECK(total == 6);

  auto p2 = enumerate_paths(g, 2);
  CHECK(p2[0][0].size() == 11);
  CHECK(p2[0][1].size() == 6);
  CHECK(p2[1][0].size() == 3);
  CHECK(p2[1][1].size() == 2);

  for (auto& row : enumerate_paths(g, 0))
    for (auto& cell : row) CHECK(cell.empty());
  CHECK_THROWS_AS(enumerate_paths(g, -1), std::invalid_argument);

  const DiagonalMap id = path_linear(g, {});
  CHECK(id.reals[0] == 1.0);
  CHECK(id.padics[0].norm() == 1);
}

TEST_CASE("property: path counts equal powers of the adjacency matrix") {
  for (const char* name : {"main", "boundary-full", "boundary"}) {
    const GifsGraph g = fixture(name);
    for (int l = 1; l <= 6; ++l) {
      const IntMatrix f = matrix_power(adjacency_matrix(g), l);
      auto paths = enumerate_paths(g, l);
      for (std::size_t i = 0; i < g.vertex_count(); ++i)
        for (std::size_t j = 0; j < g.vertex_count(); ++j)
          CHECK(static_cast<std::int64_t>(paths[i][j].size()) == f[i][j]);
    }
  }
}

TEST_CASE("property: a path of length l in a uniform system acts as T^l") {
  const GifsGraph g = fixture("boundary");
  const DiagonalMap& t = g.edges().front().map.linear;
  const std::vector<double> sv = singular_values(t);
  for (int l = 1; l <= 5; ++l) {
    for (const auto& row : enumerate_paths(g, l)) {
      for (const auto& cell : row) {
        for (const auto& path : cell) {
          DiagonalMap tw = path_linear(g, path.edges);
          CHECK(tw.exact.reals[0] == [&] {
            QuadraticNumber x = QuadraticNumber::rational(1);
            for (int k = 0; k < l; ++k) x = x * t.exact.reals[0];
            return x;
          }());
          for (double q : {0.5, 1.0, 1.7, 2.5})
            CHECK(phi(q, singular_values(tw)) == doctest::Approx(std::pow(phi(q, sv), l)).epsilon(1e-12));
        }
      }
    }
  }
}
