#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gifsdim/attractor.hpp"
#include "gifsdim/errors.hpp"

using namespace gifsdim;

namespace {

bool same_box(const Box& a, const Box& b) {
  if (a.reals.size() != b.reals.size() || a.padics.size() != b.padics.size()) return false;
  for (std::size_t i = 0; i < a.reals.size(); ++i)
    if (a.reals[i].lo != b.reals[i].lo || a.reals[i].hi != b.reals[i].hi) return false;
  for (std::size_t i = 0; i < a.padics.size(); ++i) {
    if (a.padics[i].exponent != b.padics[i].exponent) return false;
    if (!a.padics[i].center.agrees_with(b.padics[i].center, a.padics[i].exponent)) return false;
  }
  return true;
}

bool same_cover(const BoxCover& a, const BoxCover& b) {
  if (a.boxes.size() != b.boxes.size()) return false;
  for (std::size_t v = 0; v < a.boxes.size(); ++v) {
    if (a.boxes[v].size() != b.boxes[v].size()) return false;
    for (std::size_t i = 0; i < a.boxes[v].size(); ++i)
      if (!same_box(a.boxes[v][i], b.boxes[v][i])) return false;
  }
  return true;
}

std::vector<Box> all_boxes(const BoxCover& c) {
  std::vector<Box> out;
  for (const auto& v : c.boxes) out.insert(out.end(), v.begin(), v.end());
  return out;
}

Box unit_box() { return {{{0.0, 1.0}}, {}, {{PadicNumber::zero(2), 0}}}; }

Box main_window() { return {{{-3.0, 3.0}}, {}, {{PadicNumber::zero(2), -1}}}; }

}  // namespace

TEST_CASE("covers of the main system") {
  const GifsGraph g = fixture("main");
  const auto seeds = default_seeds(g);
  CHECK(seed_invariance_violations(g, seeds).empty());

  const BoxCover c0 = iterate_cover(g, seeds, 0);
  REQUIRE(c0.boxes.size() == 2);
  CHECK(c0.boxes[0].size() == 1);
  CHECK(same_box(c0.boxes[0][0], seeds[0]));

  const BoxCover c2 = iterate_cover(g, seeds, 2);
  CHECK(c2.boxes[0].size() == 17);
  CHECK(c2.boxes[1].size() == 5);

  std::vector<Box> tight{unit_box(), unit_box()};
  CHECK_FALSE(seed_invariance_violations(g, tight).empty());
}

TEST_CASE("property: cover cardinality law and contraction") {
  for (const char* name : {"main", "boundary-full", "boundary"}) {
    const GifsGraph g = fixture(name);
    const auto seeds = default_seeds(g);
    const double alpha1 = singular_values(g.edges().front().map.linear).front();
    for (int l = 0; l <= 5; ++l) {
      const BoxCover c = iterate_cover(g, seeds, l);
      const IntMatrix f = matrix_power(adjacency_matrix(g), l);
      for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        std::int64_t row = 0;
        for (auto x : f[i]) row += x;
        if (l == 0) row = 1;
        CHECK(static_cast<std::int64_t>(c.boxes[i].size()) == row);
        for (const auto& b : c.boxes[i]) CHECK(diameter(b) <= std::pow(alpha1, l) * diameter(seeds[i]) * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("kernels match the references") {
  for (const char* name : {"main", "boundary"}) {
    const GifsGraph g = fixture(name);
    const auto seeds = default_seeds(g);
    const BoxCover ref = iterate_cover_reference(g, seeds, 6);
    CHECK(same_cover(ref, iterate_cover(g, seeds, 6, Exec::parallel)));
    CHECK(same_cover(ref, iterate_cover(g, seeds, 6, Exec::serial)));

    for (bool adaptive : {false, true}) {
      CountOptions opt;
      opt.resolution = 5;
      opt.depth = adaptive ? 12 : 6;
      opt.adaptive = adaptive;
      const auto want = count_cells_reference(g, seeds, opt);
      const CellSet par = count_cells(g, seeds, opt, Exec::parallel);
      const CellSet ser = count_cells(g, seeds, opt, Exec::serial);
      CHECK(par.decode() == want);
      CHECK(par.keys == ser.keys);
      CHECK(attractor_box_count(g, seeds, opt) == want.size());
    }
  }
}

TEST_CASE("complex coordinates fall back to the reference") {
  const GifsGraph g = parse_spec(R"({"space": {"complex": 1}, "vertices": ["v"], "edges": [
    {"from": "v", "to": "v", "linear": [["0", "1/2"]]},
    {"from": "v", "to": "v", "linear": [["0", "1/2"]], "translate": [["1/2", "0"]]}]})");
  const auto seeds = default_seeds(g);
  CHECK(same_cover(iterate_cover_reference(g, seeds, 3), iterate_cover(g, seeds, 3)));
  CountOptions opt;
  opt.resolution = 3;
  opt.depth = 4;
  CHECK_THROWS_AS(count_cells(g, seeds, opt), std::invalid_argument);
  CHECK(attractor_box_count(g, seeds, opt) == count_cells_reference(g, seeds, opt).size());
}

TEST_CASE("cell counting") {
  for (int m = 0; m <= 6; ++m) CHECK(box_count({unit_box()}, m) == (std::size_t{1} << (2 * m)));
  const Box point{{{0.3, 0.3}}, {}, {{PadicNumber::from_integer(5, 2, 60), 60}}};
  for (int m = 0; m <= 20; ++m) CHECK(box_count({point}, m) == 1);
  const Box on_line{{{0.5, 0.5}}, {}, {{PadicNumber::zero(2), 30}}};
  CHECK(box_count({on_line}, 4) == 1);
  CHECK_THROWS_AS(box_count({main_window()}, 3), std::invalid_argument);

  const auto fit = box_dim_estimate({{3, 8}, {4, 23}, {5, 64}, {6, 181}});
  CHECK(fit.slope == doctest::Approx(1.5).epsilon(0.01));
  const auto exact = box_dim_estimate({{1, 4}, {2, 16}, {3, 64}});
  CHECK(exact.slope == doctest::Approx(2.0));
  CHECK(exact.residual == doctest::Approx(0.0).scale(1));

  std::set<CellKey> a{{1, 2}, {3, 4}}, b{{3, 4}}, none;
  CHECK(overlap_fraction(a, a) == 1.0);
  CHECK(overlap_fraction(a, b) == 0.5);
  CHECK(overlap_fraction(none, a) == 0.0);
}

TEST_CASE("property: box counts have set semantics and nest") {
  const GifsGraph g = fixture("main");
  const auto seeds = default_seeds(g);
  std::mt19937_64 rng(61);
  const std::vector<Box> boxes = all_boxes(iterate_cover(g, seeds, 4));
  for (int m = 2; m <= 6; ++m) {
    std::vector<Box> shuffled = boxes;
    shuffled.insert(shuffled.end(), boxes.begin(), boxes.begin() + 20);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(box_count(shuffled, m) == box_count(boxes, m));
  }
  for (int l = 2; l <= 6; ++l) {
    const auto coarse = cells_of_boxes(all_boxes(iterate_cover(g, seeds, l)), 5);
    const auto fine = cells_of_boxes(all_boxes(iterate_cover(g, seeds, l + 1)), 5);
    CHECK(std::includes(coarse.begin(), coarse.end(), fine.begin(), fine.end()));
  }
}

TEST_CASE("property: box-count slopes stay below the metric dimension") {
  for (const char* name : {"main", "boundary"}) {
    const GifsGraph g = fixture(name);
    CountOptions opt;
    opt.depth = 8;
    const auto rows = box_count_table(g, default_seeds(g), 3, 7, opt);
    CHECK(rows.size() == 5);
    CHECK(rows.back().slope <= 2.05);
    CHECK(box_count_csv(rows).rfind("m,N,slope\n", 0) == 0);
  }
}

TEST_CASE("dual point sets") {
  const GifsGraph g = fixture("main");
  const int a = g.vertex_index("a"), b = g.vertex_index("b");
  const auto zero = QuadraticNumber::rational(0), half = QuadraticNumber::rational(1, 2);
  std::vector<std::set<ExactPoint>> x(2, {ExactPoint{zero, zero}});
  const std::set<ExactPoint> origin{ExactPoint{zero, zero}};

  auto x1 = dual_step(g, x, main_window());
  CHECK(x1[static_cast<std::size_t>(b)] == std::set<ExactPoint>{{zero, zero}, {half, half}});
  for (int it = 0; it < 6; ++it) {
    CHECK(x[static_cast<std::size_t>(a)].count(ExactPoint{zero, zero}) == 1);
    x = dual_step(g, x, main_window());
  }

  const PointSetPair fixed = dual_iterate(g, main_window());
  CHECK(dual_step(g, fixed.points, main_window()) == fixed.points);
  CHECK(fixed.points[static_cast<std::size_t>(a)].count(ExactPoint{zero, zero}) == 1);
  CHECK(points_csv(fixed).rfind("vertex,a1,b1,c1,D1,a2,b2,c2,D2\n", 0) == 0);
  CHECK_THROWS_AS(dual_iterate(g, main_window(), 3), std::runtime_error);

  const BoxCover cover = iterate_cover(g, default_seeds(g), 8);
  CHECK(tiling_cover_check(g, fixed, cover, unit_box(), 5) >= 0.95);
  PointSetPair empty = fixed;
  for (auto& s : empty.points) s.clear();
  CHECK(tiling_cover_check(g, empty, cover, unit_box(), 5) == 0.0);

  auto mixed = parse_spec(R"({"space": {"real": 1}, "vertices": ["v"], "edges": [
    {"from": "v", "to": "v", "linear": "1/2"},
    {"from": "v", "to": "v", "linear": "1/4", "translate": "1/2"}]})");
  Box w{{{-1.0, 1.0}}, {}, {}};
  CHECK_THROWS_AS(dual_iterate(mixed, w), HypothesisError);
}
