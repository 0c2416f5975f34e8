#include <doctest.h>

#include <random>

#include "gifsdim/render.hpp"

using namespace gifsdim;

namespace {

BoxCover single(const Box& b) {
  BoxCover c;
  c.boxes = {{b}};
  c.vertices = {"v"};
  return c;
}

std::vector<int> painted_rows(const std::string& ppm, int height) {
  // 1-pixel-wide image: one RGB triple per row after the header.
  const std::size_t start = ppm.size() - static_cast<std::size_t>(height) * 3;
  std::vector<int> rows;
  for (int y = 0; y < height; ++y)
    if (static_cast<unsigned char>(ppm[start + static_cast<std::size_t>(y) * 3]) == 0) rows.push_back(y);
  return rows;
}

}  // namespace

TEST_CASE("trivial pictures") {
  ImageSpec spec;
  spec.width = 16;
  spec.height = 8;
  spec.x0 = 0.0;
  spec.x1 = 1.0;
  const BoxCover empty{{{}}, 0, {"v"}};
  const std::string blank = render_cover({{&empty, {kBoundary}}}, spec);
  CHECK(blank.rfind("P6\n16 8\n255\n", 0) == 0);
  CHECK(pixel_share(blank, kWhite) == 1.0);

  const BoxCover full = single({{{0.0, 1.0}}, {}, {{PadicNumber::zero(2), 0}}});
  CHECK(pixel_share(render_cover({{&full, {kOmegaA}}}, spec), kOmegaA) == 1.0);
  const std::string svg = render_svg({{&full, {kOmegaA}}}, spec);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("#606060") != std::string::npos);

  ImageSpec bad = spec;
  bad.width = 0;
  CHECK_THROWS_AS(render_cover({{&full, {kOmegaA}}}, bad), std::invalid_argument);
  bad = spec;
  bad.x1 = bad.x0;
  CHECK_THROWS_AS(render_cover({{&full, {kOmegaA}}}, bad), std::invalid_argument);
  const BoxCover two_reals = single({{{0.0, 1.0}, {0.0, 1.0}}, {}, {}});
  CHECK_THROWS_AS(render_cover({{&two_reals, {kOmegaA}}}, spec), std::invalid_argument);
}

TEST_CASE("the example picture is deterministic with a thin boundary") {
  const GifsGraph g = fixture("main"), gb = fixture("boundary");
  auto draw = [&] {
    const BoxCover cm = iterate_cover(g, default_seeds(g), 8);
    const BoxCover cb = iterate_cover(gb, default_seeds(gb), 8);
    std::vector<Layer> layers{{&cm, {kOmegaA, kOmegaB}}, {&cb, {kBoundary}}};
    ImageSpec spec;
    fit_real_range(layers, spec);
    return render_cover(layers, spec);
  };
  const std::string a = draw();
  CHECK(a == draw());
  const double share = pixel_share(a, kBoundary);
  CHECK(share > 0.005);
  CHECK(share < 0.15);
  CHECK(pixel_share(a, kOmegaA) > 0.0);
  CHECK(pixel_share(a, kOmegaB) > 0.0);
}

TEST_CASE("property: balls get disjoint pixel rows exactly when they are disjoint") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<int> exp(0, 9);
  std::uniform_int_distribution<std::int64_t> centre(0, 1023);
  ImageSpec spec;
  spec.width = 1;
  spec.height = 512;
  spec.x0 = 0.0;
  spec.x1 = 1.0;
  for (int i = 0; i < 300; ++i) {
    const int e1 = exp(rng), e2 = exp(rng);
    const std::int64_t c1 = centre(rng), c2 = centre(rng);
    auto ball = [&](std::int64_t c, int e) {
      return single({{{0.0, 1.0}}, {}, {{PadicNumber::from_integer(c == 0 ? 1024 : c, 2, 20), e}}});
    };
    const BoxCover b1 = ball(c1, e1), b2 = ball(c2, e2);
    auto r1 = painted_rows(render_cover({{&b1, {kBoundary}}}, spec), 512);
    auto r2 = painted_rows(render_cover({{&b2, {kBoundary}}}, spec), 512);
    CHECK(r1.size() == (512u >> e1));
    std::vector<int> common;
    std::set_intersection(r1.begin(), r1.end(), r2.begin(), r2.end(), std::back_inserter(common));
    const std::int64_t m = std::int64_t{1} << std::min(e1, e2);
    const bool disjoint = ((c1 == 0 ? 1024 : c1) - (c2 == 0 ? 1024 : c2)) % m != 0;
    CHECK(common.empty() == disjoint);
  }
}

TEST_CASE("graph output") {
  const GifsGraph g = fixture("boundary");
  const std::string dot = emit_dot(g);
  int nodes = 0, edges = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find(" -> ") != std::string::npos)
      ++edges;
    else if (!line.empty() && line.back() == ';')
      ++nodes;
  }
  CHECK(nodes == 5);
  CHECK(edges == 10);
  CHECK(dot.find("[label=\"T(x)+t1\"]") != std::string::npos);
  CHECK(emit_dot(GifsGraph{}) == "digraph gifs {\n}\n");

  const std::string json = emit_graph_json(fixture("main"));
  CHECK(json.find("\"vertices\"") != std::string::npos);
  CHECK(json.find("\"edges\"") != std::string::npos);
}
