#include <doctest.h>

#include <cmath>
#include <random>

#include "gifsdim/dimension.hpp"
#include "gifsdim/errors.hpp"
#include "gifsdim/properties.hpp"
#include "gifsdim/svf.hpp"

using namespace gifsdim;

namespace {

const double kRhoMain = (3 + std::sqrt(17.0)) / 2;
const double kBoundaryDim = 1 + std::log(std::sqrt(17.0) - 3) / std::log(2.0);

DiagonalMap example_t() { return fixture("main").edges().front().map.linear; }

GifsGraph one_vertex(const char* edges) {
  return parse_spec(std::string(R"({"space": {"real": 1}, "vertices": ["v"], "edges": )") + edges + "}");
}

// a -> a and a -> b only: b is a dead end.
const char* kOpen = R"({"space": {"real": 1}, "vertices": ["a", "b"], "edges": [
  {"from": "a", "to": "a", "linear": "1/2"},
  {"from": "a", "to": "b", "linear": "1/2", "translate": "1/2"}]})";

}  // namespace

TEST_CASE("closed form on the example map") {
  const DiagonalMap t = example_t();
  CHECK(affinity_dim_uniform(t, kRhoMain) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(affinity_dim_uniform(t, 2.0) == doctest::Approx(kBoundaryDim).epsilon(1e-12));
  CHECK(affinity_dim_uniform(t, 1.0) == 0.0);
  CHECK(lower_affinity_dim_uniform(t, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lower_affinity_dim_uniform(t, kRhoMain) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lower_affinity_dim_uniform(t, 1.0) == 0.0);
  CHECK_THROWS_AS(affinity_dim_uniform(t, 0.5), std::invalid_argument);
  // Beyond the metric dimension: (alpha_1 alpha_2)^(q/2) rho = 1.
  CHECK(affinity_dim_uniform(t, 10.0) == doctest::Approx(2 * std::log(10.0) / -std::log(0.28077640640441515)));
}

TEST_CASE("property: closed-form roots solve Phi^q rho = 1") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> a(0.02, 0.98), r(1.0, 40.0);
  std::uniform_int_distribution<int> d(1, 6);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> sv(static_cast<std::size_t>(d(rng)));
    for (double& x : sv) x = a(rng);
    std::sort(sv.rbegin(), sv.rend());
    const double rho = r(rng);
    const double q = uniform_root(Svf::phi, sv, rho);
    CHECK(std::abs(phi(q, sv) * rho - 1.0) <= 1e-12);
    const double ql = uniform_root(Svf::psi, sv, rho);
    CHECK(std::abs(psi(ql, sv) * rho - 1.0) <= 1e-12);
    CHECK(ql <= q + 1e-12);
  }
}

TEST_CASE("spectral solver") {
  SUBCASE("uniform fixtures agree with the closed form at every level") {
    for (const char* name : {"main", "boundary"}) {
      const GifsGraph g = fixture(name);
      const double rho = spectral_radius(to_matrix(adjacency_matrix(g)));
      const double up = affinity_dim_uniform(g.edges().front().map.linear, rho);
      const double lo = lower_affinity_dim_uniform(g.edges().front().map.linear, rho);
      auto ru = spectral_roots(g, Svf::phi, 16, 1e-10);
      auto rl = spectral_roots(g, Svf::psi, 16, 1e-10);
      CHECK(ru.converged);
      for (auto [l, q] : ru.roots) CHECK(std::abs(q - up) <= 1e-6);
      for (auto [l, q] : rl.roots) CHECK(std::abs(q - lo) <= 1e-6);
    }
  }
  SUBCASE("similarity Cantor set") {
    auto g = one_vertex(R"([{"from": "v", "to": "v", "linear": "1/2"},
                             {"from": "v", "to": "v", "linear": "1/2", "translate": "1/2"}])");
    CHECK(affinity_dim_spectral(g, 8, 1e-12).affinity_dim == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("one self-loop") {
    auto g = one_vertex(R"([{"from": "v", "to": "v", "linear": "1/2"}])");
    CHECK(affinity_dim_spectral(g, 8, 1e-12).affinity_dim == doctest::Approx(0.0));
  }
  SUBCASE("two ratios: (1/2)^q + (1/4)^q = 1") {
    auto g = one_vertex(R"([{"from": "v", "to": "v", "linear": "1/2"},
                             {"from": "v", "to": "v", "linear": "1/4", "translate": "1/2"}])");
    const double golden = std::log((std::sqrt(5.0) - 1) / 2) / std::log(0.5);
    auto r = affinity_dim_spectral(g, 32, 1e-12);
    CHECK(r.affinity_dim == doctest::Approx(golden).epsilon(1e-10));
    CHECK_THROWS_AS(compute_dimensions(g, {}), HypothesisError);
  }
  SUBCASE("not strongly connected") {
    const GifsGraph g = parse_spec(kOpen);
    CHECK_THROWS_AS(affinity_dim_spectral(g, 8, 1e-9), HypothesisError);
    DimOptions opt;
    opt.assert_disjoint = true;
    CHECK_THROWS_AS(compute_dimensions(g, opt), HypothesisError);
  }
}

TEST_CASE("property: doubling roots bracket monotonically; serial equals parallel") {
  std::mt19937_64 rng(52);
  for (int i = 0; i < 30; ++i) {
    const GifsGraph g = random_gifs(rng, 2 + i % 3);
    auto up = spectral_roots(g, Svf::phi, 16, 1e-10, Exec::parallel);
    auto lo = spectral_roots(g, Svf::psi, 16, 1e-10, Exec::parallel);
    for (std::size_t k = 0; k < std::min(up.roots.size(), lo.roots.size()); ++k)
      CHECK(lo.roots[k].second <= up.roots[k].second + 1e-9);
    for (std::size_t k = 1; k < up.roots.size(); ++k) CHECK(up.roots[k].second <= up.roots[k - 1].second + 1e-9);
    for (std::size_t k = 1; k < lo.roots.size(); ++k) CHECK(lo.roots[k].second >= lo.roots[k - 1].second - 1e-9);
    auto serial = spectral_roots(g, Svf::phi, 16, 1e-10, Exec::serial);
    CHECK(serial.roots == up.roots);
  }
}

TEST_CASE("property: spectral and closed form agree on random uniform systems") {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 50; ++i) {
    const GifsGraph g = random_gifs(rng, 1);
    DimOptions closed, spectral;
    spectral.method = DimMethod::spectral_iter;
    const auto a = compute_dimensions(g, closed), b = compute_dimensions(g, spectral);
    CHECK(std::abs(a.affinity_dim - b.affinity_dim) <= 1e-6);
    CHECK(std::abs(a.lower_affinity_dim - b.lower_affinity_dim) <= 1e-6);
    double det = spectral_radius(to_matrix(adjacency_matrix(g)));
    for (double x : singular_values(g.edges().front().map.linear)) det *= x;
    if (det <= 1.0) CHECK(a.affinity_dim <= metric_dim(g.signature()) + 1e-12);
  }
}

TEST_CASE("partial-sum probe") {
  const GifsGraph g = fixture("boundary");
  CHECK(partial_sum_probe(g, 1.0, 60).growth == Growth::diverging);
  CHECK(partial_sum_probe(g, 1.3, 60).growth == Growth::converging);
  const auto at = partial_sum_probe(g, kBoundaryDim, 60);
  CHECK(at.growth != Growth::converging);
  CHECK(at.log_sums.size() == 61);
  CHECK_THROWS_AS(partial_sum_probe(g, 1.0, 1), std::invalid_argument);

  const auto r = partial_sum_dimension(g, 60);
  CHECK(r.bracket.first <= kBoundaryDim);
  CHECK(r.bracket.second >= kBoundaryDim);
  CHECK_FALSE(r.biased);
}

TEST_CASE("Hausdorff bounds") {
  auto [lo, up] = hausdorff_bounds(fixture("boundary"), true);
  CHECK(lo == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(up == doctest::Approx(kBoundaryDim).epsilon(1e-12));
  auto [lo2, up2] = hausdorff_bounds(fixture("main"), false);
  CHECK(lo2 == 0.0);
  CHECK(up2 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(hausdorff_bounds(parse_spec(kOpen), true), HypothesisError);
}

TEST_CASE("reports") {
  DimOptions opt;
  opt.assert_disjoint = true;
  const auto r = compute_dimensions(fixture("boundary"), opt);
  CHECK(r.to_json().find("\"affinity_dim\": 1.167493616") != std::string::npos);
  CHECK(r.to_table().find("1.000000000") != std::string::npos);
  CHECK(r.disjointness_asserted);
}
