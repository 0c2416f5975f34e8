#include "gifsdim/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "gifsdim/attractor.hpp"
#include "gifsdim/dimension.hpp"
#include "gifsdim/gifs.hpp"
#include "gifsdim/properties.hpp"
#include "gifsdim/render.hpp"

namespace gifsdim {

namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// alpha_1 alpha_2 rho(F) = 1 for the main system, in exact arithmetic.
Outcome main_affinity() {
  const GifsGraph g = fixture("main");
  DimOptions opt;
  const DimensionReport r = compute_dimensions(g, opt);
  const double err = std::abs(r.affinity_dim - 2.0);
  auto sv = exact_singular_values(g.edges().front().map.linear);
  bool identity = false;
  if (sv) {
    QuadraticNumber prod = exact_spectral_radius_2x2(adjacency_matrix(g));
    for (const auto& a : *sv) prod = prod * a;
    identity = prod == QuadraticNumber::rational(1);
  }
  return {err <= 1e-9 && identity,
          fmt("affinity dim %.9f (error %.1e), exact alpha_1 alpha_2 rho = 1 %s", r.affinity_dim, err,
              identity ? "holds" : "FAILS")};
}

Outcome boundary_dims() {
  const GifsGraph g = fixture("boundary");
  DimOptions opt;
  opt.assert_disjoint = true;
  const DimensionReport r = compute_dimensions(g, opt);
  const double expect = 1.0 + std::log(std::sqrt(17.0) - 3.0) / std::log(2.0);
  const double eu = std::abs(r.affinity_dim - expect), el = std::abs(r.lower_affinity_dim - 1.0);
  return {eu <= 1e-6 && el <= 1e-9, fmt("affinity %.9f (expected %.9f, error %.1e), lower %.9f (error %.1e)",
                                        r.affinity_dim, expect, eu, r.lower_affinity_dim, el)};
}

bool monotone(const std::vector<std::pair<int, double>>& roots, int direction, double slack) {
  for (std::size_t i = 1; i < roots.size(); ++i)
    if (direction * (roots[i].second - roots[i - 1].second) > slack) return false;
  return true;
}

Outcome solver_agreement(std::uint64_t seed) {
  constexpr double kTol = 1e-9;
  double worst = 0.0;
  int disagreements = 0, nonmonotone = 0, systems = 0;
  auto compare = [&](const GifsGraph& g) {
    ++systems;
    const double rho = spectral_radius(to_matrix(adjacency_matrix(g)));
    const DiagonalMap& t = g.edges().front().map.linear;
    const double cu = affinity_dim_uniform(t, rho), cl = lower_affinity_dim_uniform(t, rho);
    const auto up = spectral_roots(g, Svf::phi, 64, kTol);
    const auto lo = spectral_roots(g, Svf::psi, 64, kTol);
    const double e = std::max(std::abs(up.roots.back().second - cu), std::abs(lo.roots.back().second - cl));
    worst = std::max(worst, e);
    if (e > 1e-6) ++disagreements;
    if (!monotone(up.roots, +1, 2 * kTol) || !monotone(lo.roots, -1, 2 * kTol)) ++nonmonotone;
  };
  compare(fixture("main"));
  compare(fixture("boundary"));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 50; ++i) compare(random_gifs(rng, 1));

  // Systems with several linear parts have no closed form; only the
  // direction of the doubling sequence is checked there.
  int mixed = 0;
  for (int i = 0; i < 20; ++i) {
    const GifsGraph g = random_gifs(rng, 2 + i % 2);
    const auto up = spectral_roots(g, Svf::phi, 16, kTol);
    const auto lo = spectral_roots(g, Svf::psi, 16, kTol);
    ++mixed;
    if (!monotone(up.roots, +1, 2 * kTol) || !monotone(lo.roots, -1, 2 * kTol)) ++nonmonotone;
  }
  return {disagreements == 0 && nonmonotone == 0,
          fmt("%d uniform systems, max |spectral - closed| %.1e, %d disagreements; "
              "%d non-monotone root sequences over %d systems",
              systems, worst, disagreements, nonmonotone, systems + mixed)};
}

Outcome probe() {
  const GifsGraph g = fixture("boundary");
  const ProbeResult lo = partial_sum_probe(g, 1.0, 60);
  const ProbeResult hi = partial_sum_probe(g, 1.3, 60);
  return {lo.growth == Growth::diverging && hi.growth == Growth::converging,
          fmt("q = 1.0 %s (tail ratio %.6f), q = 1.3 %s (tail ratio %.6f)", to_string(lo.growth), lo.tail_ratio,
              to_string(hi.growth), hi.tail_ratio)};
}

Outcome hensel(std::int64_t selector) {
  const std::vector<BigInt> poly{-2, -3, 1};
  const PadicNumber lambda = hensel_lift(poly, 2, selector, 64);
  const std::string digits = lambda.to_digit_string().substr(0, 5);
  const PadicNumber r = evaluate(poly, lambda);
  const int agreed = r.is_zero() ? r.absolute_precision() : r.valuation();
  const Rational norm = lambda.norm();
  const bool pass = digits == "01101" && agreed >= 64 && norm == Rational(1, 2);
  std::ostringstream n;
  n << norm;
  return {pass, fmt("digits %s, f(lambda) = 0 mod 2^%d, norm %s", digits.c_str(), agreed, n.str().c_str())};
}

Outcome radii() {
  const double r1 = spectral_radius(std::vector<std::vector<double>>{{3, 2}, {1, 0}});
  const double e1 = std::abs(r1 - (3.0 + std::sqrt(17.0)) / 2.0);
  const double r2 = spectral_radius(to_matrix(adjacency_matrix(fixture("boundary"))));
  const double e2 = std::abs(r2 - 2.0);
  return {e1 <= 1e-9 && e2 <= 1e-12,
          fmt("rho([[3,2],[1,0]]) %.12f (error %.1e), rho(boundary) %.12f (error %.1e)", r1, e1, r2, e2)};
}

Outcome properties(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PropertyReport> all;
  all.push_back(ultrametric_suite(rng, 10000));
  for (auto& r : haar_scaling_suite(rng, 1000)) all.push_back(std::move(r));
  for (auto& r : multiplicativity_suite(rng, 1000)) all.push_back(std::move(r));
  all.push_back(power_identity_suite(rng, 1000));
  all.push_back(duality_suite(rng, 1000));
  long trials = 0, violations = 0;
  std::string first;
  for (const auto& r : all) {
    trials += r.trials;
    violations += r.violations;
    if (r.violations && first.empty()) first = "; first: " + r.name + " (" + r.first_failure + ")";
  }
  return {violations == 0,
          fmt("%zu suites, %ld trials, %ld violations", all.size(), trials, violations) + first};
}

Outcome geometry() {
  const GifsGraph g = fixture("main");
  const auto seeds = default_seeds(g);
  CountOptions fixed;
  fixed.depth = 9;
  const double main_slope = box_count_table(g, seeds, 4, 9, fixed).back().slope;

  const GifsGraph gb = fixture("boundary");
  CountOptions adaptive;
  adaptive.depth = 20;
  adaptive.adaptive = true;
  const double boundary_slope = box_count_table(gb, default_seeds(gb), 4, 9, adaptive).back().slope;

  std::vector<double> overlap;
  bool decreasing = true;
  for (int m = 4; m <= 8; ++m) {
    CountOptions o = fixed;
    o.resolution = m;
    o.vertex = 0;
    const CellSet a = count_cells(g, seeds, o);
    o.vertex = 1;
    const CellSet b = count_cells(g, seeds, o);
    overlap.push_back(overlap_fraction(a, b));
    if (overlap.size() > 1 && !(overlap.back() < overlap[overlap.size() - 2])) decreasing = false;
  }
  std::string ov;
  for (double x : overlap) ov += fmt("%s%.4f", ov.empty() ? "" : " ", x);
  const bool pass = main_slope >= 1.85 && main_slope <= 2.05 && boundary_slope >= 0.9 && boundary_slope <= 1.35 &&
                    decreasing;
  return {pass, fmt("main slope %.4f, boundary slope %.4f, overlap m=4..8: ", main_slope, boundary_slope) + ov};
}

Outcome artifacts() {
  const GifsGraph g = fixture("main");
  const GifsGraph gb = fixture("boundary");
  auto draw = [&] {
    const BoxCover cm = iterate_cover(g, default_seeds(g), 8);
    const BoxCover cb = iterate_cover(gb, default_seeds(gb), 8);
    std::vector<Layer> layers{{&cm, {kOmegaA, kOmegaB}}, {&cb, {kBoundary}}};
    ImageSpec spec;
    fit_real_range(layers, spec);
    return render_cover(layers, spec);
  };
  const std::string first = draw(), second = draw();
  const double share = pixel_share(first, kBoundary);
  const std::string dot = emit_dot(gb);
  int nodes = 0, edges = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find(" -> ") != std::string::npos)
      ++edges;
    else if (!line.empty() && line.back() == ';')
      ++nodes;
  }
  const bool pass = first == second && share > 0.005 && share < 0.15 && nodes == 5 && edges == 10;
  return {pass, fmt("render %s (%zu bytes, boundary share %.4f), DOT %d nodes %d edges",
                    first == second ? "byte-stable" : "DIFFERS", first.size(), share, nodes, edges)};
}

Outcome dual() {
  const GifsGraph g = fixture("main");
  Box window;
  window.reals = {{-3.0, 3.0}};
  window.padics = {{PadicNumber::zero(2), -1}};
  const std::vector<std::set<ExactPoint>> start(g.vertex_count(), {ExactPoint(2, QuadraticNumber::rational(0))});
  const auto x1 = dual_step(g, start, window);
  const QuadraticNumber zero = QuadraticNumber::rational(0), half = QuadraticNumber::rational(1, 2);
  const std::set<ExactPoint> expect{{zero, zero}, {half, half}};
  const bool first_ok = x1[static_cast<std::size_t>(g.vertex_index("b"))] == expect;

  const PointSetPair x = dual_iterate(g, window);
  const BoxCover cover = iterate_cover(g, default_seeds(g), 8);
  Box unit;
  unit.reals = {{0.0, 1.0}};
  unit.padics = {{PadicNumber::zero(2), 0}};
  const double coverage = tiling_cover_check(g, x, cover, unit, 5);
  return {first_ok && coverage >= 0.95,
          fmt("first X_b %s, fixed point after %d steps, coverage of [0,1] x Z_2 at m = 5: %.4f",
              first_ok ? "= {(0,0), (1/2,1/2)}" : "WRONG", x.iterations, coverage)};
}

struct Criterion {
  const char* name;
  double budget;
  std::function<Outcome(const AcceptanceOptions&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"main affinity dimension", 1, [](const AcceptanceOptions&) { return main_affinity(); }},
      {"boundary dimensions", 1, [](const AcceptanceOptions&) { return boundary_dims(); }},
      {"solver cross-validation", 60, [](const AcceptanceOptions& o) { return solver_agreement(o.seed); }},
      {"partial-sum probe", 5, [](const AcceptanceOptions&) { return probe(); }},
      {"2-adic lambda", 1, [](const AcceptanceOptions& o) { return hensel(o.lambda_selector); }},
      {"spectral radii", 1, [](const AcceptanceOptions&) { return radii(); }},
      {"property suites", 60, [](const AcceptanceOptions& o) { return properties(o.seed); }},
      {"numerical geometry", 300, [](const AcceptanceOptions&) { return geometry(); }},
      {"artifacts", 30, [](const AcceptanceOptions&) { return artifacts(); }},
      {"dual sets and tiling", 120, [](const AcceptanceOptions&) { return dual(); }},
  };
  return list;
}

}  // namespace

CheckResult run_check(int id, const AcceptanceOptions& opt) {
  if (id < 1 || id > static_cast<int>(criteria().size()))
    throw std::invalid_argument("run_check: no criterion " + std::to_string(id));
  const Criterion& c = criteria()[static_cast<std::size_t>(id - 1)];
  CheckResult r;
  r.id = id;
  r.name = c.name;
  r.budget = c.budget;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = c.run(opt);
    r.pass = o.pass;
    r.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds > r.budget) {
    r.pass = false;
    r.detail += fmt("; over the %.0f s budget", r.budget);
  }
  return r;
}

std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CheckResult> out;
  for (int id = 1; id <= static_cast<int>(criteria().size()); ++id) out.push_back(run_check(id, opt));
  return out;
}

std::string format_result(const CheckResult& r) {
  return fmt("criterion %2d  %s  ", r.id, r.pass ? "PASS" : "FAIL") + r.name + ": " + r.detail +
         fmt("  (%.2f s)", r.seconds);
}

}  // namespace gifsdim
