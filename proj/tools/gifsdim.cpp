// Command-line front end: dimensions, covers, box counts, pictures, graphs,
// dual point sets and the acceptance checks.
//
// Exit codes: 0 success, 1 I/O, parse or usage error, 2 a mathematical
// hypothesis does not hold, 3 a verify check failed.

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gifsdim/acceptance.hpp"
#include "gifsdim/attractor.hpp"
#include "gifsdim/dimension.hpp"
#include "gifsdim/errors.hpp"
#include "gifsdim/gifs.hpp"
#include "gifsdim/render.hpp"

using namespace gifsdim;

namespace {

struct Source {
  std::string fixture;
  std::string path;
};

void add_source(CLI::App* cmd, Source& src) {
  cmd->add_option("spec", src.path, "GIFS spec file (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--fixture", src.fixture, "built-in system")
      ->check(CLI::IsMember({"main", "boundary-full", "boundary"}));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GifsGraph load(const Source& src) {
  if (!src.fixture.empty() && !src.path.empty()) throw std::invalid_argument("give either a spec file or --fixture");
  if (!src.fixture.empty()) return fixture(src.fixture);
  if (src.path.empty()) throw std::invalid_argument("no system given: pass a spec file or --fixture");
  return parse_spec(read_file(src.path));
}

void emit(const std::string& out, const std::string& data) {
  if (out.empty() || out == "-") {
    std::cout << data;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write " + out);
  f << data;
  if (!f) throw std::ios_base::failure("write failed: " + out);
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw std::invalid_argument("not an integer: " + std::string(s));
  return v;
}

// "m" or "a..b"
std::pair<int, int> parse_range(const std::string& s) {
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    int m = parse_int(s);
    return {m, m};
  }
  int a = parse_int(std::string_view(s).substr(0, dots));
  int b = parse_int(std::string_view(s).substr(dots + 2));
  if (a > b) throw std::invalid_argument("empty resolution range " + s);
  return {a, b};
}

// Comma-separated, one entry per real or p-adic coordinate in order:
// "lo:hi" for a real interval, an integer e for the ball p^e Z_p.
Box parse_window(const std::string& text, const SpaceSignature& sig) {
  if (sig.complex > 0) throw std::invalid_argument("windows are only defined without complex coordinates");
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  if (static_cast<int>(parts.size()) != sig.real + sig.padic())
    throw std::invalid_argument("window needs " + std::to_string(sig.real + sig.padic()) + " entries: " + text);
  Box w;
  for (int i = 0; i < sig.real; ++i) {
    const auto& p = parts[static_cast<std::size_t>(i)];
    auto colon = p.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("real window entry must be lo:hi, got " + p);
    w.reals.push_back({std::stod(p.substr(0, colon)), std::stod(p.substr(colon + 1))});
  }
  for (int k = 0; k < sig.padic(); ++k)
    w.padics.push_back({PadicNumber::zero(sig.primes[static_cast<std::size_t>(k)]),
                        parse_int(parts[static_cast<std::size_t>(sig.real + k)])});
  return w;
}

std::string default_window(const SpaceSignature& sig, const char* real, const char* padic) {
  std::string out;
  for (int i = 0; i < sig.real + sig.padic(); ++i) {
    if (i) out += ",";
    out += i < sig.real ? real : padic;
  }
  return out;
}

Exec exec_of(bool serial) { return serial ? Exec::serial : Exec::parallel; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimensions and pictures of graph-directed IFS in mixed Euclidean and p-adic spaces"};
  app.require_subcommand(1);

  // dim
  Source dim_src;
  std::string method = "closed", dim_out;
  DimOptions dim_opt;
  bool json = false;
  auto* dim = app.add_subcommand("dim", "affinity dimensions and Hausdorff bounds");
  add_source(dim, dim_src);
  dim->add_option("--method", method, "closed, spectral or partial")
      ->check(CLI::IsMember({"closed", "spectral", "partial"}));
  dim->add_option("--tol", dim_opt.tol, "solver tolerance")->capture_default_str();
  dim->add_option("--lmax", dim_opt.lmax, "longest path length of the spectral solver")->capture_default_str();
  dim->add_option("--length", dim_opt.partial_length, "path length L of the partial-sum probe")
      ->capture_default_str();
  dim->add_flag("--assert-disjoint", dim_opt.assert_disjoint,
                "take the unions and solution sets as disjoint (enables the lower bound)");
  dim->add_flag("--json", json, "JSON instead of a table");
  dim->add_option("--out", dim_out, "output file (default stdout)");

  // attract
  Source att_src;
  int att_depth = 8;
  bool att_serial = false;
  std::string att_out;
  auto* attract = app.add_subcommand("attract", "depth-l cover of the attractor as CSV");
  add_source(attract, att_src);
  attract->add_option("--depth", att_depth, "path length")->capture_default_str()->check(CLI::Range(0, 30));
  attract->add_flag("--serial", att_serial, "use the serial reference");
  attract->add_option("--out", att_out, "output file (default stdout)");

  // boxcount
  Source bc_src;
  std::string bc_res = "4..9", bc_out, bc_vertex;
  CountOptions bc_opt;
  bc_opt.depth = 9;
  auto* boxcount = app.add_subcommand("boxcount", "box counts and slope estimates as CSV");
  add_source(boxcount, bc_src);
  boxcount->add_option("--depth", bc_opt.depth, "path length (cap when adaptive)")->capture_default_str();
  boxcount->add_option("--resolution", bc_res, "m or a..b")->capture_default_str();
  boxcount->add_flag("--adaptive", bc_opt.adaptive, "stop each path once its box fits in a cell");
  boxcount->add_option("--vertex", bc_vertex, "count one vertex's attractor (default the union)");
  boxcount->add_option("--out", bc_out, "output file (default stdout)");

  // render
  Source r_src;
  int r_depth = 8;
  std::string r_out, r_overlay, r_xrange;
  bool r_svg = false;
  ImageSpec r_spec;
  auto* render = app.add_subcommand("render", "picture of the covers (PPM, or SVG)");
  add_source(render, r_src);
  render->add_option("--depth", r_depth, "path length")->capture_default_str()->check(CLI::Range(0, 24));
  render->add_option("--width", r_spec.width)->capture_default_str();
  render->add_option("--height", r_spec.height)->capture_default_str();
  render->add_option("--base", r_spec.base, "Cantor embedding base (default the prime)");
  render->add_option("--overlay", r_overlay,
                     "fixture or spec drawn on top in black; defaults to 'boundary' for --fixture main, 'none' "
                     "turns it off");
  render->add_option("--x-range", r_xrange, "real axis range lo:hi (default: fit the covers)");
  render->add_flag("--svg", r_svg, "SVG instead of PPM");
  render->add_option("--out", r_out, "output file")->required();

  // graph
  Source g_src;
  std::string g_format = "dot", g_out;
  auto* graph = app.add_subcommand("graph", "the directed graph as DOT or JSON");
  add_source(graph, g_src);
  graph->add_option("--format", g_format)->check(CLI::IsMember({"dot", "json"}))->capture_default_str();
  graph->add_option("--out", g_out, "output file (default stdout)");

  // dual
  Source d_src;
  std::string d_window, d_out, d_check_window;
  int d_depth = 8, d_res = 5;
  std::size_t d_max = 1000000;
  bool d_coverage = false;
  auto* dualc = app.add_subcommand("dual", "point sets of the dual system as CSV");
  add_source(dualc, d_src);
  dualc->add_option("--window", d_window,
                    "comma list in coordinate order: lo:hi per real, exponent e (ball p^e Z_p) per p-adic; "
                    "default -3:3 and -1");
  dualc->add_option("--max-points", d_max)->capture_default_str();
  dualc->add_flag("--coverage", d_coverage, "also report how much of --check-window the translated covers reach");
  dualc->add_option("--check-window", d_check_window, "window of the coverage check (default 0:1 and 0)");
  dualc->add_option("--depth", d_depth, "cover depth for --coverage")->capture_default_str();
  dualc->add_option("--resolution", d_res, "grid resolution for --coverage")->capture_default_str();
  dualc->add_option("--out", d_out, "output file (default stdout)");

  // verify
  AcceptanceOptions v_opt;
  int v_only = 0;
  auto* verify = app.add_subcommand("verify", "run the acceptance checks");
  verify->add_option("--only", v_only, "run a single check (1-10)")->check(CLI::Range(1, 10));
  verify->add_option("--seed", v_opt.seed, "seed of the randomized suites")->capture_default_str();
  verify->add_option("--lambda-selector", v_opt.lambda_selector)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*dim) {
      const GifsGraph g = load(dim_src);
      dim_opt.method = method == "closed"     ? DimMethod::closed_form
                       : method == "spectral" ? DimMethod::spectral_iter
                                              : DimMethod::partial_sum;
      const DimensionReport r = compute_dimensions(g, dim_opt);
      emit(dim_out, json ? r.to_json() : r.to_table());
    } else if (*attract) {
      const GifsGraph g = load(att_src);
      emit(att_out, cover_csv(iterate_cover(g, default_seeds(g), att_depth, exec_of(att_serial))));
    } else if (*boxcount) {
      const GifsGraph g = load(bc_src);
      if (!bc_vertex.empty()) bc_opt.vertex = g.vertex_index(bc_vertex);
      auto [lo, hi] = parse_range(bc_res);
      emit(bc_out, box_count_csv(box_count_table(g, default_seeds(g), lo, hi, bc_opt)));
    } else if (*render) {
      const GifsGraph g = load(r_src);
      if (r_overlay.empty()) r_overlay = r_src.fixture == "main" ? "boundary" : "none";
      const BoxCover cover = iterate_cover(g, default_seeds(g), r_depth);
      std::vector<Rgb> palette{kOmegaA, kOmegaB};
      if (g.vertex_count() > 2) palette = {kOmegaA};
      std::vector<Layer> layers{{&cover, palette}};
      BoxCover overlay;
      if (r_overlay != "none") {
        Source o;
        (r_overlay == "main" || r_overlay == "boundary" || r_overlay == "boundary-full" ? o.fixture : o.path) =
            r_overlay;
        const GifsGraph go = load(o);
        overlay = iterate_cover(go, default_seeds(go), r_depth);
        layers.push_back({&overlay, {kBoundary}});
      }
      if (!r_xrange.empty()) {
        auto colon = r_xrange.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("--x-range must be lo:hi");
        r_spec.x0 = std::stod(r_xrange.substr(0, colon));
        r_spec.x1 = std::stod(r_xrange.substr(colon + 1));
      } else {
        fit_real_range(layers, r_spec);
      }
      emit(r_out, r_svg ? render_svg(layers, r_spec) : render_cover(layers, r_spec));
    } else if (*graph) {
      const GifsGraph g = load(g_src);
      emit(g_out, g_format == "dot" ? emit_dot(g) : emit_graph_json(g));
    } else if (*dualc) {
      const GifsGraph g = load(d_src);
      const auto& sig = g.signature();
      const Box window = parse_window(d_window.empty() ? default_window(sig, "-3:3", "-1") : d_window, sig);
      const PointSetPair x = dual_iterate(g, window, d_max);
      emit(d_out, points_csv(x));
      if (d_coverage) {
        const Box check = parse_window(d_check_window.empty() ? default_window(sig, "0:1", "0") : d_check_window, sig);
        const BoxCover cover = iterate_cover(g, default_seeds(g), d_depth);
        std::ostream& os = d_out.empty() || d_out == "-" ? std::cerr : std::cout;
        os << "iterations " << x.iterations << "\n";
        os << std::fixed;
        os.precision(9);
        os << "coverage " << tiling_cover_check(g, x, cover, check, d_res) << "\n";
      }
    } else if (*verify) {
      bool ok = true;
      for (int id = 1; id <= 10; ++id) {
        if (v_only && id != v_only) continue;
        const CheckResult r = run_check(id, v_opt);
        std::cout << format_result(r) << std::endl;
        ok = ok && r.pass;
      }
      return ok ? 0 : 3;
    }
  } catch (const HypothesisError& e) {
    std::cerr << "gifsdim: hypothesis violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gifsdim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
