#include "gifsdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "gifsdim/errors.hpp"
#include "gifsdim/svf.hpp"

namespace gifsdim {

const char* to_string(DimMethod m) {
  switch (m) {
    case DimMethod::closed_form: return "closed_form";
    case DimMethod::spectral_iter: return "spectral_iter";
    case DimMethod::partial_sum: return "partial_sum";
  }
  return "?";
}

const char* to_string(Growth g) {
  switch (g) {
    case Growth::diverging: return "diverging";
    case Growth::converging: return "converging";
    case Growth::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_svf(Svf kind, double q, std::span<const double> log_alphas) {
  return kind == Svf::phi ? log_phi(q, log_alphas) : log_psi(q, log_alphas);
}

// Logs of |a_i| per coordinate, complex ones twice, in coordinate order.
std::vector<double> coordinate_logs(const DiagonalMap& t) {
  std::vector<double> out;
  for (double a : t.reals) out.push_back(std::log(std::abs(a)));
  for (auto a : t.complexes) {
    out.push_back(std::log(std::abs(a)));
    out.push_back(std::log(std::abs(a)));
  }
  for (const auto& a : t.padics)
    out.push_back(-static_cast<double>(a.valuation()) * std::log(static_cast<double>(a.prime())));
  return out;
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Decreasing function bisection: largest q with f(q) > 0, or 0 if f(0) <= 0.
template <typename F>
double decreasing_root(F f, double hi) {
  if (f(0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  while (f(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("dimension solver: no root below 1e9");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Edges grouped by linear part. Diagonal maps commute, so T_w depends only
// on how often each class occurs along w.
struct LinearClasses {
  std::vector<int> of_edge;
  std::vector<std::vector<double>> logs;  // per class, coordinate order
};

LinearClasses linear_classes(const GifsGraph& g) {
  LinearClasses lc;
  std::vector<int> reps;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& t = g.edges()[e].map.linear;
    int found = -1;
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (same_linear_part(t, g.edges()[reps[c]].map.linear)) found = static_cast<int>(c);
    if (found < 0) {
      found = static_cast<int>(reps.size());
      reps.push_back(static_cast<int>(e));
      lc.logs.push_back(coordinate_logs(t));
    }
    lc.of_edge.push_back(found);
  }
  return lc;
}

// Paths of one length from a fixed start, aggregated by (end vertex,
// class counts), with log path counts.
using StateMap = std::map<std::pair<int, std::vector<int>>, double>;

struct Term {
  int end;
  double log_count;
  std::vector<double> log_alphas;  // descending
};

StateMap advance(const GifsGraph& g, const LinearClasses& lc, const StateMap& states) {
  StateMap next;
  for (const auto& [key, lc_count] : states) {
    for (int e : g.outgoing(key.first)) {
      auto counts = key.second;
      ++counts[static_cast<std::size_t>(lc.of_edge[static_cast<std::size_t>(e)])];
      auto [it, fresh] = next.try_emplace({g.edges()[e].to, std::move(counts)}, lc_count);
      if (!fresh) it->second = log_add(it->second, lc_count);
    }
  }
  return next;
}

std::vector<Term> terms_of(const LinearClasses& lc, const StateMap& states) {
  std::vector<Term> out;
  const std::size_t d = lc.logs.empty() ? 0 : lc.logs.front().size();
  for (const auto& [key, log_count] : states) {
    std::vector<double> la(d, 0.0);
    for (std::size_t c = 0; c < key.second.size(); ++c)
      for (std::size_t i = 0; i < d; ++i) la[i] += key.second[c] * lc.logs[c][i];
    out.push_back({key.first, log_count, sorted_desc(std::move(la))});
  }
  return out;
}

// (1/l) log rho(M_l(q)) from per-start term lists.
double log_growth(const std::vector<std::vector<Term>>& rows, std::size_t n, Svf kind, double q, int l) {
  std::vector<double> logm(n * n, kNegInf);
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& t : rows[i]) {
      double& cell = logm[i * n + static_cast<std::size_t>(t.end)];
      cell = log_add(cell, t.log_count + log_svf(kind, q, t.log_alphas));
    }
  const double top = *std::max_element(logm.begin(), logm.end());
  if (top == kNegInf) return kNegInf;
  Matrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = std::exp(logm[i * n + j] - top);
  return (top + std::log(spectral_radius(m))) / l;
}

std::size_t coordinate_count(const GifsGraph& g) {
  return static_cast<std::size_t>(metric_dim(g.signature()));
}

void require_strongly_connected(const GifsGraph& g, const char* what) {
  if (!is_strongly_connected(g)) throw HypothesisError(std::string(what) + ": graph is not strongly connected");
}

std::string fmt9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  return buf;
}

}  // namespace

double uniform_root(Svf kind, std::span<const double> alphas, double rho) {
  if (!(rho >= 1.0)) throw std::invalid_argument("uniform dimension: rho must be >= 1");
  if (alphas.empty()) throw std::invalid_argument("uniform dimension: no singular values");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("uniform dimension: singular values must lie in (0,1)");
  const double lr = std::log(rho);
  if (lr == 0.0) return 0.0;
  const std::size_t d = alphas.size();
  double partial = 0.0;
  for (std::size_t j = 1; j <= d; ++j) {
    const double l = std::log(kind == Svf::phi ? alphas[j - 1] : alphas[d - j]);
    if (partial + l + lr <= 0.0) return static_cast<double>(j - 1) + (-lr - partial) / l;
    partial += l;
  }
  return -static_cast<double>(d) * lr / partial;
}

double affinity_dim_uniform(const DiagonalMap& t, double rho) {
  if (!is_contracting(t) || !is_nonsingular(t))
    throw std::invalid_argument("affinity_dim_uniform: map must be contracting and non-singular");
  auto sv = singular_values(t);
  return uniform_root(Svf::phi, sv, rho);
}

double lower_affinity_dim_uniform(const DiagonalMap& t, double rho) {
  if (!is_contracting(t) || !is_nonsingular(t))
    throw std::invalid_argument("lower_affinity_dim_uniform: map must be contracting and non-singular");
  auto sv = singular_values(t);
  return uniform_root(Svf::psi, sv, rho);
}

SpectralRoots spectral_roots(const GifsGraph& g, Svf kind, int lmax, double tol, Exec exec) {
  require_strongly_connected(g, "spectral solver");
  if (lmax < 1) throw std::invalid_argument("spectral solver: lmax must be >= 1");
  const auto lc = linear_classes(g);
  const std::size_t n = g.vertex_count();
  const int n_int = static_cast<int>(n);
  const double hi = static_cast<double>(coordinate_count(g)) + 64.0;

  std::vector<StateMap> states(n);
  for (std::size_t i = 0; i < n; ++i) states[i][{static_cast<int>(i), std::vector<int>(lc.logs.size(), 0)}] = 0.0;
  std::vector<std::vector<Term>> rows(n);

  SpectralRoots out;
  int l = 0;
  for (int target = 1; target <= lmax; target *= 2) {
    const int steps = target - l;
    auto step_row = [&](int i) {
      for (int s = 0; s < steps; ++s) states[i] = advance(g, lc, states[i]);
      rows[i] = terms_of(lc, states[i]);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < n_int; ++i) step_row(i);
    } else {
      for (int i = 0; i < n_int; ++i) step_row(i);
    }
    l = target;
    const double root = decreasing_root([&](double q) { return log_growth(rows, n, kind, q, l); }, hi);
    out.roots.emplace_back(l, root);
    if (out.roots.size() >= 2 && std::abs(root - out.roots[out.roots.size() - 2].second) < tol) {
      out.converged = true;
      break;
    }
    if (target > lmax / 2) break;
  }
  return out;
}

namespace {

DimensionReport spectral_report(const GifsGraph& g, int lmax, double tol, Exec exec, bool upper, bool lower) {
  DimensionReport r;
  r.method = DimMethod::spectral_iter;
  r.converged = true;
  auto bracket_of = [](const SpectralRoots& s) {
    const double last = s.roots.back().second;
    const double prev = s.roots.size() >= 2 ? s.roots[s.roots.size() - 2].second : last;
    return std::make_pair(std::min(last, prev), std::max(last, prev));
  };
  if (upper) {
    auto s = spectral_roots(g, Svf::phi, lmax, tol, exec);
    r.upper_roots = s.roots;
    r.affinity_dim = s.roots.back().second;
    r.bracket = bracket_of(s);
    r.levels = s.roots.back().first;
    r.converged = r.converged && s.converged;
  }
  if (lower) {
    auto s = spectral_roots(g, Svf::psi, lmax, tol, exec);
    r.lower_roots = s.roots;
    r.lower_affinity_dim = s.roots.back().second;
    r.lower_bracket = bracket_of(s);
    r.levels = std::max(r.levels, s.roots.back().first);
    r.converged = r.converged && s.converged;
  }
  return r;
}

ProbeResult probe(const GifsGraph& g, Svf kind, double q, int L, double tol) {
  if (L < 2) throw std::invalid_argument("partial_sum_probe: L must be >= 2");
  if (!(q >= 0.0)) throw std::invalid_argument("partial_sum_probe: q must be >= 0");
  const std::size_t n = g.vertex_count();
  std::vector<double> weight;
  for (const auto& e : g.edges()) weight.push_back(std::exp(log_svf(kind, q, sorted_desc(coordinate_logs(e.map.linear)))));

  ProbeResult r;
  r.biased = !g.has_uniform_linear_part();
  std::vector<double> s(n, 1.0), next(n);
  double scale = 0.0;  // log of the factor divided out of s
  r.log_sums.push_back(std::log(static_cast<double>(n)));
  for (int l = 1; l <= L; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int e : g.outgoing(static_cast<int>(i))) acc += weight[e] * s[g.edges()[e].to];
      next[i] = acc;
    }
    const double top = *std::max_element(next.begin(), next.end());
    if (top == 0.0) {
      r.log_sums.push_back(kNegInf);
      s.assign(n, 0.0);
      continue;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = next[i] / top;
      sum += s[i];
    }
    scale += std::log(top);
    r.log_sums.push_back(scale + std::log(sum));
  }
  const int h = L / 2;
  const double a = r.log_sums[h], b = r.log_sums[L];
  r.tail_ratio = (b == kNegInf) ? 0.0 : std::exp((b - a) / (L - h));
  if (r.tail_ratio > 1.0 + 10.0 * tol)
    r.growth = Growth::diverging;
  else if (r.tail_ratio < 1.0 - 10.0 * tol)
    r.growth = Growth::converging;
  else
    r.growth = Growth::inconclusive;
  return r;
}

}  // namespace

DimensionReport affinity_dim_spectral(const GifsGraph& g, int lmax, double tol, Exec exec) {
  return spectral_report(g, lmax, tol, exec, true, false);
}

DimensionReport lower_affinity_dim_spectral(const GifsGraph& g, int lmax, double tol, Exec exec) {
  return spectral_report(g, lmax, tol, exec, false, true);
}

ProbeResult partial_sum_probe(const GifsGraph& g, double q, int L, double tol) {
  return probe(g, Svf::phi, q, L, tol);
}

DimensionReport partial_sum_dimension(const GifsGraph& g, int L, double tol) {
  DimensionReport r;
  r.method = DimMethod::partial_sum;
  r.levels = L;
  r.biased = !g.has_uniform_linear_part();
  const double hi = static_cast<double>(coordinate_count(g)) + 64.0;
  auto solve = [&](Svf kind, double level) {
    return decreasing_root([&](double q) { return std::log(probe(g, kind, q, L, tol).tail_ratio) - level; }, hi);
  };
  const double up = std::log1p(10.0 * tol), down = std::log1p(-10.0 * tol);
  r.affinity_dim = solve(Svf::phi, 0.0);
  r.bracket = {solve(Svf::phi, up), solve(Svf::phi, down)};
  r.lower_affinity_dim = solve(Svf::psi, 0.0);
  r.lower_bracket = {solve(Svf::psi, up), solve(Svf::psi, down)};
  return r;
}

DimensionReport compute_dimensions(const GifsGraph& g, const DimOptions& opt) {
  const bool connected = is_strongly_connected(g);
  if (opt.assert_disjoint && !connected)
    throw HypothesisError("disjointness asserted on a graph that is not strongly connected");
  DimensionReport r;
  switch (opt.method) {
    case DimMethod::closed_form: {
      if (g.edges().empty()) break;
      if (!g.has_uniform_linear_part()) throw HypothesisError("closed form needs every map to share its linear part");
      const double rho = spectral_radius(to_matrix(adjacency_matrix(g)));
      const auto& t = g.edges().front().map.linear;
      // rho < 1 only for graphs without cycles, whose attractor is empty.
      if (rho < 1.0) throw HypothesisError("closed form: rho(F) < 1, the graph has no cycles");
      r.affinity_dim = affinity_dim_uniform(t, rho);
      r.lower_affinity_dim = lower_affinity_dim_uniform(t, rho);
      r.bracket = {r.affinity_dim, r.affinity_dim};
      r.lower_bracket = {r.lower_affinity_dim, r.lower_affinity_dim};
      break;
    }
    case DimMethod::spectral_iter:
      r = spectral_report(g, opt.lmax, opt.tol, Exec::parallel, true, true);
      break;
    case DimMethod::partial_sum:
      r = partial_sum_dimension(g, opt.partial_length, opt.tol);
      break;
  }
  r.method = opt.method;
  r.disjointness_asserted = opt.assert_disjoint;
  r.hausdorff_upper = r.affinity_dim;
  r.hausdorff_lower = opt.assert_disjoint ? r.lower_affinity_dim : 0.0;
  return r;
}

std::pair<double, double> hausdorff_bounds(const GifsGraph& g, bool assert_disjoint, const DimOptions& opt) {
  DimOptions o = opt;
  o.assert_disjoint = assert_disjoint;
  auto r = compute_dimensions(g, o);
  return {r.hausdorff_lower, r.hausdorff_upper};
}

std::string DimensionReport::to_json() const {
  auto roots = [](const std::vector<std::pair<int, double>>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? ", " : "") + std::string("[") + std::to_string(v[i].first) + ", " + fmt9(v[i].second) + "]";
    return s + "]";
  };
  std::ostringstream os;
  os << "{\n"
     << "  \"method\": \"" << to_string(method) << "\",\n"
     << "  \"affinity_dim\": " << fmt9(affinity_dim) << ",\n"
     << "  \"lower_affinity_dim\": " << fmt9(lower_affinity_dim) << ",\n"
     << "  \"bracket\": [" << fmt9(bracket.first) << ", " << fmt9(bracket.second) << "],\n"
     << "  \"lower_bracket\": [" << fmt9(lower_bracket.first) << ", " << fmt9(lower_bracket.second) << "],\n"
     << "  \"levels\": " << levels << ",\n"
     << "  \"upper_roots\": " << roots(upper_roots) << ",\n"
     << "  \"lower_roots\": " << roots(lower_roots) << ",\n"
     << "  \"converged\": " << (converged ? "true" : "false") << ",\n"
     << "  \"biased\": " << (biased ? "true" : "false") << ",\n"
     << "  \"disjointness_asserted\": " << (disjointness_asserted ? "true" : "false") << ",\n"
     << "  \"hausdorff_lower\": " << fmt9(hausdorff_lower) << ",\n"
     << "  \"hausdorff_upper\": " << fmt9(hausdorff_upper) << "\n"
     << "}\n";
  return os.str();
}

std::string DimensionReport::to_table() const {
  std::ostringstream os;
  auto row = [&](const char* k, const std::string& v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-22s", k);
    os << buf << v << "\n";
  };
  row("method", to_string(method));
  row("affinity_dim", fmt9(affinity_dim));
  row("lower_affinity_dim", fmt9(lower_affinity_dim));
  row("bracket", "[" + fmt9(bracket.first) + ", " + fmt9(bracket.second) + "]");
  row("lower_bracket", "[" + fmt9(lower_bracket.first) + ", " + fmt9(lower_bracket.second) + "]");
  if (method != DimMethod::closed_form) row("levels", std::to_string(levels));
  if (method == DimMethod::spectral_iter) row("converged", converged ? "yes" : "no");
  if (method == DimMethod::partial_sum) row("biased", biased ? "yes" : "no");
  row("disjointness", disjointness_asserted ? "asserted by user" : "not asserted");
  row("hausdorff_bounds", "[" + fmt9(hausdorff_lower) + ", " + fmt9(hausdorff_upper) + "]");
  return os.str();
}

}  // namespace gifsdim
