#include "gifsdim/gifs.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "gifsdim/errors.hpp"

namespace gifsdim {

namespace {

bool same_point(const Point& x, const Point& y) {
  return x.reals == y.reals && x.complexes == y.complexes && x.padics == y.padics;
}

bool same_map(const AffineMap& f, const AffineMap& g) {
  return f.linear.reals == g.linear.reals && f.linear.complexes == g.linear.complexes &&
         f.linear.padics == g.linear.padics && f.linear.exact == g.linear.exact &&
         same_point(f.translate, g.translate) && f.exact_translate == g.exact_translate;
}

AffineMap identity_map(const SpaceSignature& sig) {
  AffineMap f;
  f.linear = DiagonalMap::identity(sig);
  f.translate = zero_point(sig);
  if (sig.complex == 0) {
    f.exact_translate.reals.assign(static_cast<std::size_t>(sig.real), QuadraticNumber::rational(0));
    f.exact_translate.padics.assign(sig.primes.size(), QuadraticNumber::rational(0));
  }
  return f;
}

}  // namespace

GifsGraph::GifsGraph(SpaceSignature signature, std::vector<std::string> vertices, std::vector<Edge> edges,
                     std::vector<PadicEmbedding> embeddings)
    : signature_(std::move(signature)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      embeddings_(std::move(embeddings)) {
  signature_.validate();
  std::set<std::string> names(vertices_.begin(), vertices_.end());
  if (names.size() != vertices_.size()) throw std::invalid_argument("GIFS: duplicate vertex names");
  const int n = static_cast<int>(vertices_.size());

  bool all_zero = std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.label == 0; });
  if (all_zero)
    for (std::size_t i = 0; i < edges_.size(); ++i) edges_[i].label = static_cast<int>(i);
  std::set<int> labels;
  for (const auto& e : edges_) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw std::invalid_argument("GIFS: edge references an unknown vertex");
    if (!labels.insert(e.label).second) throw std::invalid_argument("GIFS: duplicate edge label");
    if (!(signature_of(e.map.linear) == signature_) || !(signature_of(e.map.translate) == signature_))
      throw std::invalid_argument("GIFS: edge map signature does not match the space");
    if (!is_contracting(e.map.linear))
      throw HypothesisError("GIFS: edge '" + e.name + "' is not contracting");
    if (!is_nonsingular(e.map.linear))
      throw HypothesisError("GIFS: edge '" + e.name + "' is singular");
  }
  outgoing_.assign(vertices_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) outgoing_[edges_[i].from].push_back(static_cast<int>(i));
  for (auto& out : outgoing_)
    std::sort(out.begin(), out.end(), [&](int a, int b) { return edges_[a].label < edges_[b].label; });
}

int GifsGraph::vertex_index(std::string_view name) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("GIFS: unknown vertex '" + std::string(name) + "'");
}

const PadicEmbedding* GifsGraph::embedding_for(std::size_t padic_index) const {
  if (padic_index >= signature_.primes.size()) return nullptr;
  for (const auto& e : embeddings_)
    if (e.prime() == signature_.primes[padic_index]) return &e;
  return nullptr;
}

bool same_linear_part(const DiagonalMap& t, const DiagonalMap& u) {
  if (t.complexes != u.complexes) return false;
  bool exact_reals = !t.exact.reals.empty() && !u.exact.reals.empty();
  bool exact_padics = !t.exact.padics.empty() && !u.exact.padics.empty();
  if (exact_reals ? t.exact.reals != u.exact.reals : t.reals != u.reals) return false;
  if (exact_padics ? t.exact.padics != u.exact.padics : !(t.padics == u.padics)) return false;
  return true;
}

bool GifsGraph::has_uniform_linear_part() const {
  for (const auto& e : edges_)
    if (!same_linear_part(e.map.linear, edges_.front().map.linear)) return false;
  return true;
}

bool operator==(const GifsGraph& a, const GifsGraph& b) {
  if (!(a.signature_ == b.signature_) || a.vertices_ != b.vertices_) return false;
  if (a.edges_.size() != b.edges_.size() || a.embeddings_.size() != b.embeddings_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.from != y.from || x.to != y.to || x.label != y.label || x.name != y.name) return false;
    if (!same_map(x.map, y.map)) return false;
  }
  for (std::size_t i = 0; i < a.embeddings_.size(); ++i) {
    const auto& x = a.embeddings_[i];
    const auto& y = b.embeddings_[i];
    if (x.prime() != y.prime() || x.selector() != y.selector() || !(x.generator() == y.generator())) return false;
  }
  return true;
}

IntMatrix adjacency_matrix(const GifsGraph& g) {
  const std::size_t n = g.vertex_count();
  IntMatrix f(n, std::vector<std::int64_t>(n, 0));
  for (const auto& e : g.edges()) ++f[e.from][e.to];
  return f;
}

bool is_strongly_connected(const GifsGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return false;
  std::vector<std::vector<int>> succ(n);
  for (const auto& e : g.edges()) succ[e.from].push_back(e.to);
  return strongly_connected_components(succ).size() == 1;
}

std::vector<std::vector<std::vector<PathSlice>>> enumerate_paths(const GifsGraph& g, int length) {
  if (length < 0) throw std::invalid_argument("enumerate_paths: negative length");
  const int n = static_cast<int>(g.vertex_count());
  std::vector<std::vector<std::vector<PathSlice>>> paths(
      n, std::vector<std::vector<PathSlice>>(n));
  if (length == 0) return paths;

#pragma omp parallel for schedule(dynamic)
  for (int start = 0; start < n; ++start) {
    std::vector<int> stack_edges;
    std::vector<std::size_t> cursor{0};
    std::vector<int> at{start};
    while (!cursor.empty()) {
      const int v = at.back();
      const auto& out = g.outgoing(v);
      if (static_cast<int>(stack_edges.size()) == length) {
        paths[start][v].push_back({stack_edges, start, v});
        cursor.pop_back();
        at.pop_back();
        if (!stack_edges.empty()) stack_edges.pop_back();
        continue;
      }
      std::size_t& c = cursor.back();
      if (c >= out.size()) {
        cursor.pop_back();
        at.pop_back();
        if (!stack_edges.empty()) stack_edges.pop_back();
        continue;
      }
      const int e = out[c++];
      stack_edges.push_back(e);
      at.push_back(g.edges()[e].to);
      cursor.push_back(0);
    }
  }
  return paths;
}

DiagonalMap path_linear(const GifsGraph& g, const std::vector<int>& path) {
  DiagonalMap t = DiagonalMap::identity(g.signature());
  for (int e : path) t = compose(t, g.edges().at(e).map.linear);
  return t;
}

AffineMap path_affine(const GifsGraph& g, const std::vector<int>& path) {
  AffineMap f = identity_map(g.signature());
  for (int e : path) f = compose(f, g.edges().at(e).map);
  return f;
}

GifsGraph fixture(std::string_view name) { return parse_spec(fixture_spec(name)); }

GifsGraph example_main() { return fixture("main"); }
GifsGraph example_boundary_full() { return fixture("boundary-full"); }
GifsGraph example_boundary_reduced() { return fixture("boundary"); }

}  // namespace gifsdim
