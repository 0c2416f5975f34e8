#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gifsdim/mixed_space.hpp"
#include "gifsdim/quadratic.hpp"
#include "gifsdim/spectral.hpp"

namespace gifsdim {

// An edge from -> to labelled f means f(Omega_to) is one of the pieces of
// Omega_from, so adjacency entries count edges leaving each row vertex.
struct Edge {
  int from = 0;
  int to = 0;
  AffineMap map;
  int label = 0;
  std::string name;
};

// Graph-directed IFS: Omega_i = union over edges i -> j of f(Omega_j).
class GifsGraph {
 public:
  GifsGraph() = default;
  // Validates the signature, vertex names, edge endpoints and that every
  // edge map is contracting and non-singular (HypothesisError otherwise).
  // Labels default to the edge position when all are zero.
  GifsGraph(SpaceSignature signature, std::vector<std::string> vertices, std::vector<Edge> edges,
            std::vector<PadicEmbedding> embeddings = {});

  const SpaceSignature& signature() const { return signature_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<PadicEmbedding>& embeddings() const { return embeddings_; }
  // Edge indices leaving vertex v, ordered by label.
  const std::vector<int>& outgoing(int v) const { return outgoing_[static_cast<std::size_t>(v)]; }

  std::size_t vertex_count() const { return vertices_.size(); }
  int vertex_index(std::string_view name) const;
  // Embedding used for the p-adic coordinate of the given index, or nullptr.
  const PadicEmbedding* embedding_for(std::size_t padic_index) const;

  // True when every edge has the same linear part.
  bool has_uniform_linear_part() const;

  friend bool operator==(const GifsGraph& a, const GifsGraph& b);

 private:
  SpaceSignature signature_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::vector<PadicEmbedding> embeddings_;
  std::vector<std::vector<int>> outgoing_;
};

bool same_linear_part(const DiagonalMap& t, const DiagonalMap& u);

IntMatrix adjacency_matrix(const GifsGraph& g);
bool is_strongly_connected(const GifsGraph& g);

struct PathSlice {
  std::vector<int> edges;
  int start = 0;
  int end = 0;
};

// paths[i][j] holds every path of length `length` from i to j, in label
// order. Length 0 yields no paths. Work is split by start vertex.
std::vector<std::vector<std::vector<PathSlice>>> enumerate_paths(const GifsGraph& g, int length);

// T_w = T_w1 o ... o T_wl (identity for the empty path).
DiagonalMap path_linear(const GifsGraph& g, const std::vector<int>& path);
AffineMap path_affine(const GifsGraph& g, const std::vector<int>& path);

// GIFS spec file (JSON). See README for the schema.
GifsGraph parse_spec(std::string_view text);
std::string serialize_spec(const GifsGraph& g);

// Built-in example systems in R x Q_2 over Q(sqrt(17)).
GifsGraph example_main();
GifsGraph example_boundary_full();
GifsGraph example_boundary_reduced();
// "main", "boundary-full" or "boundary"; std::invalid_argument otherwise.
GifsGraph fixture(std::string_view name);
std::string fixture_spec(std::string_view name);

}  // namespace gifsdim
