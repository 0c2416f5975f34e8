#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gifsdim/dimension.hpp"
#include "gifsdim/gifs.hpp"
#include "gifsdim/mixed_space.hpp"

namespace gifsdim {

// Depth-l approximation of the attractor: boxes[i] lists f_w(seed_j) for
// every path w of length l from i (ending at j), in label order.
struct BoxCover {
  std::vector<std::vector<Box>> boxes;
  int depth = 0;
  std::vector<std::string> vertices;
};

// [-radius, radius] on every real coordinate (re and im for complex ones)
// times Z_p on every p-adic one, the same for each vertex.
std::vector<Box> default_seeds(const GifsGraph& g, double radius = 2.0);

bool box_contains(const Box& outer, const Box& inner);
// Edges e: i -> j with f_e(seed_j) not inside seed_i.
std::vector<int> seed_invariance_violations(const GifsGraph& g, const std::vector<Box>& seeds);

// Level recursion on the general box types.
BoxCover iterate_cover_reference(const GifsGraph& g, const std::vector<Box>& seeds, int depth);
// Same boxes, computed on a flattened form (doubles and residues mod p^K)
// with each level split over OpenMP threads. Falls back to the reference
// for complex coordinates or p-adic data outside Z_p.
BoxCover iterate_cover(const GifsGraph& g, const std::vector<Box>& seeds, int depth, Exec exec = Exec::parallel);

// Grid cell: floor(x * 2^m) per real coordinate (re, im for complex), then
// the residue mod p^m per p-adic coordinate. Elements outside Z_p are not
// supported.
using CellKey = std::vector<std::int64_t>;

// Cells met by the boxes. Real cells are half-open: [lo, hi] meets cells
// floor(lo 2^m) .. ceil(hi 2^m) - 1, and at least the first.
std::set<CellKey> cells_of_boxes(const std::vector<Box>& boxes, int m);
std::size_t box_count(const std::vector<Box>& boxes, int m);

struct CountOptions {
  int resolution = 8;
  // Path depth; the cap when adaptive.
  int depth = 8;
  // Stop descending once a box is no larger than a cell in every coordinate.
  bool adaptive = false;
  // Vertex whose attractor is counted; -1 for the union over all vertices.
  int vertex = -1;
};

// Cells as packed integers (mixed radix over the seed hull), sorted.
struct CellSet {
  int resolution = 0;
  std::vector<std::uint64_t> keys;
  std::vector<std::int64_t> offsets;
  std::vector<std::uint64_t> radices;

  std::size_t size() const { return keys.size(); }
  std::set<CellKey> decode() const;
};

// Streams paths depth first without storing boxes. The reference walks the
// general types serially; the kernel walks flattened data split by path
// prefix. The kernel needs invariant seeds inside Z_p and no complex
// coordinates (std::invalid_argument otherwise).
std::set<CellKey> count_cells_reference(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt);
CellSet count_cells(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt,
                    Exec exec = Exec::parallel);
// Kernel when it applies, else the reference.
std::size_t attractor_box_count(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // root mean square, in log units
};
// Least squares of log N(m) against m log 2.
SlopeFit box_dim_estimate(const std::vector<std::pair<int, std::size_t>>& counts);

struct BoxCountRow {
  int m = 0;
  std::size_t count = 0;
  double slope = 0.0;  // fit over the rows so far (0 for the first)
};
std::vector<BoxCountRow> box_count_table(const GifsGraph& g, const std::vector<Box>& seeds, int m_lo, int m_hi,
                                         CountOptions opt);
std::string box_count_csv(const std::vector<BoxCountRow>& rows);

// Shared cells over cells of a; 0 when a is empty.
double overlap_fraction(const std::set<CellKey>& a, const std::set<CellKey>& b);
double overlap_fraction(const CellSet& a, const CellSet& b);
double overlap_fraction(const std::vector<Box>& a, const std::vector<Box>& b, int m);

// Point sets of the dual system X_j = union over edges e: i -> j of
// T^-1(X_i + t_e), held exactly.
using ExactPoint = std::vector<QuadraticNumber>;  // real coordinates, then p-adic

struct PointSetPair {
  std::vector<std::set<ExactPoint>> points;
  std::vector<std::string> vertices;
  Box window;
  int iterations = 0;
};

// One dual step restricted to the window. Needs a uniform exact linear part
// and exact translations (HypothesisError otherwise).
std::vector<std::set<ExactPoint>> dual_step(const GifsGraph& g, const std::vector<std::set<ExactPoint>>& x,
                                            const Box& window);
// Iterates from {0} at every vertex until the sets repeat. Throws
// std::runtime_error past `max_points` in total or `max_iterations`.
PointSetPair dual_iterate(const GifsGraph& g, const Box& window, std::size_t max_points = 1000000,
                          int max_iterations = 10000);
// One row per point: vertex, then a,b,c,D for each coordinate.
std::string points_csv(const PointSetPair& x);

// Fraction of the window's resolution-m cells met by the union of x + cover
// over vertices and points of each vertex.
double tiling_cover_check(const GifsGraph& g, const PointSetPair& points, const BoxCover& cover, const Box& window,
                          int m);

// One row per box: vertex, real lo/hi pairs, then p-adic center digits and
// exponent.
std::string cover_csv(const BoxCover& cover);

}  // namespace gifsdim
