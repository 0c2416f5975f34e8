#include "gifsdim/attractor.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "gifsdim/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gifsdim {

std::vector<Box> default_seeds(const GifsGraph& g, double radius) {
  const auto& sig = g.signature();
  Box b;
  b.reals.assign(static_cast<std::size_t>(sig.real), Interval{-radius, radius});
  b.complexes.assign(static_cast<std::size_t>(sig.complex), ComplexRect{{-radius, radius}, {-radius, radius}});
  for (auto p : sig.primes) b.padics.push_back({PadicNumber::zero(p), 0});
  return std::vector<Box>(g.vertex_count(), b);
}

namespace {

bool interval_contains(const Interval& outer, const Interval& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

bool ball_contains(const PadicBall& outer, const PadicBall& inner) {
  if (inner.exponent < outer.exponent) return false;
  PadicNumber diff = inner.center - outer.center;
  if (diff.is_zero()) return diff.absolute_precision() >= outer.exponent;
  return diff.valuation() >= outer.exponent;
}

}  // namespace

bool box_contains(const Box& outer, const Box& inner) {
  if (!(signature_of(outer) == signature_of(inner))) throw std::invalid_argument("box_contains: signature mismatch");
  for (std::size_t i = 0; i < outer.reals.size(); ++i)
    if (!interval_contains(outer.reals[i], inner.reals[i])) return false;
  for (std::size_t i = 0; i < outer.complexes.size(); ++i)
    if (!interval_contains(outer.complexes[i].re, inner.complexes[i].re) ||
        !interval_contains(outer.complexes[i].im, inner.complexes[i].im))
      return false;
  for (std::size_t i = 0; i < outer.padics.size(); ++i)
    if (!ball_contains(outer.padics[i], inner.padics[i])) return false;
  return true;
}

std::vector<int> seed_invariance_violations(const GifsGraph& g, const std::vector<Box>& seeds) {
  if (seeds.size() != g.vertex_count()) throw std::invalid_argument("seeds: one box per vertex required");
  std::vector<int> bad;
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    if (!box_contains(seeds[edge.from], apply_box(edge.map, seeds[edge.to]))) bad.push_back(static_cast<int>(e));
  }
  return bad;
}

namespace {

void check_cover_args(const GifsGraph& g, const std::vector<Box>& seeds, int depth) {
  if (depth < 0) throw std::invalid_argument("iterate_cover: depth must be >= 0");
  if (seeds.size() != g.vertex_count()) throw std::invalid_argument("iterate_cover: one seed per vertex required");
  for (const auto& s : seeds)
    if (!(signature_of(s) == g.signature())) throw std::invalid_argument("iterate_cover: seed signature mismatch");
}

// ---- flattened representation ------------------------------------------

constexpr std::size_t kMaxReal = 8;
constexpr std::size_t kMaxPadic = 4;

struct FlatBox {
  std::array<double, kMaxReal> lo{}, hi{};
  std::array<std::uint64_t, kMaxPadic> res{};
  std::array<int, kMaxPadic> ex{};
};

// x -> a x + t with p-adic parts as residues mod p^K.
struct FlatMap {
  std::array<double, kMaxReal> a{}, t{};
  std::array<std::uint64_t, kMaxPadic> ar{}, tr{};
  std::array<int, kMaxPadic> va{};
};

struct FlatSystem {
  std::size_t nr = 0;
  std::size_t np = 0;
  std::array<std::uint64_t, kMaxPadic> p{}, mod{};  // mod = p^K
  std::array<int, kMaxPadic> k{};
  std::vector<FlatMap> maps;  // per edge
  std::vector<FlatBox> seeds;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t u64_pow(std::uint64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// Largest K with p^K < 2^62.
int residue_digits(std::uint64_t p) {
  int k = 0;
  unsigned __int128 v = 1;
  while (v * p < (static_cast<unsigned __int128>(1) << 62)) {
    v *= p;
    ++k;
  }
  return k;
}

std::optional<std::uint64_t> residue_of(const PadicNumber& x, int k) {
  if (!x.is_zero() && x.valuation() < 0) return std::nullopt;
  if (x.absolute_precision() < k) k = x.absolute_precision();
  return static_cast<std::uint64_t>(x.residue(k));
}

// Flattened form of g and the seeds, or the reason it does not exist.
std::optional<FlatSystem> flatten(const GifsGraph& g, const std::vector<Box>& seeds, std::string* why) {
  const auto& sig = g.signature();
  auto fail = [&](const char* reason) -> std::optional<FlatSystem> {
    if (why) *why = reason;
    return std::nullopt;
  };
  if (sig.complex != 0) return fail("complex coordinates");
  if (static_cast<std::size_t>(sig.real) > kMaxReal || sig.primes.size() > kMaxPadic) return fail("too many coordinates");
  FlatSystem fs;
  fs.nr = static_cast<std::size_t>(sig.real);
  fs.np = sig.primes.size();
  for (std::size_t i = 0; i < fs.np; ++i) {
    fs.p[i] = static_cast<std::uint64_t>(sig.primes[i]);
    fs.k[i] = residue_digits(fs.p[i]);
    fs.mod[i] = u64_pow(fs.p[i], fs.k[i]);
  }
  for (const auto& e : g.edges()) {
    FlatMap m;
    for (std::size_t i = 0; i < fs.nr; ++i) {
      m.a[i] = e.map.linear.reals[i];
      m.t[i] = e.map.translate.reals[i];
    }
    for (std::size_t i = 0; i < fs.np; ++i) {
      const auto& a = e.map.linear.padics[i];
      auto ar = residue_of(a, fs.k[i]);
      auto tr = residue_of(e.map.translate.padics[i], fs.k[i]);
      if (!ar || !tr) return fail("p-adic map data outside Z_p");
      if (a.absolute_precision() < fs.k[i] || e.map.translate.padics[i].absolute_precision() < fs.k[i])
        return fail("p-adic map data known to fewer digits than the kernel keeps");
      m.ar[i] = *ar;
      m.tr[i] = *tr;
      m.va[i] = a.valuation();
    }
    fs.maps.push_back(m);
  }
  for (const auto& s : seeds) {
    FlatBox b;
    for (std::size_t i = 0; i < fs.nr; ++i) {
      b.lo[i] = s.reals[i].lo;
      b.hi[i] = s.reals[i].hi;
    }
    for (std::size_t i = 0; i < fs.np; ++i) {
      if (s.padics[i].exponent < 0 || s.padics[i].exponent > fs.k[i]) return fail("seed ball outside Z_p");
      auto r = residue_of(s.padics[i].center, s.padics[i].exponent);
      if (!r) return fail("seed center outside Z_p");
      b.res[i] = *r;
      b.ex[i] = s.padics[i].exponent;
    }
    fs.seeds.push_back(b);
  }
  return fs;
}

// Same operation order as apply_box, so real endpoints agree bitwise.
FlatBox image(const FlatSystem& fs, const FlatMap& m, const FlatBox& b) {
  FlatBox out;
  for (std::size_t i = 0; i < fs.nr; ++i) {
    const double x = m.a[i] * b.lo[i] + m.t[i];
    const double y = m.a[i] * b.hi[i] + m.t[i];
    out.lo[i] = std::min(x, y);
    out.hi[i] = std::max(x, y);
  }
  for (std::size_t i = 0; i < fs.np; ++i) {
    const int ex = std::min(b.ex[i] + m.va[i], fs.k[i]);
    const std::uint64_t c = (mulmod(m.ar[i], b.res[i], fs.mod[i]) + m.tr[i]) % fs.mod[i];
    out.ex[i] = ex;
    out.res[i] = c % u64_pow(fs.p[i], ex);
  }
  return out;
}

// f o g on flattened maps; the translate follows compose(): a_f * t_g + t_f.
FlatMap compose_flat(const FlatSystem& fs, const FlatMap& f, const FlatMap& g) {
  FlatMap out;
  for (std::size_t i = 0; i < fs.nr; ++i) {
    out.a[i] = f.a[i] * g.a[i];
    out.t[i] = f.a[i] * g.t[i] + f.t[i];
  }
  for (std::size_t i = 0; i < fs.np; ++i) {
    out.ar[i] = mulmod(f.ar[i], g.ar[i], fs.mod[i]);
    out.tr[i] = (mulmod(f.ar[i], g.tr[i], fs.mod[i]) + f.tr[i]) % fs.mod[i];
    out.va[i] = f.va[i] + g.va[i];
  }
  return out;
}

FlatMap identity_flat(const FlatSystem& fs) {
  FlatMap id;
  for (std::size_t i = 0; i < fs.nr; ++i) id.a[i] = 1.0;
  for (std::size_t i = 0; i < fs.np; ++i) id.ar[i] = 1;
  return id;
}

Box unflatten(const FlatSystem& fs, const FlatBox& b, const Box& like) {
  Box out = like;
  for (std::size_t i = 0; i < fs.nr; ++i) out.reals[i] = {b.lo[i], b.hi[i]};
  for (std::size_t i = 0; i < fs.np; ++i)
    out.padics[i] = {PadicNumber::from_residue(BigInt(b.res[i]), static_cast<std::int64_t>(fs.p[i]), b.ex[i]), b.ex[i]};
  return out;
}

}  // namespace

BoxCover iterate_cover_reference(const GifsGraph& g, const std::vector<Box>& seeds, int depth) {
  check_cover_args(g, seeds, depth);
  BoxCover cover;
  cover.depth = depth;
  cover.vertices = g.vertices();
  cover.boxes.resize(g.vertex_count());
  for (std::size_t i = 0; i < seeds.size(); ++i) cover.boxes[i] = {seeds[i]};
  for (int l = 0; l < depth; ++l) {
    std::vector<std::vector<Box>> next(g.vertex_count());
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
      for (int e : g.outgoing(static_cast<int>(i))) {
        const auto& edge = g.edges()[e];
        for (const auto& b : cover.boxes[edge.to]) next[i].push_back(apply_box(edge.map, b));
      }
    cover.boxes = std::move(next);
  }
  return cover;
}

BoxCover iterate_cover(const GifsGraph& g, const std::vector<Box>& seeds, int depth, Exec exec) {
  check_cover_args(g, seeds, depth);
  auto fs = flatten(g, seeds, nullptr);
  if (!fs) return iterate_cover_reference(g, seeds, depth);
  if (depth == 0) return iterate_cover_reference(g, seeds, 0);

  const std::size_t n = g.vertex_count();
  std::vector<std::vector<FlatBox>> level(n);
  for (std::size_t i = 0; i < n; ++i) level[i] = {fs->seeds[i]};
  for (int l = 0; l < depth; ++l) {
    // One work item per (vertex, outgoing edge); output offsets are fixed
    // beforehand so the order matches the reference.
    struct Item {
      std::size_t vertex, offset;
      int edge;
    };
    std::vector<Item> items;
    std::vector<std::vector<FlatBox>> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t offset = 0;
      for (int e : g.outgoing(static_cast<int>(i))) {
        items.push_back({i, offset, e});
        offset += level[g.edges()[e].to].size();
      }
      next[i].resize(offset);
    }
    const int count = static_cast<int>(items.size());
    auto run = [&](int k) {
      const Item& it = items[k];
      const auto& src = level[g.edges()[it.edge].to];
      const FlatMap& m = fs->maps[it.edge];
      for (std::size_t b = 0; b < src.size(); ++b) next[it.vertex][it.offset + b] = image(*fs, m, src[b]);
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int k = 0; k < count; ++k) run(k);
    } else {
      for (int k = 0; k < count; ++k) run(k);
    }
    level = std::move(next);
  }

  BoxCover cover;
  cover.depth = depth;
  cover.vertices = g.vertices();
  cover.boxes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cover.boxes[i].reserve(level[i].size());
    for (const auto& b : level[i]) cover.boxes[i].push_back(unflatten(*fs, b, seeds[i]));
  }
  return cover;
}

// ---- cells --------------------------------------------------------------

namespace {

std::int64_t cell_index(double x, int m) { return static_cast<std::int64_t>(std::floor(std::ldexp(x, m))); }

// Cells are half-open, so an interval ending on a grid line stops below it;
// a degenerate interval still meets one cell.
std::int64_t last_cell(double lo, double hi, int m) {
  return std::max(cell_index(lo, m), static_cast<std::int64_t>(std::ceil(std::ldexp(hi, m))) - 1);
}

std::int64_t checked_pow(std::int64_t p, int m) {
  std::int64_t r = 1;
  for (int i = 0; i < m; ++i) {
    if (r > std::numeric_limits<std::int64_t>::max() / p) throw std::invalid_argument("cell grid: p^m overflows");
    r *= p;
  }
  return r;
}

// Per coordinate, the list of cell indices the box meets.
std::vector<std::vector<std::int64_t>> cell_ranges(const Box& b, int m) {
  std::vector<std::vector<std::int64_t>> out;
  auto add_interval = [&](const Interval& iv) {
    std::vector<std::int64_t> idx;
    for (std::int64_t k = cell_index(iv.lo, m); k <= last_cell(iv.lo, iv.hi, m); ++k) idx.push_back(k);
    out.push_back(std::move(idx));
  };
  for (const auto& iv : b.reals) add_interval(iv);
  for (const auto& r : b.complexes) {
    add_interval(r.re);
    add_interval(r.im);
  }
  for (const auto& ball : b.padics) {
    const std::int64_t p = ball.center.prime();
    if (ball.exponent < 0 || (!ball.center.is_zero() && ball.center.valuation() < 0))
      throw std::invalid_argument("cell grid: p-adic ball outside Z_p");
    const std::int64_t pm = checked_pow(p, m);
    std::vector<std::int64_t> idx;
    if (ball.exponent >= m) {
      idx.push_back(static_cast<std::int64_t>(ball.center.residue(m)));
    } else {
      const std::int64_t pe = checked_pow(p, ball.exponent);
      const auto base = static_cast<std::int64_t>(ball.center.residue(ball.exponent));
      for (std::int64_t r = base; r < pm; r += pe) idx.push_back(r);
    }
    out.push_back(std::move(idx));
  }
  return out;
}

template <typename Visit>
void for_each_cell(const std::vector<std::vector<std::int64_t>>& ranges, Visit visit) {
  CellKey key(ranges.size());
  std::vector<std::size_t> pos(ranges.size(), 0);
  for (const auto& r : ranges)
    if (r.empty()) return;
  while (true) {
    for (std::size_t i = 0; i < ranges.size(); ++i) key[i] = ranges[i][pos[i]];
    visit(key);
    std::size_t i = 0;
    while (i < ranges.size() && ++pos[i] == ranges[i].size()) pos[i++] = 0;
    if (i == ranges.size()) return;
  }
}

bool fits_cell(const Box& b, int m) {
  const double side = std::ldexp(1.0, -m);
  for (const auto& iv : b.reals)
    if (iv.length() > side) return false;
  for (const auto& r : b.complexes)
    if (r.re.length() > side || r.im.length() > side) return false;
  for (const auto& ball : b.padics)
    if (ball.exponent < m) return false;
  return true;
}

std::vector<int> root_vertices(const GifsGraph& g, int vertex) {
  if (vertex >= static_cast<int>(g.vertex_count())) throw std::invalid_argument("count: vertex out of range");
  if (vertex >= 0) return {vertex};
  std::vector<int> all(g.vertex_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return all;
}

void check_count_options(const CountOptions& opt) {
  if (opt.resolution < 0) throw std::invalid_argument("count: resolution must be >= 0");
  if (opt.depth < 0) throw std::invalid_argument("count: depth must be >= 0");
}

}  // namespace

std::set<CellKey> cells_of_boxes(const std::vector<Box>& boxes, int m) {
  if (m < 0) throw std::invalid_argument("cells_of_boxes: resolution must be >= 0");
  std::set<CellKey> cells;
  for (const auto& b : boxes) for_each_cell(cell_ranges(b, m), [&](const CellKey& k) { cells.insert(k); });
  return cells;
}

std::size_t box_count(const std::vector<Box>& boxes, int m) { return cells_of_boxes(boxes, m).size(); }

std::set<CellKey> CellSet::decode() const {
  std::set<CellKey> out;
  for (auto key : keys) {
    CellKey k(radices.size());
    for (std::size_t i = 0; i < radices.size(); ++i) {
      k[i] = static_cast<std::int64_t>(key % radices[i]) + offsets[i];
      key /= radices[i];
    }
    out.insert(std::move(k));
  }
  return out;
}

std::set<CellKey> count_cells_reference(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt) {
  check_count_options(opt);
  check_cover_args(g, seeds, opt.depth);
  std::set<CellKey> cells;
  AffineMap id = path_affine(g, {});
  struct Frame {
    AffineMap f;
    int vertex;
    int depth;
  };
  for (int root : root_vertices(g, opt.vertex)) {
    std::vector<Frame> stack{{id, root, 0}};
    while (!stack.empty()) {
      Frame fr = std::move(stack.back());
      stack.pop_back();
      const Box box = apply_box(fr.f, seeds[fr.vertex]);
      if (fr.depth == opt.depth || (opt.adaptive && fits_cell(box, opt.resolution))) {
        for_each_cell(cell_ranges(box, opt.resolution), [&](const CellKey& k) { cells.insert(k); });
        continue;
      }
      for (int e : g.outgoing(fr.vertex))
        stack.push_back({compose(fr.f, g.edges()[e].map), g.edges()[e].to, fr.depth + 1});
    }
  }
  return cells;
}

namespace {

struct Packing {
  std::vector<std::int64_t> offsets;
  std::vector<std::uint64_t> radices;
  std::uint64_t total = 1;
};

Packing packing_for(const FlatSystem& fs, int m) {
  Packing pk;
  unsigned __int128 total = 1;
  for (std::size_t i = 0; i < fs.nr; ++i) {
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& s : fs.seeds) {
      lo = std::min(lo, s.lo[i]);
      hi = std::max(hi, s.hi[i]);
    }
    const std::int64_t a = cell_index(lo, m), b = last_cell(lo, hi, m);
    pk.offsets.push_back(a);
    pk.radices.push_back(static_cast<std::uint64_t>(b - a + 1));
    total *= pk.radices.back();
  }
  for (std::size_t i = 0; i < fs.np; ++i) {
    if (m > fs.k[i]) throw std::invalid_argument("count_cells: resolution beyond the kernel's p-adic digits");
    pk.offsets.push_back(0);
    pk.radices.push_back(u64_pow(fs.p[i], m));
    total *= pk.radices.back();
  }
  if (total >> 63) throw std::invalid_argument("count_cells: cell grid too large to pack");
  pk.total = static_cast<std::uint64_t>(total);
  return pk;
}

// Collects packed keys either in a shared bitmap or per-thread vectors.
class KeySink {
 public:
  static constexpr std::uint64_t kBitmapLimit = std::uint64_t{1} << 30;

  KeySink(std::uint64_t total, int threads) : bitmap_(total <= kBitmapLimit) {
    if (bitmap_)
      words_.assign(static_cast<std::size_t>((total + 63) / 64), 0);
    else
      lists_.resize(static_cast<std::size_t>(threads));
  }

  void add(std::uint64_t key, int thread, bool atomic) {
    if (bitmap_) {
      const std::uint64_t bit = std::uint64_t{1} << (key & 63);
      auto& w = words_[static_cast<std::size_t>(key >> 6)];
      if (atomic)
        std::atomic_ref<std::uint64_t>(w).fetch_or(bit, std::memory_order_relaxed);
      else
        w |= bit;
      return;
    }
    auto& v = lists_[static_cast<std::size_t>(thread)];
    v.push_back(key);
    if (v.size() >= (std::size_t{1} << 22)) compact(v);
  }

  std::vector<std::uint64_t> finish() {
    std::vector<std::uint64_t> out;
    if (bitmap_) {
      for (std::size_t w = 0; w < words_.size(); ++w)
        for (std::uint64_t bits = words_[w]; bits; bits &= bits - 1)
          out.push_back(static_cast<std::uint64_t>(w) * 64 + static_cast<std::uint64_t>(__builtin_ctzll(bits)));
      return out;
    }
    for (auto& v : lists_) out.insert(out.end(), v.begin(), v.end());
    compact(out);
    return out;
  }

 private:
  static void compact(std::vector<std::uint64_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  bool bitmap_;
  std::vector<std::uint64_t> words_;
  std::vector<std::vector<std::uint64_t>> lists_;
};

struct Node {
  FlatMap f;
  int vertex;
  int depth;
};

class CellKernel {
 public:
  CellKernel(const GifsGraph& g, const FlatSystem& fs, const CountOptions& opt, const Packing& pk)
      : g_(g), fs_(fs), opt_(opt), pk_(pk), side_(std::ldexp(1.0, -opt.resolution)) {
    for (std::size_t i = 0; i < fs.np; ++i) pm_[i] = u64_pow(fs.p[i], opt.resolution);
  }

  FlatBox box_of(const Node& n) const { return image(fs_, n.f, fs_.seeds[n.vertex]); }

  bool is_leaf(const Node& n, const FlatBox& b) const {
    if (n.depth == opt_.depth) return true;
    if (!opt_.adaptive) return false;
    for (std::size_t i = 0; i < fs_.nr; ++i)
      if (b.hi[i] - b.lo[i] > side_) return false;
    for (std::size_t i = 0; i < fs_.np; ++i)
      if (b.ex[i] < opt_.resolution) return false;
    return true;
  }

  void children(const Node& n, std::vector<Node>& out) const {
    for (auto it = g_.outgoing(n.vertex).rbegin(); it != g_.outgoing(n.vertex).rend(); ++it)
      out.push_back({compose_flat(fs_, n.f, fs_.maps[*it]), g_.edges()[*it].to, n.depth + 1});
  }

  void emit(const FlatBox& b, KeySink& sink, int thread, bool atomic) const {
    const std::size_t dims = fs_.nr + fs_.np;
    std::array<std::uint64_t, kMaxReal + kMaxPadic> first{}, count{}, step{}, pos{};
    for (std::size_t i = 0; i < fs_.nr; ++i) {
      std::int64_t a = std::max(cell_index(b.lo[i], opt_.resolution), pk_.offsets[i]);
      std::int64_t z = std::min(last_cell(b.lo[i], b.hi[i], opt_.resolution),
                                pk_.offsets[i] + static_cast<std::int64_t>(pk_.radices[i]) - 1);
      if (z < a) return;
      first[i] = static_cast<std::uint64_t>(a - pk_.offsets[i]);
      count[i] = static_cast<std::uint64_t>(z - a + 1);
      step[i] = 1;
    }
    for (std::size_t i = 0; i < fs_.np; ++i) {
      const std::size_t d = fs_.nr + i;
      if (b.ex[i] >= opt_.resolution) {
        first[d] = b.res[i] % pm_[i];
        count[d] = 1;
        step[d] = 1;
      } else {
        const std::uint64_t pe = u64_pow(fs_.p[i], b.ex[i]);
        first[d] = b.res[i] % pe;
        count[d] = pm_[i] / pe;
        step[d] = pe;
      }
    }
    while (true) {
      std::uint64_t key = 0;
      for (std::size_t i = dims; i-- > 0;) key = key * pk_.radices[i] + first[i] + pos[i] * step[i];
      sink.add(key, thread, atomic);
      std::size_t i = 0;
      while (i < dims && ++pos[i] == count[i]) pos[i++] = 0;
      if (i == dims) return;
    }
  }

  void walk(const Node& start, KeySink& sink, int thread, bool atomic) const {
    std::vector<Node> stack{start};
    while (!stack.empty()) {
      Node n = stack.back();
      stack.pop_back();
      const FlatBox b = box_of(n);
      if (is_leaf(n, b))
        emit(b, sink, thread, atomic);
      else
        children(n, stack);
    }
  }

 private:
  const GifsGraph& g_;
  const FlatSystem& fs_;
  const CountOptions& opt_;
  const Packing& pk_;
  double side_;
  std::array<std::uint64_t, kMaxPadic> pm_{};
};

std::optional<FlatSystem> kernel_system(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt,
                                        std::string* why) {
  auto fs = flatten(g, seeds, why);
  if (!fs) return std::nullopt;
  if (!seed_invariance_violations(g, seeds).empty()) {
    if (why) *why = "seeds are not invariant";
    return std::nullopt;
  }
  for (std::size_t i = 0; i < fs->np; ++i)
    if (opt.resolution > fs->k[i]) {
      if (why) *why = "resolution beyond the kernel's p-adic digits";
      return std::nullopt;
    }
  return fs;
}

}  // namespace

CellSet count_cells(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt, Exec exec) {
  check_count_options(opt);
  check_cover_args(g, seeds, opt.depth);
  std::string why;
  auto fs = kernel_system(g, seeds, opt, &why);
  if (!fs) throw std::invalid_argument("count_cells: " + why);
  const Packing pk = packing_for(*fs, opt.resolution);
  CellKernel kernel(g, *fs, opt, pk);

  // Frontier of path prefixes, expanded breadth first until there is
  // enough independent work.
  std::vector<Node> frontier;
  for (int v : root_vertices(g, opt.vertex)) frontier.push_back({identity_flat(*fs), v, 0});
  for (int round = 0; round < 6 && frontier.size() < 256; ++round) {
    std::vector<Node> next;
    bool grew = false;
    for (const auto& n : frontier) {
      if (kernel.is_leaf(n, kernel.box_of(n))) {
        next.push_back(n);
        continue;
      }
      std::vector<Node> kids;
      kernel.children(n, kids);
      std::reverse(kids.begin(), kids.end());
      next.insert(next.end(), kids.begin(), kids.end());
      grew = true;
    }
    frontier = std::move(next);
    if (!grew) break;
  }

  int threads = 1;
#ifdef _OPENMP
  if (exec == Exec::parallel) threads = omp_get_max_threads();
#endif
  KeySink sink(pk.total, threads);
  const int count = static_cast<int>(frontier.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < count; ++k) {
      int t = 0;
#ifdef _OPENMP
      t = omp_get_thread_num();
#endif
      kernel.walk(frontier[k], sink, t, true);
    }
  } else {
    for (int k = 0; k < count; ++k) kernel.walk(frontier[k], sink, 0, false);
  }

  CellSet out;
  out.resolution = opt.resolution;
  out.keys = sink.finish();
  out.offsets = pk.offsets;
  out.radices = pk.radices;
  return out;
}

std::size_t attractor_box_count(const GifsGraph& g, const std::vector<Box>& seeds, const CountOptions& opt) {
  check_count_options(opt);
  check_cover_args(g, seeds, opt.depth);
  if (kernel_system(g, seeds, opt, nullptr)) return count_cells(g, seeds, opt).size();
  return count_cells_reference(g, seeds, opt).size();
}

SlopeFit box_dim_estimate(const std::vector<std::pair<int, std::size_t>>& counts) {
  SlopeFit fit;
  const std::size_t n = counts.size();
  if (n == 0) return fit;
  std::vector<double> x, y;
  for (const auto& [m, c] : counts) {
    if (c == 0) throw std::invalid_argument("box_dim_estimate: zero count");
    x.push_back(m * std::log(2.0));
    y.push_back(std::log(static_cast<double>(c)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0.0;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

std::vector<BoxCountRow> box_count_table(const GifsGraph& g, const std::vector<Box>& seeds, int m_lo, int m_hi,
                                         CountOptions opt) {
  if (m_lo > m_hi) throw std::invalid_argument("box_count_table: empty resolution range");
  std::vector<BoxCountRow> rows;
  std::vector<std::pair<int, std::size_t>> so_far;
  for (int m = m_lo; m <= m_hi; ++m) {
    opt.resolution = m;
    const std::size_t n = attractor_box_count(g, seeds, opt);
    so_far.emplace_back(m, n);
    rows.push_back({m, n, so_far.size() >= 2 ? box_dim_estimate(so_far).slope : 0.0});
  }
  return rows;
}

std::string box_count_csv(const std::vector<BoxCountRow>& rows) {
  std::ostringstream os;
  os << "m,N,slope\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9f", r.slope);
    os << r.m << "," << r.count << "," << buf << "\n";
  }
  return os.str();
}

double overlap_fraction(const std::set<CellKey>& a, const std::set<CellKey>& b) {
  if (a.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& k : a) shared += b.count(k);
  return static_cast<double>(shared) / static_cast<double>(a.size());
}

double overlap_fraction(const CellSet& a, const CellSet& b) {
  if (a.keys.empty()) return 0.0;
  if (a.offsets != b.offsets || a.radices != b.radices)
    return overlap_fraction(a.decode(), b.decode());
  std::vector<std::uint64_t> shared;
  std::set_intersection(a.keys.begin(), a.keys.end(), b.keys.begin(), b.keys.end(), std::back_inserter(shared));
  return static_cast<double>(shared.size()) / static_cast<double>(a.keys.size());
}

double overlap_fraction(const std::vector<Box>& a, const std::vector<Box>& b, int m) {
  return overlap_fraction(cells_of_boxes(a, m), cells_of_boxes(b, m));
}

// ---- dual point sets ------------------------------------------------------

namespace {

struct DualSystem {
  std::size_t nr = 0;
  std::vector<QuadraticNumber> inverse;                 // T^-1 per coordinate
  std::vector<ExactPoint> translate;                    // per edge
  std::vector<std::pair<QuadraticNumber, QuadraticNumber>> real_window;
  std::vector<std::pair<QuadraticNumber, int>> padic_window;  // center, exponent
};

DualSystem dual_system(const GifsGraph& g, const Box& window) {
  const auto& sig = g.signature();
  if (sig.complex != 0) throw HypothesisError("dual iteration: complex coordinates are not supported");
  if (g.edges().empty()) throw HypothesisError("dual iteration: graph has no edges");
  if (!g.has_uniform_linear_part()) throw HypothesisError("dual iteration: maps must share their linear part");
  if (!(signature_of(window) == sig)) throw std::invalid_argument("dual iteration: window signature mismatch");
  DualSystem ds;
  ds.nr = static_cast<std::size_t>(sig.real);
  const auto& t = g.edges().front().map.linear.exact;
  if (t.reals.size() != ds.nr || t.padics.size() != sig.primes.size())
    throw HypothesisError("dual iteration: the linear part needs exact entries");
  for (const auto& a : t.reals) ds.inverse.push_back(a.inverse());
  for (const auto& a : t.padics) ds.inverse.push_back(a.inverse());
  for (const auto& e : g.edges()) {
    const auto& ex = e.map.exact_translate;
    if (ex.reals.size() != ds.nr || ex.padics.size() != sig.primes.size())
      throw HypothesisError("dual iteration: translations need exact entries");
    ExactPoint p = ex.reals;
    p.insert(p.end(), ex.padics.begin(), ex.padics.end());
    ds.translate.push_back(std::move(p));
  }
  for (const auto& iv : window.reals)
    ds.real_window.emplace_back(QuadraticNumber::from_double(iv.lo), QuadraticNumber::from_double(iv.hi));
  for (const auto& ball : window.padics) {
    // Balls p^e Z_p with e <= 0 are centred at 0 once they contain Z_p.
    const bool integral = ball.center.is_zero() || ball.center.valuation() >= 0;
    if (!integral) throw std::invalid_argument("dual iteration: p-adic window center must lie in Z_p");
    const BigInt c = ball.exponent > 0 ? ball.center.residue(ball.exponent) : BigInt(0);
    ds.padic_window.emplace_back(QuadraticNumber::rational(c), ball.exponent);
  }
  return ds;
}

int rational_valuation(const QuadraticNumber& x, std::int64_t p) {
  return valuation(x.a(), p) - valuation(x.c(), p);
}

bool in_window(const GifsGraph& g, const DualSystem& ds, const ExactPoint& x) {
  for (std::size_t i = 0; i < ds.nr; ++i)
    if (compare_real(x[i], ds.real_window[i].first) < 0 || compare_real(x[i], ds.real_window[i].second) > 0)
      return false;
  for (std::size_t k = 0; k < ds.padic_window.size(); ++k) {
    const auto& [center, exponent] = ds.padic_window[k];
    const QuadraticNumber diff = x[ds.nr + k] - center;
    if (diff.is_zero()) continue;
    if (const PadicEmbedding* emb = g.embedding_for(k)) {
      if (emb->valuation(diff) < exponent) return false;
    } else {
      if (!diff.is_rational())
        throw HypothesisError("dual iteration: irrational p-adic coordinate without an embedding");
      if (rational_valuation(diff, g.signature().primes[k]) < exponent) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::set<ExactPoint>> dual_step(const GifsGraph& g, const std::vector<std::set<ExactPoint>>& x,
                                            const Box& window) {
  const DualSystem ds = dual_system(g, window);
  if (x.size() != g.vertex_count()) throw std::invalid_argument("dual_step: one point set per vertex required");
  std::vector<std::set<ExactPoint>> out(g.vertex_count());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    const auto& edge = g.edges()[e];
    for (const auto& p : x[edge.from]) {
      ExactPoint y(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) y[i] = ds.inverse[i] * (p[i] + ds.translate[e][i]);
      if (in_window(g, ds, y)) out[edge.to].insert(std::move(y));
    }
  }
  return out;
}

PointSetPair dual_iterate(const GifsGraph& g, const Box& window, std::size_t max_points, int max_iterations) {
  dual_system(g, window);  // validates before iterating
  const std::size_t dims = static_cast<std::size_t>(g.signature().coordinates());
  PointSetPair result;
  result.vertices = g.vertices();
  result.window = window;
  result.points.assign(g.vertex_count(), {ExactPoint(dims, QuadraticNumber::rational(0))});
  for (int it = 0; it < max_iterations; ++it) {
    auto next = dual_step(g, result.points, window);
    ++result.iterations;
    std::size_t total = 0;
    for (const auto& s : next) total += s.size();
    if (total > max_points) throw std::runtime_error("dual_iterate: point budget exceeded");
    if (next == result.points) return result;
    result.points = std::move(next);
  }
  throw std::runtime_error("dual_iterate: no fixed point within the iteration limit");
}

std::string points_csv(const PointSetPair& x) {
  std::ostringstream os;
  const std::size_t dims = x.points.empty() || x.points.front().empty() ? 0 : x.points.front().begin()->size();
  os << "vertex";
  for (std::size_t i = 0; i < dims; ++i) os << ",a" << i + 1 << ",b" << i + 1 << ",c" << i + 1 << ",D" << i + 1;
  os << "\n";
  for (std::size_t v = 0; v < x.points.size(); ++v)
    for (const auto& p : x.points[v]) {
      os << x.vertices[v];
      for (const auto& c : p) os << "," << c.a() << "," << c.b() << "," << c.c() << "," << (c.is_rational() ? 0 : c.d());
      os << "\n";
    }
  return os.str();
}

double tiling_cover_check(const GifsGraph& g, const PointSetPair& points, const BoxCover& cover, const Box& window,
                          int m) {
  if (m < 0) throw std::invalid_argument("tiling_cover_check: resolution must be >= 0");
  const auto& sig = g.signature();
  if (sig.complex != 0) throw std::invalid_argument("tiling_cover_check: complex coordinates are not supported");
  if (points.points.size() != g.vertex_count() || cover.boxes.size() != g.vertex_count())
    throw std::invalid_argument("tiling_cover_check: one point set and cover per vertex required");

  // Window cells: half-open real cells meeting [lo, hi), all cosets inside
  // the p-adic ball.
  std::vector<std::vector<std::int64_t>> ranges;
  for (const auto& iv : window.reals) {
    std::vector<std::int64_t> idx;
    const auto last = static_cast<std::int64_t>(std::ceil(std::ldexp(iv.hi, m)));
    for (std::int64_t k = cell_index(iv.lo, m); k < last; ++k) idx.push_back(k);
    ranges.push_back(std::move(idx));
  }
  {
    Box padic_only;
    padic_only.padics = window.padics;
    auto pr = cell_ranges(padic_only, m);
    ranges.insert(ranges.end(), pr.begin(), pr.end());
  }
  std::set<CellKey> wanted;
  for_each_cell(ranges, [&](const CellKey& k) { wanted.insert(k); });
  if (wanted.empty()) return 0.0;

  std::set<CellKey> covered;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (const auto& x : points.points[v]) {
      Point shift;
      for (std::size_t i = 0; i < static_cast<std::size_t>(sig.real); ++i) shift.reals.push_back(embed_real(x[i]));
      for (std::size_t k = 0; k < sig.primes.size(); ++k) {
        const QuadraticNumber& c = x[static_cast<std::size_t>(sig.real) + k];
        if (const PadicEmbedding* emb = g.embedding_for(k))
          shift.padics.push_back(emb->apply(c, 64));
        else if (c.is_zero())
          shift.padics.push_back(PadicNumber::zero(sig.primes[k]));
        else
          shift.padics.push_back(PadicNumber::from_rational(c.a(), c.c(), sig.primes[k], 64));
      }
      for (const auto& b : cover.boxes[v]) {
        Box t = translate_box(b, shift);
        bool outside = false;
        for (std::size_t i = 0; i < t.reals.size(); ++i)
          if (t.reals[i].hi < window.reals[i].lo || t.reals[i].lo > window.reals[i].hi) outside = true;
        // Two p-adic balls are nested or disjoint; keep the smaller one.
        for (std::size_t k = 0; k < t.padics.size() && !outside; ++k) {
          const auto& wb = window.padics[k];
          const PadicNumber diff = t.padics[k].center - wb.center;
          const int level = std::min(t.padics[k].exponent, wb.exponent);
          const bool meets = diff.is_zero() ? diff.absolute_precision() >= level : diff.valuation() >= level;
          if (!meets)
            outside = true;
          else if (t.padics[k].exponent < wb.exponent)
            t.padics[k] = wb;
        }
        if (outside) continue;
        for_each_cell(cell_ranges(t, m), [&](const CellKey& k) {
          if (wanted.count(k)) covered.insert(k);
        });
      }
    }
  }
  return static_cast<double>(covered.size()) / static_cast<double>(wanted.size());
}

std::string cover_csv(const BoxCover& cover) {
  std::ostringstream os;
  os.precision(17);
  os << "vertex";
  if (!cover.boxes.empty() && !cover.boxes.front().empty()) {
    const Box& b = cover.boxes.front().front();
    for (std::size_t i = 0; i < b.reals.size(); ++i) os << ",lo" << i + 1 << ",hi" << i + 1;
    for (std::size_t i = 0; i < b.complexes.size(); ++i)
      os << ",re_lo" << i + 1 << ",re_hi" << i + 1 << ",im_lo" << i + 1 << ",im_hi" << i + 1;
    for (std::size_t i = 0; i < b.padics.size(); ++i) os << ",center" << i + 1 << ",exponent" << i + 1;
  }
  os << "\n";
  for (std::size_t v = 0; v < cover.boxes.size(); ++v)
    for (const auto& b : cover.boxes[v]) {
      os << cover.vertices[v];
      for (const auto& iv : b.reals) os << "," << iv.lo << "," << iv.hi;
      for (const auto& r : b.complexes) os << "," << r.re.lo << "," << r.re.hi << "," << r.im.lo << "," << r.im.hi;
      for (const auto& ball : b.padics) os << "," << ball.center.to_digit_string() << "," << ball.exponent;
      os << "\n";
    }
  return os.str();
}

}  // namespace gifsdim
