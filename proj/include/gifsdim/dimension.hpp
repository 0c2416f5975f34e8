#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gifsdim/gifs.hpp"
#include "gifsdim/mixed_space.hpp"

namespace gifsdim {

enum class DimMethod { closed_form, spectral_iter, partial_sum };

const char* to_string(DimMethod m);

// Which singular value function a solver thresholds.
enum class Svf { phi, psi };

// Serial runs the reference loop; Parallel splits the same work over
// start vertices with OpenMP. Both give bitwise identical results.
enum class Exec { serial, parallel };

struct DimensionReport {
  DimMethod method = DimMethod::closed_form;
  double affinity_dim = 0.0;
  double lower_affinity_dim = 0.0;
  // Bracket for affinity_dim (and lower_affinity_dim where a method has one).
  std::pair<double, double> bracket{0.0, 0.0};
  std::pair<double, double> lower_bracket{0.0, 0.0};
  // Path length reached: the last l for spectral, L for partial sums.
  int levels = 0;
  // Spectral roots per doubling level, (l, root).
  std::vector<std::pair<int, double>> upper_roots;
  std::vector<std::pair<int, double>> lower_roots;
  bool converged = true;
  // Partial sums on a graph without a uniform linear part overestimate.
  bool biased = false;
  // Disjointness of the unions and solution sets as asserted by the user;
  // never checked by the program.
  bool disjointness_asserted = false;
  double hausdorff_lower = 0.0;
  double hausdorff_upper = 0.0;

  std::string to_json() const;
  std::string to_table() const;
};

// Unique q >= 0 with Phi^q(T) * rho = 1 (resp. Psi^q), solved in closed form
// on each unit segment. Throws std::invalid_argument for rho < 1.
double affinity_dim_uniform(const DiagonalMap& t, double rho);
double lower_affinity_dim_uniform(const DiagonalMap& t, double rho);
// The same from descending singular values.
double uniform_root(Svf kind, std::span<const double> alphas, double rho);

// Root q of (1/l) log rho(M_l(q)) = 0, M_l(q)_ij = sum over paths i -> j of
// length l of Phi^q(T_w) (or Psi^q), for l = 1, 2, 4, ... <= lmax.
struct SpectralRoots {
  std::vector<std::pair<int, double>> roots;
  bool converged = false;
};
SpectralRoots spectral_roots(const GifsGraph& g, Svf kind, int lmax, double tol, Exec exec = Exec::parallel);

// Both fail with HypothesisError when g is not strongly connected.
DimensionReport affinity_dim_spectral(const GifsGraph& g, int lmax, double tol, Exec exec = Exec::parallel);
DimensionReport lower_affinity_dim_spectral(const GifsGraph& g, int lmax, double tol,
                                            Exec exec = Exec::parallel);

enum class Growth { diverging, converging, inconclusive };
const char* to_string(Growth g);

struct ProbeResult {
  Growth growth = Growth::inconclusive;
  // Per-step growth of S_l over the second half of 1..L.
  double tail_ratio = 0.0;
  // S_l for l = 0..L.
  std::vector<double> log_sums;
  bool biased = false;
};

// S_l(q) = sum over paths of length l of Phi^q(T_w), by the per-edge
// vector recursion. Margin for the classification is 10 * tol.
ProbeResult partial_sum_probe(const GifsGraph& g, double q, int L, double tol = 1e-6);
// Bisection on the probe; bracket is where the tail ratio crosses 1 +- 10 tol.
DimensionReport partial_sum_dimension(const GifsGraph& g, int L, double tol = 1e-6);

struct DimOptions {
  DimMethod method = DimMethod::closed_form;
  double tol = 1e-9;
  int lmax = 64;
  int partial_length = 60;
  bool assert_disjoint = false;
};

// Closed form needs a uniform linear part (HypothesisError otherwise).
DimensionReport compute_dimensions(const GifsGraph& g, const DimOptions& opt);

// (lower, upper): upper is the affinity dimension; lower is the lower
// affinity dimension when disjointness is asserted, else 0.
std::pair<double, double> hausdorff_bounds(const GifsGraph& g, bool assert_disjoint,
                                           const DimOptions& opt = {});

}  // namespace gifsdim
