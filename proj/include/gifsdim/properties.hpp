#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gifsdim/gifs.hpp"

namespace gifsdim {

// Outcome of one randomized invariant check.
struct PropertyReport {
  std::string name;
  long trials = 0;
  long violations = 0;
  std::string first_failure;  // empty when there are no violations
};

// Random triples of p-adic numbers (p in 2, 3, 5, 7): the strong triangle
// inequality for the norm of differences, compared exactly.
PropertyReport ultrametric_suite(std::mt19937_64& rng, int trials);

// mu(T B) = |alpha| mu(B) on a real coordinate, |alpha|^2 on a complex one
// (alpha = r i^k, where rectangles map to rectangles), ||alpha||_p on a
// p-adic one, and the product over all coordinates of a mixed space.
std::vector<PropertyReport> haar_scaling_suite(std::mt19937_64& rng, int trials_per_type);

// Phi^q(TU) <= Phi^q(T) Phi^q(U) and Psi^q(TU) >= Psi^q(T) Psi^q(U).
std::vector<PropertyReport> multiplicativity_suite(std::mt19937_64& rng, int trials);

// Phi^q(T^n) = Phi^q(T)^n: exactly on the singular values of quadratic
// multipliers, and to rounding on random diagonal maps.
PropertyReport power_identity_suite(std::mt19937_64& rng, int trials);

// Psi^q(T) = 1 / Phi^q(T^-1).
PropertyReport duality_suite(std::mt19937_64& rng, int trials);

// Strongly connected random GIFS on 1 to 4 vertices in one of a few mixed
// spaces. `linear_parts` distinct linear parts are shared out over the edges
// (1 gives a uniform system).
GifsGraph random_gifs(std::mt19937_64& rng, int linear_parts = 1);

}  // namespace gifsdim
