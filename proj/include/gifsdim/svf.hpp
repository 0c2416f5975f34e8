#pragma once

#include <span>

namespace gifsdim {

// Singular value function Phi^q of a map with singular values `alphas`
// (descending, all in (0,1)). Continuous and strictly decreasing in q >= 0.
double phi(double q, std::span<const double> alphas);

// The ascending-order analogue Psi^q.
double psi(double q, std::span<const double> alphas);

// log Phi^q / log Psi^q from the logs of the singular values (descending).
// No range checks: values >= 1 are allowed, which the duality
// Psi^q(T) = 1 / Phi^q(T^-1) needs.
double log_phi(double q, std::span<const double> log_alphas);
double log_psi(double q, std::span<const double> log_alphas);

}  // namespace gifsdim
