#include "gifsdim/svf.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gifsdim {

namespace {

void check(double q, std::span<const double> alphas) {
  if (!(q >= 0.0)) throw std::invalid_argument("singular value function: q must be >= 0");
  if (alphas.empty()) throw std::invalid_argument("singular value function: no singular values");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0 && alphas[i] < 1.0))
      throw std::invalid_argument("singular value function: singular values must lie in (0,1)");
    if (i > 0 && alphas[i] > alphas[i - 1])
      throw std::invalid_argument("singular value function: singular values must be descending");
  }
}

std::vector<double> logs(std::span<const double> alphas) {
  std::vector<double> out(alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) out[i] = std::log(alphas[i]);
  return out;
}

// Shared segment formula; `at(i)` yields the i-th factor in the order the
// function consumes them.
template <typename At>
double log_segmented(double q, std::size_t d, At at) {
  if (q == 0.0) return 0.0;
  double total = 0.0;
  if (q > static_cast<double>(d)) {
    for (std::size_t i = 0; i < d; ++i) total += at(i);
    return q / static_cast<double>(d) * total;
  }
  // j - 1 < q <= j
  const auto j = static_cast<std::size_t>(std::ceil(q));
  for (std::size_t i = 0; i + 1 < j; ++i) total += at(i);
  return total + (q - static_cast<double>(j) + 1.0) * at(j - 1);
}

}  // namespace

double log_phi(double q, std::span<const double> log_alphas) {
  return log_segmented(q, log_alphas.size(), [&](std::size_t i) { return log_alphas[i]; });
}

double log_psi(double q, std::span<const double> log_alphas) {
  const std::size_t d = log_alphas.size();
  return log_segmented(q, d, [&](std::size_t i) { return log_alphas[d - 1 - i]; });
}

double phi(double q, std::span<const double> alphas) {
  check(q, alphas);
  auto l = logs(alphas);
  return std::exp(log_phi(q, l));
}

double psi(double q, std::span<const double> alphas) {
  check(q, alphas);
  auto l = logs(alphas);
  return std::exp(log_psi(q, l));
}

}  // namespace gifsdim
