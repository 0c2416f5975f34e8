#include "gifsdim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace gifsdim {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix to_matrix(const IntMatrix& m) {
  Matrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) throw std::invalid_argument("matrix is not square");
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = static_cast<double>(m[i][j]);
  }
  return out;
}

IntMatrix matrix_power(const IntMatrix& m, int exponent) {
  const std::size_t n = m.size();
  IntMatrix result(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) result[i][i] = 1;
  for (int e = 0; e < exponent; ++e) {
    IntMatrix next(n, std::vector<std::int64_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (result[i][k] != 0)
          for (std::size_t j = 0; j < n; ++j) next[i][j] += result[i][k] * m[k][j];
    result = std::move(next);
  }
  return result;
}

std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& successors) {
  const int n = static_cast<int>(successors.size());
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int counter = 0;

  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : successors[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      components.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return components;
}

namespace {

double irreducible_radius(const Matrix& b) {
  const std::size_t n = b.size();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += b(i, j);
    scale = std::max(scale, row);
  }
  if (scale == 0.0) return 0.0;
  // A = B / scale + I is primitive with Perron root rho / scale + 1.
  std::vector<double> x(n, 1.0), y(n);
  double lo = 0.0, hi = 0.0;
  for (int it = 0; it < 100000; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (std::size_t j = 0; j < n; ++j) acc += b(i, j) / scale * x[j];
      y[i] = acc;
    }
    lo = INFINITY;
    hi = 0.0;
    double ymax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] / x[i];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ymax = std::max(ymax, y[i]);
    }
    if (hi - lo <= 1e-13 * std::max(0.5 * (lo + hi) - 1.0, 1e-300)) break;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ymax;
  }
  return scale * (0.5 * (lo + hi) - 1.0);
}

}  // namespace

double spectral_radius(const Matrix& m) {
  const std::size_t n = m.size();
  std::vector<std::vector<int>> succ(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < 0.0 || std::isnan(m(i, j))) throw std::invalid_argument("spectral_radius: negative entry");
      if (m(i, j) > 0.0) succ[i].push_back(static_cast<int>(j));
    }
  double rho = 0.0;
  for (const auto& comp : strongly_connected_components(succ)) {
    Matrix block(comp.size());
    for (std::size_t a = 0; a < comp.size(); ++a)
      for (std::size_t c = 0; c < comp.size(); ++c) block(a, c) = m(comp[a], comp[c]);
    rho = std::max(rho, irreducible_radius(block));
  }
  return rho;
}

double spectral_radius(const std::vector<std::vector<double>>& rows) {
  return spectral_radius(Matrix::from_rows(rows));
}

QuadraticNumber exact_spectral_radius_2x2(const IntMatrix& m) {
  if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
    throw std::invalid_argument("exact_spectral_radius_2x2: expects a 2x2 matrix");
  const BigInt tr = BigInt(m[0][0]) + m[1][1];
  const BigInt det = BigInt(m[0][0]) * m[1][1] - BigInt(m[0][1]) * m[1][0];
  const BigInt disc = tr * tr - 4 * det;
  if (disc < 0) throw std::domain_error("exact_spectral_radius_2x2: complex eigenvalues");
  return QuadraticNumber::parse("(" + tr.str() + "+sqrt(" + disc.str() + "))/2");
}

}  // namespace gifsdim
