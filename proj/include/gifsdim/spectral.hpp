#pragma once

#include <cstdint>
#include <vector>

#include "gifsdim/quadratic.hpp"

namespace gifsdim {

// Dense row-major square matrix of nonnegative reals.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  // Throws std::invalid_argument for ragged or non-square input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

using IntMatrix = std::vector<std::vector<std::int64_t>>;

Matrix to_matrix(const IntMatrix& m);
IntMatrix matrix_power(const IntMatrix& m, int exponent);

// Tarjan's algorithm on the pattern of positive entries. Components are
// returned in reverse topological order, vertices ascending inside each.
std::vector<std::vector<int>> strongly_connected_components(const std::vector<std::vector<int>>& successors);

// Largest eigenvalue modulus of a nonnegative matrix: power iteration on each
// irreducible block (shifted by the identity so periodic blocks converge),
// stopped when the Collatz-Wielandt bounds agree to relative 1e-13.
double spectral_radius(const Matrix& m);
double spectral_radius(const std::vector<std::vector<double>>& rows);

// Perron root of a 2x2 integer matrix as an exact quadratic number.
QuadraticNumber exact_spectral_radius_2x2(const IntMatrix& m);

}  // namespace gifsdim
