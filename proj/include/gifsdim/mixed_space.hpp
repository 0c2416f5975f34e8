#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "gifsdim/padic.hpp"
#include "gifsdim/quadratic.hpp"

namespace gifsdim {

// X = R^real x C^complex x Q_p1 x ... x Q_pk
struct SpaceSignature {
  int real = 0;
  int complex = 0;
  std::vector<std::int64_t> primes;

  int padic() const { return static_cast<int>(primes.size()); }
  int coordinates() const { return real + complex + padic(); }
  // Throws std::invalid_argument when the signature is not a valid space.
  void validate() const;
  friend bool operator==(const SpaceSignature&, const SpaceSignature&) = default;
};

// r + 2s + k
int metric_dim(const SpaceSignature& sig);

struct Point {
  std::vector<double> reals;
  std::vector<std::complex<double>> complexes;
  std::vector<PadicNumber> padics;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Complex coordinates are covered by re/im rectangles.
struct ComplexRect {
  Interval re;
  Interval im;
};

// center + p^exponent Z_p; radius and diameter p^(-exponent).
struct PadicBall {
  PadicNumber center;
  int exponent = 0;
};

struct Box {
  std::vector<Interval> reals;
  std::vector<ComplexRect> complexes;
  std::vector<PadicBall> padics;
};

// Exact values for the real and p-adic coordinates of a map or point;
// either vector is empty when no exact form is known.
struct ExactCoords {
  std::vector<QuadraticNumber> reals;
  std::vector<QuadraticNumber> padics;

  bool empty() const { return reals.empty() && padics.empty(); }
  friend bool operator==(const ExactCoords&, const ExactCoords&) = default;
};

// x -> (a_1 x_1, ..., a_{r+s+k} x_{r+s+k})
struct DiagonalMap {
  std::vector<double> reals;
  std::vector<std::complex<double>> complexes;
  std::vector<PadicNumber> padics;
  ExactCoords exact;

  static DiagonalMap identity(const SpaceSignature& sig, int padic_digits = 64);
};

// x -> T x + t
struct AffineMap {
  DiagonalMap linear;
  Point translate;
  ExactCoords exact_translate;
};

Point zero_point(const SpaceSignature& sig);
SpaceSignature signature_of(const Point& x);
SpaceSignature signature_of(const DiagonalMap& t);
SpaceSignature signature_of(const Box& b);

// Maximum metric: |.| on reals, |re| and |im| separately on complex
// coordinates, the normalised p-adic norm on p-adic ones.
double distance(const Point& x, const Point& y);
double diameter(const Box& b);
double haar_measure(const Box& b);
// The same product computed exactly from the (dyadic) endpoints.
Rational haar_measure_exact(const Box& b);

Point apply(const AffineMap& f, const Point& x);
// Image box. Complex multipliers that are not real or purely imaginary
// rotate rectangles; the bounding rectangle of the image is returned then.
Box apply_box(const AffineMap& f, const Box& b);
// (f o g)(x) = f(g(x))
AffineMap compose(const AffineMap& f, const AffineMap& g);
DiagonalMap compose(const DiagonalMap& t, const DiagonalMap& u);
Box translate_box(const Box& b, const Point& t);

// |a_i| for reals, |a_j| twice for complex, ||a_m||_p; sorted descending.
std::vector<double> singular_values(const DiagonalMap& t);
// Exact singular values when every real and p-adic multiplier has an exact
// form and there are no complex coordinates.
std::optional<std::vector<QuadraticNumber>> exact_singular_values(const DiagonalMap& t);

bool is_contracting(const DiagonalMap& t);
bool is_nonsingular(const DiagonalMap& t);

}  // namespace gifsdim
