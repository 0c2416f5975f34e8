#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gifsdim/padic.hpp"

namespace gifsdim {

// Exact element (a + b*sqrt(D))/c of a real quadratic field Q(sqrt(D)).
// Reduced: c > 0 and gcd(a, b, c) = 1. Rationals have b = 0; their D is 0
// until they meet an irrational operand, which fixes the field.
class QuadraticNumber {
 public:
  QuadraticNumber() = default;
  QuadraticNumber(BigInt a, BigInt b, BigInt c, std::int64_t d);
  static QuadraticNumber rational(const BigInt& num, const BigInt& den = 1);
  static QuadraticNumber from_rational(const Rational& r);
  // Exact value of a finite double (a dyadic rational).
  static QuadraticNumber from_double(double x);

  using Lookup = std::function<std::optional<QuadraticNumber>(std::string_view)>;

  // Arithmetic expression over integers, decimal literals ("0.25"),
  // sqrt(n) and parentheses with + - * /, e.g. "(a+b*sqrt(D))/c".
  // Identifiers are resolved through `lookup` when given.
  static QuadraticNumber parse(std::string_view text, const Lookup& lookup = {});

  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }
  std::int64_t d() const { return d_; }
  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }
  Rational rational_value() const;  // requires is_rational()

  QuadraticNumber conj() const;
  QuadraticNumber inverse() const;
  QuadraticNumber abs() const;
  // Exact sign of the real value with sqrt(D) > 0.
  int sign() const;

  // Ascending integer coefficients of the primitive minimal polynomial.
  std::vector<BigInt> minimal_polynomial() const;

  // Canonical text form "(a+b*sqrt(D))/c" (or "a/c" / "a" for rationals).
  std::string to_string() const;

  QuadraticNumber operator-() const;
  friend QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y);
  friend QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y);
  friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y);
  friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y);
  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y);
  // Lexicographic on (a, b, c); a total order for set keys, not the field order.
  friend bool operator<(const QuadraticNumber& x, const QuadraticNumber& y);

 private:
  void reduce();

  BigInt a_ = 0;
  BigInt b_ = 0;
  BigInt c_ = 1;
  std::int64_t d_ = 0;
};

// Exact comparison of real values.
int compare_real(const QuadraticNumber& x, const QuadraticNumber& y);

// Double value using the positive square root, computed without
// cancellation (the conjugate trick when a and b*sqrt(D) have opposite signs).
double embed_real(const QuadraticNumber& x);

// Image of x in Q_p, taking the root of x's minimal polynomial that is
// congruent to `selector` mod p, known to `digits` absolute digits.
PadicNumber embed_padic(const QuadraticNumber& x, std::int64_t p, std::int64_t selector,
                        int digits);

// A field embedding Q(sqrt(D)) -> Q_p fixed by sending `generator` to its
// Hensel root with the given residue. apply() is a ring homomorphism.
class PadicEmbedding {
 public:
  PadicEmbedding() = default;
  PadicEmbedding(const QuadraticNumber& generator, std::int64_t p, std::int64_t selector,
                 int digits = 128);

  std::int64_t prime() const { return prime_; }
  std::int64_t field() const { return d_; }
  const QuadraticNumber& generator() const { return generator_; }
  std::int64_t selector() const { return selector_; }
  int digits() const { return digits_; }

  // Image with at least `digits` relative digits (default: the embedding's).
  PadicNumber apply(const QuadraticNumber& x, int digits = 0) const;
  // Exact p-adic valuation of the image of x (x != 0).
  int valuation(const QuadraticNumber& x) const;
  // Whether the image of x lies in center + p^exponent Z_p, decided exactly.
  bool in_ball(const QuadraticNumber& x, const QuadraticNumber& center, int exponent) const;

 private:
  PadicNumber sqrt_image(int digits) const;

  QuadraticNumber generator_;
  std::int64_t prime_ = 2;
  std::int64_t selector_ = 0;
  std::int64_t d_ = 0;
  int digits_ = 128;
  PadicNumber sqrt_;  // image of sqrt(D) at digits_ precision
};

}  // namespace gifsdim
