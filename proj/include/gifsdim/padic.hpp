#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gifsdim {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

bool is_prime(std::int64_t n);

// p-adic valuation of a nonzero integer.
int valuation(const BigInt& n, std::int64_t p);

// Element of Q_p stored as p^v * u with u a unit known to `precision`
// digits (relative precision). Digits are little-endian: digits()[0] is the
// coefficient of p^v and is never 0 for a nonzero value.
//
// Zero carries an absolute precision: an exact zero has
// absolute_precision() == kExact, a zero produced by cancellation is only
// known modulo p^absolute_precision().
class PadicNumber {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max();

  // Exact zero in Q_2.
  PadicNumber() : valuation_(kExact) {}

  // Exact zero in Q_p.
  static PadicNumber zero(std::int64_t p);
  static PadicNumber zero_mod(std::int64_t p, int absolute_precision);

  // num/den to `precision` significant digits.
  static PadicNumber from_rational(const BigInt& num, const BigInt& den,
                                   std::int64_t p, int precision);
  static PadicNumber from_integer(const BigInt& n, std::int64_t p, int precision) {
    return from_rational(n, 1, p, precision);
  }

  // Value residue * p^shift where residue is known modulo p^digits.
  // Leading zero digits are stripped (they cost relative precision).
  static PadicNumber from_residue(const BigInt& residue, std::int64_t p,
                                  int digits, int shift = 0);

  // Little-endian digit string, optionally prefixed with "v=k " meaning the
  // first character is the coefficient of p^k.
  static PadicNumber parse(std::string_view text, std::int64_t p);

  std::int64_t prime() const { return prime_; }
  bool is_zero() const { return digits_.empty(); }
  // v_p(x); kExact for exact zero, the absolute precision for inexact zero.
  int valuation() const;
  int precision() const { return static_cast<int>(digits_.size()); }
  int absolute_precision() const;
  std::span<const std::uint32_t> digits() const { return digits_; }

  // Coefficient of p^j in the expansion (0 below the valuation).
  std::uint32_t digit(int j) const;

  // Normalised absolute value p^(-v).
  Rational norm() const;
  double norm_value() const;

  // The unit part as an integer in [0, p^precision).
  BigInt unit_residue() const;
  // x mod p^k as an integer in [0, p^k); requires valuation >= 0 and
  // k <= absolute_precision().
  BigInt residue(int k) const;

  std::string to_digit_string() const;

  // Same value modulo p^k (both sides must be known that far).
  bool agrees_with(const PadicNumber& other, int k) const;

  PadicNumber operator-() const;
  PadicNumber inverse() const;
  // Drops digits so that absolute_precision() <= k.
  PadicNumber truncated(int k) const;

  friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);
  friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y);
  friend bool operator==(const PadicNumber& x, const PadicNumber& y);

 private:
  PadicNumber(std::int64_t p, int valuation, std::vector<std::uint32_t> digits,
              int zero_precision);

  std::int64_t prime_ = 2;
  int valuation_ = 0;  // for zero: its absolute precision
  std::vector<std::uint32_t> digits_;
};

// Sum of s_j * base^(-j-1) over the absolute digits of x in Z_p.
// base == p fills [0,1]; base > p gives a Cantor set.
double cantor_embed(const PadicNumber& x, std::int64_t base);

// Root of the integer polynomial sum coeffs[i] x^i in Z_p congruent to
// `residue` mod p, known modulo p^digits. Requires f(r) = 0 mod p and
// f'(r) != 0 mod p; throws HypothesisError naming the failing condition.
PadicNumber hensel_lift(std::span<const BigInt> coeffs, std::int64_t p,
                        std::int64_t residue, int digits);

// Evaluates sum coeffs[i] x^i in Q_p.
PadicNumber evaluate(std::span<const BigInt> coeffs, const PadicNumber& x);

// Inverse of a modulo m (gcd(a, m) = 1).
BigInt mod_inverse(const BigInt& a, const BigInt& m);
BigInt ipow(const BigInt& base, int exponent);

}  // namespace gifsdim
