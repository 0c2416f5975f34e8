#include "gifsdim/padic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gifsdim/errors.hpp"

namespace gifsdim {

namespace {

char digit_char(std::uint32_t d) {
  return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + (d - 10));
}

int char_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

BigInt floor_mod(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

void require_prime(std::int64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p-adic: " + std::to_string(p) + " is not prime");
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int valuation(const BigInt& n, std::int64_t p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  BigInt m = abs(n);
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

BigInt ipow(const BigInt& base, int exponent) {
  if (exponent < 0) throw std::invalid_argument("ipow: negative exponent");
  return boost::multiprecision::pow(base, static_cast<unsigned>(exponent));
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
  BigInt old_r = floor_mod(a, m), r = m;
  BigInt old_s = 1, s = 0;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw std::domain_error("mod_inverse: not invertible");
  return floor_mod(old_s, m);
}

PadicNumber::PadicNumber(std::int64_t p, int valuation, std::vector<std::uint32_t> digits,
                         int zero_precision)
    : prime_(p), valuation_(digits.empty() ? zero_precision : valuation), digits_(std::move(digits)) {}

PadicNumber PadicNumber::zero(std::int64_t p) {
  require_prime(p);
  return PadicNumber(p, 0, {}, kExact);
}

PadicNumber PadicNumber::zero_mod(std::int64_t p, int absolute_precision) {
  return PadicNumber(p, 0, {}, absolute_precision);
}

PadicNumber PadicNumber::from_residue(const BigInt& residue, std::int64_t p, int digits, int shift) {
  if (digits <= 0) return zero_mod(p, shift + std::max(digits, 0));
  BigInt modulus = ipow(BigInt(p), digits);
  BigInt r = floor_mod(residue, modulus);
  if (r == 0) return zero_mod(p, shift + digits);
  while (r % p == 0) {
    r /= p;
    ++shift;
    --digits;
  }
  std::vector<std::uint32_t> out(static_cast<std::size_t>(digits));
  if (p == 2) {
    for (int j = 0; j < digits; ++j) out[j] = bit_test(r, static_cast<unsigned>(j)) ? 1u : 0u;
  } else {
    for (int j = 0; j < digits; ++j) {
      out[j] = static_cast<std::uint32_t>(r % p);
      r /= p;
    }
  }
  return PadicNumber(p, shift, std::move(out), 0);
}

PadicNumber PadicNumber::from_rational(const BigInt& num, const BigInt& den, std::int64_t p,
                                       int precision) {
  if (den == 0) throw std::invalid_argument("from_rational: zero denominator");
  require_prime(p);
  if (precision < 1) throw std::invalid_argument("from_rational: precision must be >= 1");
  if (num == 0) return zero(p);
  BigInt n = num, d = den;
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  BigInt modulus = ipow(BigInt(p), precision);
  BigInt unit = floor_mod(floor_mod(n, modulus) * mod_inverse(d, modulus), modulus);
  return from_residue(unit, p, precision, v);
}

PadicNumber PadicNumber::parse(std::string_view text, std::int64_t p) {
  require_prime(p);
  int shift = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.starts_with("v=")) {
    auto space = text.find(' ');
    if (space == std::string_view::npos) throw ParseError("digit string: missing digits after v=k");
    try {
      shift = std::stoi(std::string(text.substr(2, space - 2)));
    } catch (const std::exception&) {
      throw ParseError("digit string: bad valuation prefix");
    }
    text = trim(text.substr(space + 1));
  }
  if (text.empty()) throw ParseError("digit string: empty");
  BigInt residue = 0;
  BigInt weight = 1;
  for (char c : text) {
    int d = char_digit(c);
    if (d < 0 || d >= p) throw ParseError(std::string("digit string: bad digit '") + c + "'");
    residue += weight * d;
    weight *= p;
  }
  return from_residue(residue, p, static_cast<int>(text.size()), shift);
}

int PadicNumber::valuation() const { return valuation_; }

int PadicNumber::absolute_precision() const {
  if (is_zero()) return valuation_;
  return valuation_ + precision();
}

std::uint32_t PadicNumber::digit(int j) const {
  if (j < absolute_precision() && (is_zero() || j < valuation_)) return 0;
  if (j >= absolute_precision()) throw std::out_of_range("p-adic digit beyond known precision");
  return digits_[static_cast<std::size_t>(j - valuation_)];
}

Rational PadicNumber::norm() const {
  if (is_zero()) return Rational(0);
  BigInt pv = ipow(BigInt(prime_), std::abs(valuation_));
  return valuation_ >= 0 ? Rational(BigInt(1), pv) : Rational(pv);
}

double PadicNumber::norm_value() const {
  if (is_zero()) return 0.0;
  return std::pow(static_cast<double>(prime_), -valuation_);
}

BigInt PadicNumber::unit_residue() const {
  BigInt r = 0;
  for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) r = r * prime_ + *it;
  return r;
}

BigInt PadicNumber::residue(int k) const {
  if (k <= 0) return 0;
  if (k > absolute_precision()) throw std::out_of_range("residue beyond known precision");
  if (is_zero()) return 0;
  if (valuation_ < 0) throw std::domain_error("residue of an element outside Z_p");
  if (valuation_ >= k) return 0;
  BigInt r = unit_residue() * ipow(BigInt(prime_), valuation_);
  return r % ipow(BigInt(prime_), k);
}

std::string PadicNumber::to_digit_string() const {
  if (is_zero()) {
    if (valuation_ == kExact || valuation_ <= 0) return "0";
    return std::string(static_cast<std::size_t>(valuation_), '0');
  }
  std::string out;
  if (valuation_ < 0) {
    out = "v=" + std::to_string(valuation_) + " ";
  } else {
    out.assign(static_cast<std::size_t>(valuation_), '0');
  }
  for (auto d : digits_) out.push_back(digit_char(d));
  return out;
}

bool PadicNumber::agrees_with(const PadicNumber& other, int k) const {
  if (prime_ != other.prime_) return false;
  if (absolute_precision() < k || other.absolute_precision() < k) return false;
  int lo = std::min(is_zero() ? k : valuation_, other.is_zero() ? k : other.valuation_);
  for (int j = lo; j < k; ++j)
    if (digit(j) != other.digit(j)) return false;
  return true;
}

PadicNumber PadicNumber::operator-() const {
  if (is_zero()) return *this;
  std::vector<std::uint32_t> out(digits_.size());
  const auto p = static_cast<std::uint32_t>(prime_);
  out[0] = p - digits_[0];
  for (std::size_t j = 1; j < digits_.size(); ++j) out[j] = p - 1 - digits_[j];
  return PadicNumber(prime_, valuation_, std::move(out), 0);
}

PadicNumber PadicNumber::inverse() const {
  if (is_zero()) throw std::domain_error("p-adic inverse of zero");
  BigInt modulus = ipow(BigInt(prime_), precision());
  return from_residue(mod_inverse(unit_residue(), modulus), prime_, precision(), -valuation_);
}

PadicNumber PadicNumber::truncated(int k) const {
  if (absolute_precision() <= k) return *this;
  if (is_zero() || k <= valuation_) return zero_mod(prime_, k);
  std::vector<std::uint32_t> out(digits_.begin(), digits_.begin() + (k - valuation_));
  return PadicNumber(prime_, valuation_, std::move(out), 0);
}

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime_ != y.prime_) throw std::invalid_argument("p-adic: prime mismatch");
  const int abs_prec = std::min(x.absolute_precision(), y.absolute_precision());
  if (abs_prec == PadicNumber::kExact) return PadicNumber::zero(x.prime_);
  const int low = std::min(x.valuation(), y.valuation());
  if (low >= abs_prec) return PadicNumber::zero_mod(x.prime_, abs_prec);
  const int span_digits = abs_prec - low;
  const BigInt p(x.prime_);
  auto aligned = [&](const PadicNumber& z) -> BigInt {
    if (z.is_zero()) return 0;
    return z.unit_residue() * ipow(p, z.valuation_ - low);
  };
  return PadicNumber::from_residue(aligned(x) + aligned(y), x.prime_, span_digits, low);
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
  if (x.prime_ != y.prime_) throw std::invalid_argument("p-adic: prime mismatch");
  constexpr int kExact = PadicNumber::kExact;
  if (x.is_zero() || y.is_zero()) {
    if ((x.is_zero() && x.valuation_ == kExact) || (y.is_zero() && y.valuation_ == kExact))
      return PadicNumber::zero(x.prime_);
    // inexact zero times something: known to (zero's precision + other's valuation)
    long long prec = static_cast<long long>(x.valuation_) + y.valuation_;
    prec = std::clamp<long long>(prec, std::numeric_limits<int>::min() / 2, kExact - 1);
    return PadicNumber::zero_mod(x.prime_, static_cast<int>(prec));
  }
  const int n = std::min(x.precision(), y.precision());
  BigInt modulus = ipow(BigInt(x.prime_), n);
  BigInt prod = (x.unit_residue() % modulus) * (y.unit_residue() % modulus);
  return PadicNumber::from_residue(prod, x.prime_, n, x.valuation_ + y.valuation_);
}

PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) { return x * y.inverse(); }

bool operator==(const PadicNumber& x, const PadicNumber& y) {
  return x.prime_ == y.prime_ && x.valuation_ == y.valuation_ && x.digits_ == y.digits_;
}

double cantor_embed(const PadicNumber& x, std::int64_t base) {
  if (base < x.prime()) throw std::invalid_argument("cantor_embed: base must be >= p");
  if (x.is_zero()) return 0.0;
  if (x.valuation() < 0) throw std::domain_error("cantor_embed: element not in Z_p");
  const double b = static_cast<double>(base);
  double weight = std::pow(b, -(x.valuation() + 1));
  double sum = 0.0;
  for (auto d : x.digits()) {
    if (weight < 1e-300) break;
    sum += d * weight;
    weight /= b;
  }
  return sum;
}

PadicNumber hensel_lift(std::span<const BigInt> coeffs, std::int64_t p, std::int64_t residue,
                        int digits) {
  require_prime(p);
  if (digits < 1) throw std::invalid_argument("hensel_lift: digits must be >= 1");
  auto eval = [&](const BigInt& x) {
    BigInt acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  };
  auto eval_derivative = [&](const BigInt& x) {
    BigInt acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 1;) acc = acc * x + coeffs[i] * static_cast<long>(i);
    return acc;
  };
  const BigInt pb(p);
  BigInt x = floor_mod(BigInt(residue), pb);
  if (floor_mod(eval(x), pb) != 0)
    throw HypothesisError("hensel_lift: f(r) is not 0 mod p (r is not a root mod p)");
  BigInt deriv = floor_mod(eval_derivative(x), pb);
  if (deriv == 0) throw HypothesisError("hensel_lift: f'(r) = 0 mod p (root is not simple)");
  const BigInt deriv_inv = mod_inverse(deriv, pb);
  BigInt pk = pb;
  for (int k = 1; k < digits; ++k) {
    BigInt fx = eval(x);
    BigInt t = floor_mod(fx / pk, pb);  // fx is divisible by p^k
    BigInt d = floor_mod(-t * deriv_inv, pb);
    x += d * pk;
    pk *= pb;
  }
  return PadicNumber::from_residue(x, p, digits);
}

PadicNumber evaluate(std::span<const BigInt> coeffs, const PadicNumber& x) {
  const int deg = static_cast<int>(coeffs.size());
  int prec = x.precision() + 64;
  if (!x.is_zero()) prec += std::abs(x.valuation()) * deg;
  PadicNumber acc = PadicNumber::zero(x.prime());
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    PadicNumber c = *it == 0 ? PadicNumber::zero(x.prime())
                             : PadicNumber::from_integer(*it, x.prime(), prec);
    acc = acc * x + c;
  }
  return acc;
}

}  // namespace gifsdim
