#include "gifsdim/quadratic.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

#include "gifsdim/errors.hpp"

namespace gifsdim {

namespace {

BigInt gcd_big(BigInt x, BigInt y) {
  x = abs(x);
  y = abs(y);
  while (y != 0) {
    BigInt t = x % y;
    x = y;
    y = t;
  }
  return x;
}

bool is_square_free(std::int64_t d) {
  for (std::int64_t f = 2; f * f <= d; ++f)
    if (d % (f * f) == 0) return false;
  return true;
}

int big_sign(const BigInt& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

std::int64_t merged_field(const QuadraticNumber& x, const QuadraticNumber& y) {
  if (x.is_rational()) return y.d() != 0 ? y.d() : x.d();
  if (y.is_rational()) return x.d();
  if (x.d() != y.d())
    throw std::invalid_argument("quadratic: field mismatch sqrt(" + std::to_string(x.d()) +
                                ") vs sqrt(" + std::to_string(y.d()) + ")");
  return x.d();
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }

// Recursive-descent parser for quadratic expressions.
class ExprParser {
 public:
  ExprParser(std::string_view text, const QuadraticNumber::Lookup& lookup)
      : text_(text), lookup_(lookup) {}

  QuadraticNumber parse() {
    QuadraticNumber v = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression \"" + std::string(text_) + "\": " + msg);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  QuadraticNumber expr() {
    QuadraticNumber v = term();
    for (;;) {
      if (accept('+'))
        v = v + term();
      else if (accept('-'))
        v = v - term();
      else
        return v;
    }
  }

  QuadraticNumber term() {
    QuadraticNumber v = unary();
    for (;;) {
      if (accept('*')) {
        v = v * unary();
      } else if (accept('/')) {
        QuadraticNumber d = unary();
        if (d.is_zero()) fail("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }

  QuadraticNumber unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  QuadraticNumber primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (accept('(')) {
      QuadraticNumber v = expr();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string_view name = text_.substr(start, pos_ - start);
      if (name == "sqrt") {
        if (!accept('(')) fail("sqrt expects '('");
        QuadraticNumber arg = expr();
        if (!accept(')')) fail("missing ')' after sqrt");
        return square_root(arg);
      }
      if (lookup_) {
        if (auto v = lookup_(name)) return *v;
      }
      fail("unknown constant '" + std::string(name) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  QuadraticNumber number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    BigInt num = 0;
    BigInt den = 1;
    for (std::size_t i = start; i < pos_; ++i) num = num * 10 + (text_[i] - '0');
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num = num * 10 + (text_[pos_] - '0');
        den *= 10;
        ++pos_;
      }
    }
    if (pos_ == start) fail("bad number");
    return QuadraticNumber::rational(num, den);
  }

  QuadraticNumber square_root(const QuadraticNumber& arg) {
    if (!arg.is_rational() || arg.c() != 1 || arg.a() < 0) fail("sqrt expects a nonnegative integer");
    if (arg.a() > BigInt(std::numeric_limits<std::int64_t>::max())) fail("sqrt argument too large");
    auto n = arg.a().convert_to<std::int64_t>();
    std::int64_t outer = 1;
    for (std::int64_t f = 2; f * f <= n; ++f) {
      while (n % (f * f) == 0) {
        n /= f * f;
        outer *= f;
      }
    }
    if (n == 1 || n == 0) return QuadraticNumber::rational(n == 0 ? 0 : outer);
    return QuadraticNumber(0, outer, 1, n);
  }

  std::string_view text_;
  const QuadraticNumber::Lookup& lookup_;
  std::size_t pos_ = 0;
};

}  // namespace

QuadraticNumber::QuadraticNumber(BigInt a, BigInt b, BigInt c, std::int64_t d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(d) {
  if (c_ == 0) throw std::invalid_argument("quadratic: zero denominator");
  if (b_ != 0 && (d_ <= 1 || !is_square_free(d_)))
    throw std::invalid_argument("quadratic: D = " + std::to_string(d_) + " must be square-free > 1");
  reduce();
}

void QuadraticNumber::reduce() {
  if (c_ < 0) {
    a_ = -a_;
    b_ = -b_;
    c_ = -c_;
  }
  BigInt g = gcd_big(gcd_big(a_, b_), c_);
  if (g > 1) {
    a_ /= g;
    b_ /= g;
    c_ /= g;
  }
}

QuadraticNumber QuadraticNumber::rational(const BigInt& num, const BigInt& den) {
  return QuadraticNumber(num, 0, den, 0);
}

QuadraticNumber QuadraticNumber::from_rational(const Rational& r) {
  return rational(numerator(r), denominator(r));
}

QuadraticNumber QuadraticNumber::from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("quadratic: non-finite double");
  if (x == 0.0) return rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigInt num = m;
  BigInt den = 1;
  if (exp >= 0)
    num <<= exp;
  else
    den <<= -exp;
  return rational(num, den);
}

QuadraticNumber QuadraticNumber::parse(std::string_view text, const Lookup& lookup) {
  return ExprParser(text, lookup).parse();
}

Rational QuadraticNumber::rational_value() const {
  if (!is_rational()) throw std::domain_error("quadratic: value is irrational");
  return Rational(a_, c_);
}

QuadraticNumber QuadraticNumber::conj() const {
  QuadraticNumber r = *this;
  r.b_ = -r.b_;
  return r;
}

QuadraticNumber QuadraticNumber::operator-() const {
  QuadraticNumber r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

QuadraticNumber QuadraticNumber::inverse() const {
  if (is_zero()) throw std::domain_error("quadratic: inverse of zero");
  // c / (a + b s) = c (a - b s) / (a^2 - b^2 D)
  BigInt norm = a_ * a_ - b_ * b_ * d_;
  return QuadraticNumber(c_ * a_, -c_ * b_, norm, d_);
}

int QuadraticNumber::sign() const {
  int sa = big_sign(a_);
  int sb = big_sign(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  BigInt lhs = a_ * a_;
  BigInt rhs = b_ * b_ * d_;
  return lhs > rhs ? sa : sb;
}

QuadraticNumber QuadraticNumber::abs() const { return sign() < 0 ? -*this : *this; }

std::vector<BigInt> QuadraticNumber::minimal_polynomial() const {
  if (is_rational()) {
    // c x - a
    return {-a_, c_};
  }
  BigInt c2 = c_ * c_;
  BigInt c1 = -2 * a_ * c_;
  BigInt c0 = a_ * a_ - b_ * b_ * d_;
  BigInt g = gcd_big(gcd_big(c0, c1), c2);
  return {c0 / g, c1 / g, c2 / g};
}

std::string QuadraticNumber::to_string() const {
  if (is_rational()) {
    if (c_ == 1) return a_.str();
    return a_.str() + "/" + c_.str();
  }
  std::string out = "(" + a_.str() + (b_ < 0 ? "-" : "+") + BigInt(boost::multiprecision::abs(b_)).str() +
                    "*sqrt(" + std::to_string(d_) + "))/" + c_.str();
  return out;
}

QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y) {
  std::int64_t d = merged_field(x, y);
  return QuadraticNumber(x.a_ * y.c_ + y.a_ * x.c_, x.b_ * y.c_ + y.b_ * x.c_, x.c_ * y.c_, d);
}

QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y) { return x + (-y); }

QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y) {
  std::int64_t d = merged_field(x, y);
  return QuadraticNumber(x.a_ * y.a_ + x.b_ * y.b_ * d, x.a_ * y.b_ + x.b_ * y.a_, x.c_ * y.c_, d);
}

QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y) {
  return x * y.inverse();
}

bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
  if (x.a_ != y.a_ || x.b_ != y.b_ || x.c_ != y.c_) return false;
  return x.b_ == 0 || x.d_ == y.d_;
}

bool operator<(const QuadraticNumber& x, const QuadraticNumber& y) {
  if (x.a_ != y.a_) return x.a_ < y.a_;
  if (x.b_ != y.b_) return x.b_ < y.b_;
  if (x.c_ != y.c_) return x.c_ < y.c_;
  return x.b_ != 0 && x.d_ < y.d_;
}

int compare_real(const QuadraticNumber& x, const QuadraticNumber& y) { return (x - y).sign(); }

double embed_real(const QuadraticNumber& x) {
  if (x.is_rational()) return x.rational_value().convert_to<double>();
  const double root = std::sqrt(static_cast<double>(x.d()));
  const int sa = big_sign(x.a());
  const int sb = big_sign(x.b());
  if (sa == 0 || sa == sb) return (to_double(x.a()) + to_double(x.b()) * root) / to_double(x.c());
  BigInt norm = x.a() * x.a() - x.b() * x.b() * x.d();
  return to_double(norm) / (to_double(x.c()) * (to_double(x.a()) - to_double(x.b()) * root));
}

PadicNumber embed_padic(const QuadraticNumber& x, std::int64_t p, std::int64_t selector,
                        int digits) {
  if (x.is_rational()) {
    if (x.is_zero()) return PadicNumber::zero(p);
    return PadicNumber::from_rational(x.a(), x.c(), p, digits);
  }
  auto poly = x.minimal_polynomial();
  return hensel_lift(poly, p, selector, digits);
}

PadicEmbedding::PadicEmbedding(const QuadraticNumber& generator, std::int64_t p,
                               std::int64_t selector, int digits)
    : generator_(generator), prime_(p), selector_(selector), d_(generator.d()), digits_(digits) {
  if (generator.is_rational())
    throw std::invalid_argument("PadicEmbedding: generator must be irrational");
  if (digits < 1) throw std::invalid_argument("PadicEmbedding: digits must be >= 1");
  sqrt_ = sqrt_image(digits);
}

PadicNumber PadicEmbedding::sqrt_image(int digits) const {
  if (!sqrt_.is_zero() && digits <= sqrt_.precision()) return sqrt_.truncated(sqrt_.valuation() + digits);
  // sqrt(D) = (c x - a) / b for the generator x = (a + b sqrt(D)) / c
  const auto& g = generator_;
  const int margin = 16 + 2 * (gifsdim::valuation(g.b(), prime_) + gifsdim::valuation(g.c(), prime_));
  int lift = digits + margin;
  for (int attempt = 0; attempt < 8; ++attempt, lift *= 2) {
    PadicNumber root = hensel_lift(g.minimal_polynomial(), prime_, selector_, lift);
    PadicNumber c = PadicNumber::from_integer(g.c(), prime_, lift + margin);
    PadicNumber a = PadicNumber::from_integer(g.a(), prime_, lift + margin);
    PadicNumber b = PadicNumber::from_integer(g.b(), prime_, lift + margin);
    PadicNumber s = (c * root - a) / b;
    if (s.precision() >= digits) return s.truncated(s.valuation() + digits);
  }
  throw std::runtime_error("PadicEmbedding: could not reach requested precision");
}

PadicNumber PadicEmbedding::apply(const QuadraticNumber& x, int digits) const {
  if (digits <= 0) digits = digits_;
  if (x.is_zero()) return PadicNumber::zero(prime_);
  if (x.is_rational()) return PadicNumber::from_rational(x.a(), x.c(), prime_, digits);
  if (x.d() != d_) throw std::invalid_argument("PadicEmbedding: field mismatch");
  // Cancellation in a + b*s loses at most v_p(a^2 - b^2 D) digits.
  BigInt norm = x.a() * x.a() - x.b() * x.b() * d_;
  const int loss = gifsdim::valuation(norm, prime_);
  const int prec = digits + loss + 2;
  PadicNumber s = sqrt_image(prec);
  PadicNumber b = PadicNumber::from_integer(x.b(), prime_, prec + 2);
  PadicNumber sum = b * s;
  if (x.a() != 0) sum = sum + PadicNumber::from_integer(x.a(), prime_, prec + loss + 64);
  PadicNumber c = PadicNumber::from_integer(x.c(), prime_, prec + 2);
  PadicNumber out = sum / c;
  if (out.is_zero()) throw std::logic_error("PadicEmbedding: lost all precision");
  return out.truncated(out.valuation() + digits);
}

int PadicEmbedding::valuation(const QuadraticNumber& x) const {
  if (x.is_zero()) throw std::domain_error("valuation of zero");
  return apply(x, 1).valuation();
}

bool PadicEmbedding::in_ball(const QuadraticNumber& x, const QuadraticNumber& center,
                             int exponent) const {
  QuadraticNumber diff = x - center;
  if (diff.is_zero()) return true;
  return valuation(diff) >= exponent;
}

}  // namespace gifsdim
