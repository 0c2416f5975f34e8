#include "gifsdim/mixed_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gifsdim {

namespace {

void require_same(const SpaceSignature& a, const SpaceSignature& b, const char* what) {
  if (!(a == b)) throw std::invalid_argument(std::string(what) + ": signature mismatch");
}

Interval scale(const Interval& iv, double a, double t) {
  double x = a * iv.lo + t;
  double y = a * iv.hi + t;
  return x <= y ? Interval{x, y} : Interval{y, x};
}

Rational exact_length(const Interval& iv) {
  return QuadraticNumber::from_double(iv.hi).rational_value() -
         QuadraticNumber::from_double(iv.lo).rational_value();
}

ComplexRect image_rect(const ComplexRect& r, std::complex<double> a, std::complex<double> t) {
  if (a.imag() == 0.0) {
    Interval re = scale(r.re, a.real(), t.real());
    Interval im = scale(r.im, a.real(), t.imag());
    return {re, im};
  }
  if (a.real() == 0.0) {
    // (x + iy) * (i b) = -b y + i b x
    Interval re = scale(r.im, -a.imag(), t.real());
    Interval im = scale(r.re, a.imag(), t.imag());
    return {re, im};
  }
  const std::complex<double> corners[] = {{r.re.lo, r.im.lo}, {r.re.lo, r.im.hi},
                                          {r.re.hi, r.im.lo}, {r.re.hi, r.im.hi}};
  ComplexRect out{{INFINITY, -INFINITY}, {INFINITY, -INFINITY}};
  for (auto z : corners) {
    auto w = a * z + t;
    out.re.lo = std::min(out.re.lo, w.real());
    out.re.hi = std::max(out.re.hi, w.real());
    out.im.lo = std::min(out.im.lo, w.imag());
    out.im.hi = std::max(out.im.hi, w.imag());
  }
  return out;
}

std::vector<QuadraticNumber> multiply_exact(const std::vector<QuadraticNumber>& a,
                                            const std::vector<QuadraticNumber>& b) {
  if (a.empty() || b.empty() || a.size() != b.size()) return {};
  std::vector<QuadraticNumber> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

}  // namespace

void SpaceSignature::validate() const {
  if (real < 0 || complex < 0) throw std::invalid_argument("signature: negative component count");
  for (auto p : primes)
    if (!is_prime(p)) throw std::invalid_argument("signature: " + std::to_string(p) + " is not prime");
  if (real + 2 * complex + padic() < 1) throw std::invalid_argument("signature: empty space");
}

int metric_dim(const SpaceSignature& sig) { return sig.real + 2 * sig.complex + sig.padic(); }

DiagonalMap DiagonalMap::identity(const SpaceSignature& sig, int padic_digits) {
  DiagonalMap t;
  t.reals.assign(static_cast<std::size_t>(sig.real), 1.0);
  t.complexes.assign(static_cast<std::size_t>(sig.complex), {1.0, 0.0});
  for (auto p : sig.primes) t.padics.push_back(PadicNumber::from_integer(1, p, padic_digits));
  if (sig.complex == 0) {
    t.exact.reals.assign(static_cast<std::size_t>(sig.real), QuadraticNumber::rational(1));
    t.exact.padics.assign(sig.primes.size(), QuadraticNumber::rational(1));
  }
  return t;
}

Point zero_point(const SpaceSignature& sig) {
  Point x;
  x.reals.assign(static_cast<std::size_t>(sig.real), 0.0);
  x.complexes.assign(static_cast<std::size_t>(sig.complex), {0.0, 0.0});
  for (auto p : sig.primes) x.padics.push_back(PadicNumber::zero(p));
  return x;
}

SpaceSignature signature_of(const Point& x) {
  SpaceSignature s{static_cast<int>(x.reals.size()), static_cast<int>(x.complexes.size()), {}};
  for (const auto& z : x.padics) s.primes.push_back(z.prime());
  return s;
}

SpaceSignature signature_of(const DiagonalMap& t) {
  SpaceSignature s{static_cast<int>(t.reals.size()), static_cast<int>(t.complexes.size()), {}};
  for (const auto& z : t.padics) s.primes.push_back(z.prime());
  return s;
}

SpaceSignature signature_of(const Box& b) {
  SpaceSignature s{static_cast<int>(b.reals.size()), static_cast<int>(b.complexes.size()), {}};
  for (const auto& z : b.padics) s.primes.push_back(z.center.prime());
  return s;
}

double distance(const Point& x, const Point& y) {
  require_same(signature_of(x), signature_of(y), "distance");
  double d = 0.0;
  for (std::size_t i = 0; i < x.reals.size(); ++i) d = std::max(d, std::abs(x.reals[i] - y.reals[i]));
  for (std::size_t i = 0; i < x.complexes.size(); ++i) {
    d = std::max(d, std::abs(x.complexes[i].real() - y.complexes[i].real()));
    d = std::max(d, std::abs(x.complexes[i].imag() - y.complexes[i].imag()));
  }
  for (std::size_t i = 0; i < x.padics.size(); ++i) d = std::max(d, (x.padics[i] - y.padics[i]).norm_value());
  return d;
}

double diameter(const Box& b) {
  double d = 0.0;
  for (const auto& iv : b.reals) d = std::max(d, iv.length());
  for (const auto& r : b.complexes) d = std::max({d, r.re.length(), r.im.length()});
  for (const auto& ball : b.padics)
    d = std::max(d, std::pow(static_cast<double>(ball.center.prime()), -ball.exponent));
  return d;
}

double haar_measure(const Box& b) {
  double m = 1.0;
  for (const auto& iv : b.reals) m *= iv.length();
  for (const auto& r : b.complexes) m *= r.re.length() * r.im.length();
  for (const auto& ball : b.padics) m *= std::pow(static_cast<double>(ball.center.prime()), -ball.exponent);
  return m;
}

Rational haar_measure_exact(const Box& b) {
  Rational m = 1;
  for (const auto& iv : b.reals) m *= exact_length(iv);
  for (const auto& r : b.complexes) m *= exact_length(r.re) * exact_length(r.im);
  for (const auto& ball : b.padics) {
    BigInt pe = ipow(BigInt(ball.center.prime()), std::abs(ball.exponent));
    m *= ball.exponent >= 0 ? Rational(BigInt(1), pe) : Rational(pe);
  }
  return m;
}

Point apply(const AffineMap& f, const Point& x) {
  require_same(signature_of(f.linear), signature_of(x), "apply");
  require_same(signature_of(f.translate), signature_of(x), "apply");
  Point y = x;
  for (std::size_t i = 0; i < y.reals.size(); ++i) y.reals[i] = f.linear.reals[i] * x.reals[i] + f.translate.reals[i];
  for (std::size_t i = 0; i < y.complexes.size(); ++i)
    y.complexes[i] = f.linear.complexes[i] * x.complexes[i] + f.translate.complexes[i];
  for (std::size_t i = 0; i < y.padics.size(); ++i) y.padics[i] = f.linear.padics[i] * x.padics[i] + f.translate.padics[i];
  return y;
}

Box apply_box(const AffineMap& f, const Box& b) {
  require_same(signature_of(f.linear), signature_of(b), "apply_box");
  Box out = b;
  for (std::size_t i = 0; i < b.reals.size(); ++i)
    out.reals[i] = scale(b.reals[i], f.linear.reals[i], f.translate.reals[i]);
  for (std::size_t i = 0; i < b.complexes.size(); ++i)
    out.complexes[i] = image_rect(b.complexes[i], f.linear.complexes[i], f.translate.complexes[i]);
  for (std::size_t i = 0; i < b.padics.size(); ++i) {
    const PadicNumber& a = f.linear.padics[i];
    const PadicNumber& t = f.translate.padics[i];
    PadicNumber center = a * b.padics[i].center + t;
    int exponent = a.is_zero() ? t.absolute_precision() : b.padics[i].exponent + a.valuation();
    exponent = std::min(exponent, center.absolute_precision());
    out.padics[i] = {center.truncated(exponent), exponent};
  }
  return out;
}

DiagonalMap compose(const DiagonalMap& t, const DiagonalMap& u) {
  require_same(signature_of(t), signature_of(u), "compose");
  DiagonalMap out = t;
  for (std::size_t i = 0; i < out.reals.size(); ++i) out.reals[i] *= u.reals[i];
  for (std::size_t i = 0; i < out.complexes.size(); ++i) out.complexes[i] *= u.complexes[i];
  for (std::size_t i = 0; i < out.padics.size(); ++i) out.padics[i] = t.padics[i] * u.padics[i];
  out.exact.reals = multiply_exact(t.exact.reals, u.exact.reals);
  out.exact.padics = multiply_exact(t.exact.padics, u.exact.padics);
  return out;
}

AffineMap compose(const AffineMap& f, const AffineMap& g) {
  AffineMap out;
  out.linear = compose(f.linear, g.linear);
  AffineMap lin_only{f.linear, f.translate, {}};
  out.translate = apply(lin_only, g.translate);
  const auto& fe = f.linear.exact;
  const auto& ft = f.exact_translate;
  const auto& gt = g.exact_translate;
  if (!fe.reals.empty() && !ft.reals.empty() && !gt.reals.empty()) {
    for (std::size_t i = 0; i < fe.reals.size(); ++i) out.exact_translate.reals.push_back(fe.reals[i] * gt.reals[i] + ft.reals[i]);
  }
  if (!fe.padics.empty() && !ft.padics.empty() && !gt.padics.empty()) {
    for (std::size_t i = 0; i < fe.padics.size(); ++i)
      out.exact_translate.padics.push_back(fe.padics[i] * gt.padics[i] + ft.padics[i]);
  }
  return out;
}

Box translate_box(const Box& b, const Point& t) {
  require_same(signature_of(b), signature_of(t), "translate_box");
  Box out = b;
  for (std::size_t i = 0; i < b.reals.size(); ++i) {
    out.reals[i].lo += t.reals[i];
    out.reals[i].hi += t.reals[i];
  }
  for (std::size_t i = 0; i < b.complexes.size(); ++i) {
    out.complexes[i].re.lo += t.complexes[i].real();
    out.complexes[i].re.hi += t.complexes[i].real();
    out.complexes[i].im.lo += t.complexes[i].imag();
    out.complexes[i].im.hi += t.complexes[i].imag();
  }
  for (std::size_t i = 0; i < b.padics.size(); ++i) {
    PadicNumber c = b.padics[i].center + t.padics[i];
    int e = std::min(b.padics[i].exponent, c.absolute_precision());
    out.padics[i] = {c.truncated(e), e};
  }
  return out;
}

std::vector<double> singular_values(const DiagonalMap& t) {
  std::vector<double> sv;
  sv.reserve(t.reals.size() + 2 * t.complexes.size() + t.padics.size());
  for (double a : t.reals) sv.push_back(std::abs(a));
  for (auto a : t.complexes) {
    sv.push_back(std::abs(a));
    sv.push_back(std::abs(a));
  }
  for (const auto& a : t.padics) sv.push_back(a.norm_value());
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

std::optional<std::vector<QuadraticNumber>> exact_singular_values(const DiagonalMap& t) {
  if (!t.complexes.empty()) return std::nullopt;
  if (t.exact.reals.size() != t.reals.size()) return std::nullopt;
  std::vector<QuadraticNumber> sv;
  for (const auto& a : t.exact.reals) sv.push_back(a.abs());
  for (const auto& a : t.padics) sv.push_back(QuadraticNumber::from_rational(a.norm()));
  std::sort(sv.begin(), sv.end(),
            [](const QuadraticNumber& x, const QuadraticNumber& y) { return compare_real(x, y) > 0; });
  return sv;
}

bool is_contracting(const DiagonalMap& t) {
  auto sv = singular_values(t);
  return sv.empty() || sv.front() < 1.0;
}

bool is_nonsingular(const DiagonalMap& t) {
  auto sv = singular_values(t);
  return sv.empty() || sv.back() > 0.0;
}

}  // namespace gifsdim
