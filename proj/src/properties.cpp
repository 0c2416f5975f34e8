#include "gifsdim/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gifsdim/svf.hpp"

namespace gifsdim {

namespace {

constexpr std::int64_t kPrimes[] = {2, 3, 5, 7};
constexpr int kDigits = 60;

bool close(double x, double y, double rel) { return std::abs(x - y) <= rel * std::max(std::abs(x), std::abs(y)); }

void record(PropertyReport& r, bool ok, const std::string& what) {
  ++r.trials;
  if (ok) return;
  if (r.violations++ == 0) r.first_failure = what;
}

std::int64_t pick_prime(std::mt19937_64& rng) {
  return kPrimes[std::uniform_int_distribution<int>(0, 3)(rng)];
}

PadicNumber random_padic(std::mt19937_64& rng, std::int64_t p) {
  std::int64_t num = std::uniform_int_distribution<std::int64_t>(-1000000, 1000000)(rng);
  std::int64_t den = std::uniform_int_distribution<std::int64_t>(1, 1000)(rng);
  if (num == 0) return PadicNumber::zero(p);
  return PadicNumber::from_rational(num, den, p, kDigits);
}

// p^k u with u a unit of bounded height; k >= 1 keeps it contracting.
PadicNumber random_padic_multiplier(std::mt19937_64& rng, std::int64_t p, int kmin, int kmax) {
  std::uniform_int_distribution<std::int64_t> unit(1, 200);
  std::int64_t a = 0, b = 0;
  do a = unit(rng); while (a % p == 0);
  do b = unit(rng); while (b % p == 0);
  int k = std::uniform_int_distribution<int>(kmin, kmax)(rng);
  const BigInt pk = ipow(BigInt(p), std::abs(k));
  return k >= 0 ? PadicNumber::from_rational(pk * a, b, p, kDigits) : PadicNumber::from_rational(a, pk * b, p, kDigits);
}

double random_real_multiplier(std::mt19937_64& rng) {
  double a = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
  return std::bernoulli_distribution(0.5)(rng) ? a : -a;
}

std::complex<double> random_complex_multiplier(std::mt19937_64& rng) {
  double r = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
  double t = std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(rng);
  return std::polar(r, t);
}

DiagonalMap random_diagonal(std::mt19937_64& rng, const SpaceSignature& sig) {
  DiagonalMap t;
  for (int i = 0; i < sig.real; ++i) t.reals.push_back(random_real_multiplier(rng));
  for (int i = 0; i < sig.complex; ++i) t.complexes.push_back(random_complex_multiplier(rng));
  for (auto p : sig.primes) t.padics.push_back(random_padic_multiplier(rng, p, 1, 3));
  return t;
}

SpaceSignature random_signature(std::mt19937_64& rng) {
  static const SpaceSignature kSpaces[] = {
      {1, 0, {2}}, {2, 0, {}}, {1, 1, {}}, {0, 0, {3, 5}}, {1, 0, {2, 3}}, {2, 1, {7}},
  };
  return kSpaces[std::uniform_int_distribution<int>(0, 5)(rng)];
}

Interval random_interval(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  double a = u(rng), b = u(rng);
  if (a == b) b = a + 1.0;
  return {std::min(a, b), std::max(a, b)};
}

Box random_box(std::mt19937_64& rng, const SpaceSignature& sig) {
  Box b;
  for (int i = 0; i < sig.real; ++i) b.reals.push_back(random_interval(rng));
  for (int i = 0; i < sig.complex; ++i) b.complexes.push_back({random_interval(rng), random_interval(rng)});
  for (auto p : sig.primes)
    b.padics.push_back({random_padic(rng, p), std::uniform_int_distribution<int>(-3, 6)(rng)});
  return b;
}

// Multipliers that map rectangles onto rectangles: r i^k.
std::complex<double> axis_multiplier(std::mt19937_64& rng) {
  static const std::complex<double> kUnits[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double r = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
  return r * kUnits[std::uniform_int_distribution<int>(0, 3)(rng)];
}

AffineMap linear_only(DiagonalMap t, const SpaceSignature& sig) {
  AffineMap f;
  f.linear = std::move(t);
  f.translate = zero_point(sig);
  return f;
}

PropertyReport haar_case(std::mt19937_64& rng, const std::string& name, const SpaceSignature& sig, int trials) {
  PropertyReport r{name, 0, 0, {}};
  for (int n = 0; n < trials; ++n) {
    Box b = random_box(rng, sig);
    DiagonalMap t;
    double factor = 1.0;
    for (int i = 0; i < sig.real; ++i) {
      double a = random_real_multiplier(rng) * 3.0;
      t.reals.push_back(a);
      factor *= std::abs(a);
    }
    for (int i = 0; i < sig.complex; ++i) {
      auto a = axis_multiplier(rng);
      t.complexes.push_back(a);
      factor *= std::norm(a);
    }
    for (auto p : sig.primes) {
      PadicNumber a = random_padic_multiplier(rng, p, -2, 3);
      t.padics.push_back(a);
      factor *= a.norm_value();
    }
    double lhs = haar_measure(apply_box(linear_only(t, sig), b));
    double rhs = factor * haar_measure(b);
    std::ostringstream what;
    what << "mu(T B) = " << lhs << ", |det| mu(B) = " << rhs;
    record(r, close(lhs, rhs, 1e-12), what.str());
  }
  return r;
}

std::vector<double> logs(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(std::log(x));
  return out;
}

double random_q(std::mt19937_64& rng, const SpaceSignature& sig) {
  return std::uniform_real_distribution<double>(0.0, metric_dim(sig) + 0.5)(rng);
}

DiagonalMap inverse(const DiagonalMap& t) {
  DiagonalMap u;
  for (double a : t.reals) u.reals.push_back(1.0 / a);
  for (auto a : t.complexes) u.complexes.push_back(1.0 / a);
  for (const auto& a : t.padics) u.padics.push_back(a.inverse());
  return u;
}

}  // namespace

PropertyReport ultrametric_suite(std::mt19937_64& rng, int trials) {
  PropertyReport r{"ultrametric inequality", 0, 0, {}};
  for (int n = 0; n < trials; ++n) {
    const std::int64_t p = pick_prime(rng);
    PadicNumber x = random_padic(rng, p), y = random_padic(rng, p), z = random_padic(rng, p);
    Rational dxz = (x - z).norm(), dxy = (x - y).norm(), dyz = (y - z).norm();
    record(r, dxz <= std::max(dxy, dyz), "p = " + std::to_string(p) + ": d(x,z) > max(d(x,y), d(y,z))");
  }
  return r;
}

std::vector<PropertyReport> haar_scaling_suite(std::mt19937_64& rng, int trials_per_type) {
  std::vector<PropertyReport> out;
  out.push_back(haar_case(rng, "Haar scaling, real", {1, 0, {}}, trials_per_type));
  out.push_back(haar_case(rng, "Haar scaling, complex", {0, 1, {}}, trials_per_type));
  PropertyReport padic{"Haar scaling, p-adic", 0, 0, {}};
  for (int n = 0; n < trials_per_type; ++n) {
    // Exact: the measure of a ball is a power of p.
    const std::int64_t p = pick_prime(rng);
    const SpaceSignature sig{0, 0, {p}};
    Box b = random_box(rng, sig);
    PadicNumber a = random_padic_multiplier(rng, p, -2, 3);
    DiagonalMap t;
    t.padics.push_back(a);
    Rational lhs = haar_measure_exact(apply_box(linear_only(t, sig), b));
    record(padic, lhs == a.norm() * haar_measure_exact(b), "p = " + std::to_string(p));
  }
  out.push_back(std::move(padic));
  out.push_back(haar_case(rng, "Haar scaling, mixed", {1, 1, {3}}, trials_per_type));
  return out;
}

std::vector<PropertyReport> multiplicativity_suite(std::mt19937_64& rng, int trials) {
  PropertyReport sub{"Phi submultiplicative", 0, 0, {}};
  PropertyReport super{"Psi supermultiplicative", 0, 0, {}};
  for (int n = 0; n < trials; ++n) {
    SpaceSignature sig = random_signature(rng);
    DiagonalMap t = random_diagonal(rng, sig), u = random_diagonal(rng, sig);
    auto st = singular_values(t), su = singular_values(u), stu = singular_values(compose(t, u));
    double q = random_q(rng, sig);
    double lt = log_phi(q, logs(st)), lu = log_phi(q, logs(su)), ltu = log_phi(q, logs(stu));
    record(sub, ltu <= lt + lu + 1e-12 * (1 + std::abs(lt + lu)), "q = " + std::to_string(q));
    lt = log_psi(q, logs(st));
    lu = log_psi(q, logs(su));
    ltu = log_psi(q, logs(stu));
    record(super, ltu >= lt + lu - 1e-12 * (1 + std::abs(lt + lu)), "q = " + std::to_string(q));
  }
  return {sub, super};
}

PropertyReport power_identity_suite(std::mt19937_64& rng, int trials) {
  PropertyReport r{"power identity", 0, 0, {}};
  // Singular values of T^n are exactly those of T raised to n, in the same
  // order, so Phi^q(T^n) = Phi^q(T)^n holds term by term.
  for (const char* name : {"main", "boundary-full"}) {
    const GifsGraph g = fixture(name);
    for (const auto& e : g.edges()) {
      DiagonalMap pow = e.map.linear;
      auto base = exact_singular_values(e.map.linear);
      for (int n = 2; n <= 8; ++n) {
        pow = compose(pow, e.map.linear);
        auto sv = exact_singular_values(pow);
        bool ok = base && sv && sv->size() == base->size();
        for (std::size_t i = 0; ok && i < sv->size(); ++i) {
          QuadraticNumber expect = QuadraticNumber::rational(1);
          for (int k = 0; k < n; ++k) expect = expect * (*base)[i];
          ok = (*sv)[i] == expect;
        }
        record(r, ok, std::string(name) + " edge " + e.name + ", n = " + std::to_string(n));
      }
    }
  }
  for (int n = 0; n < trials; ++n) {
    SpaceSignature sig = random_signature(rng);
    DiagonalMap t = random_diagonal(rng, sig);
    int power = std::uniform_int_distribution<int>(2, 12)(rng);
    DiagonalMap tp = t;
    for (int k = 1; k < power; ++k) tp = compose(tp, t);
    double q = random_q(rng, sig);
    double lhs = log_phi(q, logs(singular_values(tp)));
    double rhs = power * log_phi(q, logs(singular_values(t)));
    record(r, close(lhs, rhs, 1e-12), "n = " + std::to_string(power) + ", q = " + std::to_string(q));
  }
  return r;
}

PropertyReport duality_suite(std::mt19937_64& rng, int trials) {
  PropertyReport r{"Psi/Phi duality", 0, 0, {}};
  for (int n = 0; n < trials; ++n) {
    SpaceSignature sig = random_signature(rng);
    DiagonalMap t = random_diagonal(rng, sig);
    double q = random_q(rng, sig);
    double lhs = log_psi(q, logs(singular_values(t)));
    double rhs = -log_phi(q, logs(singular_values(inverse(t))));
    record(r, close(lhs, rhs, 1e-12), "q = " + std::to_string(q));
  }
  return r;
}

GifsGraph random_gifs(std::mt19937_64& rng, int linear_parts) {
  if (linear_parts < 1) throw std::invalid_argument("random_gifs: need at least one linear part");
  const SpaceSignature sig = random_signature(rng);
  const int n = std::uniform_int_distribution<int>(1, 4)(rng);
  std::vector<DiagonalMap> parts;
  for (int k = 0; k < linear_parts; ++k) parts.push_back(random_diagonal(rng, sig));

  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < n; ++i) arcs.emplace_back(i, (i + 1) % n);
  const int extra = std::uniform_int_distribution<int>(0, n + 3)(rng);
  std::uniform_int_distribution<int> vertex(0, n - 1);
  for (int k = 0; k < extra; ++k) arcs.emplace_back(vertex(rng), vertex(rng));

  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Edge> edges;
  std::uniform_int_distribution<int> part(0, linear_parts - 1);
  std::uniform_int_distribution<int> shift(-3, 3);
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    Edge e;
    e.from = arcs[k].first;
    e.to = arcs[k].second;
    e.label = static_cast<int>(k);
    e.name = "f" + std::to_string(k);
    e.map.linear = parts[static_cast<std::size_t>(part(rng))];
    e.map.translate = zero_point(sig);
    for (auto& x : e.map.translate.reals) x = shift(rng);
    for (auto& z : e.map.translate.complexes) z = {double(shift(rng)), double(shift(rng))};
    for (auto& x : e.map.translate.padics) x = PadicNumber::from_integer(shift(rng) + 4, x.prime(), kDigits);
    edges.push_back(std::move(e));
  }
  return GifsGraph(sig, names, std::move(edges));
}

}  // namespace gifsdim
