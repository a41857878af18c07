#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "slicefn/star_poly.hpp"

namespace slicefn {

/// Deterministic generator: identical seeds give identical streams on every
/// platform (no reliance on std distributions).
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  long long integer(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double normal() {
    if (spare_) {
      double out = *spare_;
      spare_.reset();
      return out;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Uniform coordinates in [lo, hi]; rational mode draws multiples of 1/16.
template <Scalar S>
S random_scalar(Rng& rng, double lo, double hi) {
  if constexpr (ScalarTraits<S>::exact) {
    long long a = static_cast<long long>(std::ceil(lo * 16)), b = static_cast<long long>(std::floor(hi * 16));
    return Rational(rng.integer(a, b)) / Rational(16);
  } else {
    return rng.uniform(lo, hi);
  }
}

template <Scalar S>
Element<S> random_element(AlgebraId algebra, Rng& rng, double lo = -2.0, double hi = 2.0) {
  Element<S> e(algebra);
  for (int t = 0; t < algebra.dim(); ++t) e[t] = random_scalar<S>(rng, lo, hi);
  return e;
}

/// Random imaginary unit. Doubles are uniform on the sphere; rationals come
/// from inverse stereographic projection of a rational point, so the result
/// is an exact unit.
template <Scalar S>
Element<S> random_unit(AlgebraId algebra, Rng& rng) {
  const int n = algebra.dim() - 1;
  if (n < 1) throw SliceError(ErrorCode::InvalidArgument, "the reals have no imaginary units");
  Element<S> e(algebra);
  if constexpr (ScalarTraits<S>::exact) {
    if (n == 1) {
      e[1] = S(rng.integer(0, 1) ? 1 : -1);
      return e;
    }
    std::vector<S> u(n - 1);
    S s(0);
    for (auto& c : u) {
      c = random_scalar<S>(rng, -2.0, 2.0);
      s += c * c;
    }
    const S den = s + 1;
    for (int t = 0; t < n - 1; ++t) e[t + 1] = S(2) * u[t] / den;
    e[n] = (s - 1) / den;
  } else {
    double s = 0.0;
    while (s < 1e-6) {
      s = 0.0;
      for (int t = 1; t <= n; ++t) {
        e[t] = rng.normal();
        s += e[t] * e[t];
      }
    }
    e /= std::sqrt(s);
  }
  return e;
}

template <Scalar S>
StarPolynomial<S> random_polynomial(AlgebraId algebra, int degree, Rng& rng, double lo = -2.0, double hi = 2.0) {
  std::vector<Element<S>> cs;
  for (int n = 0; n <= degree; ++n) cs.push_back(random_element<S>(algebra, rng, lo, hi));
  if (cs.back().is_zero()) cs.back() = Element<S>::real(algebra, S(1));
  return StarPolynomial<S>(algebra, std::move(cs));
}

/// Uniform point of the closed unit ball of R^dim.
inline std::vector<double> random_ball_point(int dim, Rng& rng) {
  std::vector<double> v(dim);
  double s = 0.0;
  while (s < 1e-12) {
    s = 0.0;
    for (auto& c : v) {
      c = rng.normal();
      s += c * c;
    }
  }
  double r = std::pow(rng.uniform(), 1.0 / dim) / std::sqrt(s);
  for (auto& c : v) c *= r;
  return v;
}

}  // namespace slicefn
