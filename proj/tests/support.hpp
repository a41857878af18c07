#pragma once

#include <functional>

#include "oracle.hpp"
#include "slicefn/slicefn.hpp"

namespace support {

using slicefn::AlgebraId;
using slicefn::Element;
using slicefn::Rational;

// Multistart compass search for min |F(alpha + beta J)| over units J.
inline Element<double> argmin_on_sphere(const std::function<Element<double>(const Element<double>&)>& F, double alpha,
                                        double beta, AlgebraId alg, std::uint64_t seed, int starts = 64) {
  slicefn::Rng rng(seed);
  const int n = alg.dim();
  auto at = [&](const Element<double>& J) { return oracle::size(F(Element<double>::real(alg, alpha) + J * beta)); };
  auto normalize = [&](Element<double> J) {
    J[0] = 0.0;
    return J / oracle::size(J);
  };
  Element<double> best = slicefn::random_unit<double>(alg, rng);
  double best_v = at(best);
  for (int s = 0; s < starts; ++s) {
    Element<double> J = slicefn::random_unit<double>(alg, rng);
    double v = at(J);
    if (v < best_v) {
      best = J;
      best_v = v;
    }
  }
  double step = 0.25;
  while (step > 1e-12) {
    bool moved = false;
    for (int t = 1; t < n && !moved; ++t) {
      for (double sgn : {1.0, -1.0}) {
        Element<double> trial = best;
        trial[t] += sgn * step;
        trial = normalize(trial);
        double v = at(trial);
        if (v < best_v) {
          best = trial;
          best_v = v;
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return Element<double>::real(alg, alpha) + best * beta;
}

// alpha + beta J with alpha, beta multiples of 1/4 and an exact rational unit J.
inline Element<Rational> random_sphere_point(AlgebraId alg, slicefn::Rng& rng) {
  Rational alpha = Rational(rng.integer(-6, 6)) / 4;
  Rational beta = Rational(rng.integer(1, 8)) / 4;
  return Element<Rational>::real(alg, alpha) + slicefn::random_unit<Rational>(alg, rng) * beta;
}

// (x - y) . q for a random q, so that the sphere of y meets the zero set.
inline slicefn::StarPolynomial<Rational> vanishing_on(const Element<Rational>& y, int extra_degree,
                                                     slicefn::Rng& rng) {
  const AlgebraId alg = y.algebra();
  slicefn::StarPolynomial<Rational> b(alg, {-y, Element<Rational>::real(alg, Rational(1))});
  return slicefn::star_mul(b, slicefn::random_polynomial<Rational>(alg, extra_degree, rng));
}

inline std::function<Element<double>(const Element<double>&)> direct(const slicefn::StarPolynomial<double>& p) {
  return [cs = p.coeffs()](const Element<double>& x) { return oracle::poly_eval(cs, x); };
}

}  // namespace support
