#pragma once

// Sphere-level data of a slice function. On S_x = alpha + beta S every slice
// function is f(alpha + beta J) = vs + (beta J) ds with (vs, ds) independent
// of J. Everything here works with beta^2 so that exact arithmetic never
// needs a square root.

#include <optional>

#include "slicefn/cayley_dickson.hpp"

namespace slicefn {

template <Scalar S>
struct Sphere {
  S alpha;
  S beta_sq;

  bool is_real() const { return beta_sq == 0; }
  double beta() const { return std::sqrt(to_double(beta_sq)); }
  /// n(x) for any x on the sphere.
  S point_norm() const { return alpha * alpha + beta_sq; }

  friend bool operator==(const Sphere&, const Sphere&) = default;
};

template <Scalar S>
Sphere<S> sphere_of(const Element<S>& x) {
  return {x[0], norm(im(x))};
}

template <Scalar S>
Sphere<S> sphere_at(double alpha, double beta) {
  const S b = from_double<S>(beta);
  return {from_double<S>(alpha), S(b * b)};
}

/// alpha + beta J for a unit J; needs an exact square root in rational mode.
template <Scalar S>
Element<S> point_on(const Sphere<S>& sphere, const Element<S>& unit) {
  return Element<S>::real(unit.algebra(), sphere.alpha) + unit * scalar_sqrt(sphere.beta_sq);
}

/// Spherical value and spherical derivative on one sphere. The derivative is
/// absent on real spheres unless an extension is known.
template <Scalar S>
struct Stem {
  Element<S> value;
  std::optional<Element<S>> derivative;

  const Element<S>& ds() const {
    if (!derivative) {
      throw SliceError(ErrorCode::RealPointDerivative, "spherical derivative unavailable on the real axis");
    }
    return *derivative;
  }
};

/// f(x) = vs f(x) + im(x) f'_s(x).
template <Scalar S>
Element<S> assemble(const Stem<S>& stem, const Element<S>& x) {
  Element<S> v = im(x);
  if (v.is_zero()) return stem.value;
  return stem.value + v * stem.ds();
}

/// Stem of f.g:  vs = vs f vs g + im^2 f'_s g'_s,  ds = vs f g'_s + f'_s vs g.
template <Scalar S>
Stem<S> stem_product(const Stem<S>& f, const Stem<S>& g, const S& beta_sq) {
  if (!f.derivative || !g.derivative) {
    // Real sphere without derivative data: the product is pointwise.
    return {f.value * g.value, std::nullopt};
  }
  const auto& df = *f.derivative;
  const auto& dg = *g.derivative;
  return {f.value * g.value - (df * dg) * beta_sq, f.value * dg + df * g.value};
}

template <Scalar S>
Stem<S> stem_conj(const Stem<S>& f) {
  Stem<S> out{conj(f.value), std::nullopt};
  if (f.derivative) out.derivative = conj(*f.derivative);
  return out;
}

/// Stem of N(f): vs = n(vs f) + im^2 n(f'_s), ds = t(vs f f'_s^c). Both are real.
template <Scalar S>
Stem<S> stem_normal(const Stem<S>& f, const S& beta_sq) {
  const AlgebraId alg = f.value.algebra();
  if (!f.derivative) return {Element<S>::real(alg, norm(f.value)), std::nullopt};
  const auto& d = *f.derivative;
  S a = norm(f.value) - beta_sq * norm(d);
  S b = S(2) * dot(f.value, d);
  return {Element<S>::real(alg, a), Element<S>::real(alg, b)};
}

/// |f(x)|^2 for x on the sphere, for a slice preserving f with real stem (a, b).
template <Scalar S>
S real_stem_modulus_sq(const S& a, const S& b, const S& beta_sq) {
  return a * a + beta_sq * b * b;
}

}  // namespace slicefn
