#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "slicefn/zeros.hpp"

namespace slicefn {

inline constexpr double kPhiTolerance = 1e-24;
inline constexpr double kAssociatorTolerance = 1e-10;

/// Phi(a, b) = (n(a) a^c + b^c a b^c) / ((n(a) - n(b))^2 + t(b^c a)^2).
template <Scalar S>
Element<S> phi(const Element<S>& a, const Element<S>& b) {
  require_same_algebra(a.algebra(), b.algebra());
  const S na = norm(a), nb = norm(b);
  const Element<S> bca = conj(b) * a;
  const S diff = na - nb;
  const S tr = trace(bca);
  const S den = diff * diff + tr * tr;
  bool undefined;
  if constexpr (ScalarTraits<S>::exact) {
    undefined = den == 0;
  } else {
    const double scale = std::max(1.0, (na + nb) * (na + nb));
    undefined = den <= kPhiTolerance * scale;
  }
  if (undefined) throw SliceError(ErrorCode::PhiUndefined, "Phi denominator vanishes");
  return (conj(a) * na + bca * conj(b)) / den;
}

namespace detail {

template <Scalar S>
bool element_tiny(const Element<S>& e, double scale) {
  if constexpr (ScalarTraits<S>::exact)
    return e.is_zero();
  else
    return std::sqrt(norm(e)) <= kNormZeroTolerance * scale;
}

template <Scalar S>
Element<S> pole_checked_inverse(const Element<S>& e, double scale) {
  if (element_tiny(e, scale)) throw SliceError(ErrorCode::PoleProximity, "value too close to zero to invert");
  return inverse(e);
}

/// Stem of N(f)^{-1} f^c from the stem of f.
template <Scalar S>
Stem<S> reciprocal_stem(const Stem<S>& f, const Sphere<S>& sphere) {
  const Stem<S> n = stem_normal(f, sphere.beta_sq);
  const Stem<S> c = stem_conj(f);
  const S a = n.value[0];
  if (!n.derivative) {
    if constexpr (ScalarTraits<S>::exact) {
      if (a == 0) throw SliceError(ErrorCode::PoleProximity, "normal vanishes");
    } else {
      if (std::abs(a) < kPoleTolerance) throw SliceError(ErrorCode::PoleProximity, "normal vanishes");
    }
    return {c.value / a, std::nullopt};
  }
  const S b = (*n.derivative)[0];
  const S d = real_stem_modulus_sq(a, b, sphere.beta_sq);
  if constexpr (ScalarTraits<S>::exact) {
    if (d == 0) throw SliceError(ErrorCode::PoleProximity, "normal vanishes");
  } else {
    const double r = std::sqrt(to_double(sphere.point_norm()));
    if (std::sqrt(d) < kPoleTolerance * (1.0 + r)) throw SliceError(ErrorCode::PoleProximity, "normal vanishes");
  }
  const Stem<S> inv{Element<S>::real(f.value.algebra(), a / d), Element<S>::real(f.value.algebra(), S(-b) / d)};
  return stem_product(inv, c, sphere.beta_sq);
}

template <Scalar S>
StarPolynomial<S> real_part_polynomial(const StarPolynomial<S>& p) {
  std::vector<Element<S>> cs;
  for (const auto& c : p.coeffs()) cs.push_back(Element<S>::real(p.algebra(), c[0]));
  return StarPolynomial<S>(p.algebra(), std::move(cs));
}

}  // namespace detail

/// f^{-.} = N(f)^{-1} f^c. Points of V(N(f)) raise PoleProximity on evaluation.
template <Scalar S>
SliceFunction<S> star_reciprocal(const SliceFunction<S>& f) {
  if (auto p = f.template as<StarPolynomial<S>>()) {
    StarPolynomial<S> n = detail::real_part_polynomial(star_normal(*p));
    if (n.is_zero()) throw SliceError(ErrorCode::NormalIdenticallyZero, "normal function is identically zero");
    return SliceFunction<S>(SemiregularForm<S>(star_conj(*p), n), f.domain());
  }
  if (auto q = f.template as<SemiregularForm<S>>()) {
    StarPolynomial<S> n = detail::real_part_polynomial(star_normal(q->numerator()));
    if (n.is_zero()) throw SliceError(ErrorCode::NormalIdenticallyZero, "normal function is identically zero");
    return SliceFunction<S>(SemiregularForm<S>(star_mul(q->denominator(), star_conj(q->numerator())), n), f.domain());
  }
  auto pf = std::make_shared<SliceFunction<S>>(f);
  const auto spheres = detail::probe_spheres<S>(f.domain(), 16);
  bool all_zero = !spheres.empty();
  for (const auto& s : spheres) {
    try {
      Stem<S> n = stem_normal(pf->stem(s), s.beta_sq);
      bool zero = detail::element_negligible(n.value, kZeroTolerance) &&
                  (!n.derivative || detail::element_negligible(*n.derivative, kZeroTolerance));
      if (!zero) {
        all_zero = false;
        break;
      }
    } catch (const SliceError&) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) throw SliceError(ErrorCode::NormalIdenticallyZero, "normal function vanishes on every probe");
  return SliceFunction<S>(
      f.algebra(),
      GenericStem<S>{[pf](const Sphere<S>& s) { return detail::reciprocal_stem(pf->stem(s), s); },
                     is_slice_preserving_hint(f)},
      f.domain());
}

/// f^{-.}(x) through Phi(vs f(x), |im x| f'_s(x)) - (im x / |im x|) Phi(|im x| f'_s(x), vs f(x)),
/// expanded in beta^2 so that rational mode stays exact.
template <Scalar S>
Element<S> reciprocal_via_phi(const SliceFunction<S>& f, const Element<S>& x) {
  const Sphere<S> sphere = sphere_of(x);
  const Stem<S> st = f.stem(sphere);
  const double scale = 1.0 + std::sqrt(norm(element_cast<double>(st.value)));
  if (sphere.is_real() || !st.derivative || detail::element_tiny(*st.derivative, scale)) {
    return detail::pole_checked_inverse(st.value, scale);
  }
  const Element<S>& a = st.value;
  const Element<S>& d = *st.derivative;
  const S b2 = sphere.beta_sq;
  const S na = norm(a), nd = norm(d);
  const Element<S> dca = conj(d) * a;
  const S diff = na - b2 * nd;
  const S tr = trace(dca);
  const S den = diff * diff + b2 * tr * tr;
  bool undefined;
  if constexpr (ScalarTraits<S>::exact) {
    undefined = den == 0;
  } else {
    undefined = den <= kPhiTolerance * std::max(1.0, (na + b2 * nd) * (na + b2 * nd));
  }
  if (undefined) throw SliceError(ErrorCode::PoleProximity, "point lies in the zero set of the normal function");
  const Element<S> first = conj(a) * na + (dca * conj(d)) * b2;
  const Element<S> second = conj(d) * S(b2 * nd) + (conj(a) * d) * conj(a);
  return (first - im(x) * second) / den;
}

/// T_f(x) = (f^c(x)^{-1} ((x f^c(x)) f'_s(x))) f'_s(x)^{-1}; the identity on the reals.
template <Scalar S>
Element<S> t_f(const SliceFunction<S>& f, const Element<S>& x) {
  const Sphere<S> sphere = sphere_of(x);
  if (sphere.is_real()) return x;
  const Stem<S> st = f.stem(sphere);
  const Element<S>& d = st.ds();
  const double scale = 1.0 + std::sqrt(norm(element_cast<double>(st.value)));
  if (detail::element_tiny(d, scale)) {
    throw SliceError(ErrorCode::SphericalDerivativeVanishes, "spherical derivative vanishes at the point");
  }
  const Element<S> fc = assemble(stem_conj(st), x);
  const Element<S> fci = detail::pole_checked_inverse(fc, scale);
  return (fci * ((x * fc) * d)) * inverse(d);
}

template <Scalar S>
Element<S> t_f_inverse(const SliceFunction<S>& f, const Element<S>& x) {
  return t_f(star_reciprocal(f), x);
}

/// f^c(x)^{-1} x f^c(x).
template <Scalar S>
Element<S> t_f_special(const SliceFunction<S>& f, const Element<S>& x) {
  const Sphere<S> sphere = sphere_of(x);
  if (sphere.is_real()) return x;
  const Stem<S> st = f.stem(sphere);
  const Element<S> fc = assemble(stem_conj(st), x);
  const double scale = 1.0 + std::sqrt(norm(element_cast<double>(st.value)));
  return detail::pole_checked_inverse(fc, scale) * (x * fc);
}

enum class AssociatorStatus { Vanishes, NonVanishing, Indeterminate };

constexpr std::string_view associator_status_name(AssociatorStatus s) {
  switch (s) {
    case AssociatorStatus::Vanishes: return "Vanishes";
    case AssociatorStatus::NonVanishing: return "NonVanishing";
    case AssociatorStatus::Indeterminate: return "Indeterminate";
  }
  return "Unknown";
}

/// |(x, f^c(x), f'_s(x))|.
template <Scalar S>
double associator_magnitude(const SliceFunction<S>& f, const Element<S>& x) {
  const Sphere<S> sphere = sphere_of(x);
  if (sphere.is_real()) return 0.0;
  const Stem<S> st = f.stem(sphere);
  const Element<S> fc = assemble(stem_conj(st), x);
  return std::sqrt(norm(element_cast<double>(associator(x, fc, st.ds()))));
}

template <Scalar S>
bool associator_vanishes(const SliceFunction<S>& f, const Element<S>& x) {
  return associator_magnitude(f, x) < kAssociatorTolerance;
}

/// Three-way verdict with an Indeterminate band within a factor 10 of the tolerance.
template <Scalar S>
AssociatorStatus associator_status(const SliceFunction<S>& f, const Element<S>& x) {
  const double m = associator_magnitude(f, x);
  if (m < kAssociatorTolerance / 10.0) return AssociatorStatus::Vanishes;
  if (m > kAssociatorTolerance * 10.0) return AssociatorStatus::NonVanishing;
  return AssociatorStatus::Indeterminate;
}

template <Scalar S>
struct TranslationPoints {
  Element<S> y;
  Element<S> z;
};

/// Points y, z of the sphere of x with (c.f)(x) = c f(y) and (f.c)(x) = f(z) c.
template <Scalar S>
TranslationPoints<S> constant_translation_points(const Element<S>& c, const SliceFunction<S>& f,
                                                 const Element<S>& x) {
  if (c.is_zero()) throw SliceError(ErrorCode::ZeroNotInvertible, "constant must be nonzero");
  const Sphere<S> sphere = sphere_of(x);
  if (sphere.is_real()) throw SliceError(ErrorCode::InvalidArgument, "point must be non-real");
  const Stem<S> st = f.stem(sphere);
  const Element<S>& d = st.ds();
  if (detail::element_tiny(d, 1.0 + std::sqrt(norm(element_cast<double>(st.value))))) {
    throw SliceError(ErrorCode::SphericalDerivativeVanishes, "spherical derivative vanishes at the point");
  }
  const Element<S> ci = inverse(c);
  const Element<S> di = inverse(d);
  return {(ci * (x * (c * d))) * di, ((x * (d * c)) * ci) * di};
}

template <Scalar S>
struct ReciprocalImage {
  std::vector<Element<double>> reciprocal_values;
  std::vector<Element<double>> pointwise_inverses;
  double hausdorff = 0.0;
};

/// Symmetric Hausdorff distance between two finite point sets.
inline double hausdorff_distance(const std::vector<Element<double>>& a, const std::vector<Element<double>>& b) {
  auto directed = [](const auto& p, const auto& q) {
    double worst = 0.0;
    for (const auto& u : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& v : q) best = std::min(best, std::sqrt(norm(Element<double>(u - v))));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  return std::max(directed(a, b), directed(b, a));
}

/// Images of a sampled circular set under f^{-.} and under x -> f(x)^{-1}.
template <Scalar S>
ReciprocalImage<S> reciprocal_image(const SliceFunction<S>& f, const std::vector<Element<S>>& samples) {
  const SliceFunction<S> r = star_reciprocal(f);
  ReciprocalImage<S> out;
  for (const auto& x : samples) {
    out.reciprocal_values.push_back(element_cast<double>(r(x)));
    out.pointwise_inverses.push_back(element_cast<double>(inverse(f(x))));
  }
  out.hausdorff = hausdorff_distance(out.reciprocal_values, out.pointwise_inverses);
  return out;
}

struct PathSample {
  double t = 0.0;
  std::optional<Element<double>> value;
  std::string error;
};

/// Values of T_f along a caller-supplied path, typically approaching a point
/// of the boundary of V(f'_s).
template <Scalar S>
std::vector<PathSample> t_f_path_probe(const SliceFunction<S>& f, const std::function<Element<S>(double)>& path,
                                       const std::vector<double>& ts) {
  std::vector<PathSample> out;
  for (double t : ts) {
    PathSample s{t, std::nullopt, {}};
    try {
      s.value = element_cast<double>(t_f(f, path(t)));
    } catch (const SliceError& e) {
      s.error = std::string(error_name(e.code()));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace slicefn
