#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "slicefn/slice_rep.hpp"

namespace slicefn {

enum class ZeroTag { Empty, Point, Whole };

constexpr std::string_view zero_tag_name(ZeroTag t) {
  switch (t) {
    case ZeroTag::Empty: return "Empty";
    case ZeroTag::Point: return "Point";
    case ZeroTag::Whole: return "Whole";
  }
  return "Unknown";
}

/// Zeros of f on one sphere: none, exactly one point, or the whole sphere.
template <Scalar S>
struct SphereZeroClass {
  ZeroTag tag = ZeroTag::Empty;
  std::optional<Element<S>> point;
  Sphere<S> sphere;
  /// Whole spheres are spot-checked at eight units.
  bool verified = true;
};

inline constexpr double kZeroTolerance = 1e-12;
inline constexpr double kUnitAcceptTolerance = 1e-9;

namespace detail {

template <Scalar S>
bool element_negligible(const Element<S>& e, double tol) {
  if constexpr (ScalarTraits<S>::exact)
    return e.is_zero();
  else
    return std::sqrt(norm(e)) <= tol;
}

/// Eight imaginary units used to spot-check whole-sphere zeros.
inline std::vector<Element<double>> probe_units(AlgebraId alg) {
  std::vector<Element<double>> units;
  for (int t = 1; t < alg.dim() && units.size() < 7; ++t) units.push_back(Element<double>::basis(alg, t));
  Element<double> diag(alg);
  for (int t = 1; t < alg.dim(); ++t) diag[t] = 1.0 / std::sqrt(double(alg.dim() - 1));
  units.push_back(diag);
  while (units.size() < 8) units.push_back(-units[units.size() % units.size()]);
  return units;
}

template <Scalar S>
bool verify_whole(const Stem<S>& st, const Sphere<S>& sphere, AlgebraId alg) {
  if (alg.level == 0) return true;
  Element<double> v = element_cast<double>(st.value);
  Element<double> d = st.derivative ? element_cast<double>(*st.derivative) : Element<double>(alg);
  const double beta = sphere.beta();
  for (const auto& J : probe_units(alg)) {
    if (std::sqrt(norm(v + (J * beta) * d)) > 1e-9 * (1.0 + std::sqrt(norm(v)) + beta * std::sqrt(norm(d)))) {
      return false;
    }
  }
  return true;
}

}  // namespace detail

/// Trichotomy from stem data: with a1 = vs and a2 = beta f'_s the zero on the
/// sphere is alpha + beta J, J = -a1 a2^{-1}, provided J is an imaginary unit.
/// The tests t(vs ds^{-1}) = 0 and n(vs) = beta^2 n(ds) avoid square roots.
template <Scalar S>
SphereZeroClass<S> classify_stem_zeros(const Stem<S>& st, const Sphere<S>& sphere, AlgebraId alg,
                                       double tol = kUnitAcceptTolerance) {
  SphereZeroClass<S> out;
  out.sphere = sphere;
  const Element<S> alpha = Element<S>::real(alg, sphere.alpha);
  if (sphere.is_real() || !st.derivative) {
    if (detail::element_negligible(st.value, kZeroTolerance)) {
      out.tag = ZeroTag::Whole;
      out.point = alpha;
    }
    return out;
  }
  const Element<S>& ds = *st.derivative;
  const bool ds_zero = [&] {
    if constexpr (ScalarTraits<S>::exact)
      return ds.is_zero();
    else
      return sphere.beta() * std::sqrt(norm(ds)) <= kZeroTolerance;
  }();
  if (ds_zero) {
    if (detail::element_negligible(st.value, kZeroTolerance)) {
      out.tag = ZeroTag::Whole;
      out.verified = detail::verify_whole(st, sphere, alg);
    }
    return out;
  }
  const Element<S> q = st.value * inverse(ds);
  const S nv = norm(st.value);
  const S target = sphere.beta_sq * norm(ds);
  bool is_unit;
  if constexpr (ScalarTraits<S>::exact) {
    is_unit = trace(q) == 0 && nv == target;
  } else {
    is_unit = std::abs(trace(q)) / sphere.beta() <= tol && std::abs(nv / target - 1.0) <= tol;
  }
  if (is_unit) {
    out.tag = ZeroTag::Point;
    out.point = alpha - im(q);
  }
  return out;
}

template <Scalar S>
SphereZeroClass<S> classify_sphere_zeros(const SliceFunction<S>& f, const Sphere<S>& sphere,
                                         double tol = kUnitAcceptTolerance) {
  return classify_stem_zeros(f.stem(sphere), sphere, f.algebra(), tol);
}

/// True iff N(f) vanishes on the sphere, i.e. the sphere meets V(f).
template <Scalar S>
bool normal_zero_on_sphere(const SliceFunction<S>& f, const Sphere<S>& sphere) {
  return classify_sphere_zeros(f, sphere).tag != ZeroTag::Empty;
}

// ---------------------------------------------------------------------------
// Camshaft effect

template <Scalar S>
struct CamshaftResult {
  SphereZeroClass<S> zero;
  /// Which of the four cases applied (0 when neither factor vanishes on the sphere).
  int case_id = 0;
  /// Tag agreement with a direct classification of the product.
  bool consistent = true;
  /// Distance between the formula point and the directly classified point.
  double discrepancy = 0.0;
};

template <Scalar S>
CamshaftResult<S> camshaft_zero(const SliceFunction<S>& f, const SliceFunction<S>& g, const Sphere<S>& sphere,
                                 std::optional<ZeroTag> f_tag = std::nullopt,
                                 std::optional<ZeroTag> g_tag = std::nullopt) {
  require_same_algebra(f.algebra(), g.algebra());
  const AlgebraId alg = f.algebra();
  const Stem<S> fs = f.stem(sphere);
  const Stem<S> gs = g.stem(sphere);
  const auto fz = classify_stem_zeros(fs, sphere, alg);
  const auto gz = classify_stem_zeros(gs, sphere, alg);
  if ((f_tag && *f_tag != fz.tag) || (g_tag && *g_tag != gz.tag)) {
    throw SliceError(ErrorCode::CaseMismatch, "supplied zero classes disagree with the stems");
  }
  const Stem<S> ps = stem_product(fs, gs, sphere.beta_sq);
  const auto direct = classify_stem_zeros(ps, sphere, alg);

  CamshaftResult<S> out;
  out.zero.sphere = sphere;
  if (fz.tag == ZeroTag::Whole || gz.tag == ZeroTag::Whole) {
    out.case_id = 1;
    out.zero.tag = ZeroTag::Whole;
  } else if (sphere.is_real()) {
    out.zero = direct;
  } else if (fz.tag == ZeroTag::Empty && gz.tag == ZeroTag::Empty) {
    out.zero.tag = ZeroTag::Empty;
  } else {
    const Element<S>& vf = fs.value;
    const Element<S>& df = fs.ds();
    const Element<S>& vg = gs.value;
    const Element<S>& dg = gs.ds();
    out.zero.tag = ZeroTag::Point;
    if (fz.tag == ZeroTag::Point && gz.tag == ZeroTag::Empty) {
      out.case_id = 2;
      const Element<S>& y = *fz.point;
      const Element<S> iy = im(y);
      Element<S> num = (y * df) * vg - ((y * iy) * df) * dg;
      Element<S> den = df * vg - (iy * df) * dg;
      out.zero.point = num * inverse(den);
    } else if (fz.tag == ZeroTag::Empty && gz.tag == ZeroTag::Point) {
      out.case_id = 3;
      const Element<S>& z = *gz.point;
      const Element<S> iz = im(z);
      Element<S> num = vf * (z * dg) - df * ((z * iz) * dg);
      Element<S> den = vf * dg - df * (iz * dg);
      out.zero.point = num * inverse(den);
    } else {
      out.case_id = 4;
      const Element<S>& y = *fz.point;
      const Element<S>& z = *gz.point;
      Element<S> d = (conj(y) * df) * dg - df * (z * dg);
      if (detail::element_negligible(d, kZeroTolerance)) {
        out.zero.tag = ZeroTag::Whole;
      } else {
        Element<S> num = (df * dg) * sphere.point_norm() - (y * df) * (z * dg);
        out.zero.point = num * inverse(d);
      }
    }
  }
  out.consistent = out.zero.tag == direct.tag;
  if (out.zero.point && direct.point) {
    out.discrepancy = max_abs_diff(element_cast<double>(*out.zero.point), element_cast<double>(*direct.point));
    if (out.discrepancy > 1e-6) out.consistent = false;
  }
  return out;
}

/// Case 4(b) point recomputed through the case 2 and case 3 formulas.
template <Scalar S>
std::pair<Element<S>, Element<S>> camshaft_alternatives(const SliceFunction<S>& f, const SliceFunction<S>& g,
                                                        const Sphere<S>& sphere) {
  const Stem<S> fs = f.stem(sphere);
  const Stem<S> gs = g.stem(sphere);
  const auto fz = classify_stem_zeros(fs, sphere, f.algebra());
  const auto gz = classify_stem_zeros(gs, sphere, f.algebra());
  if (fz.tag != ZeroTag::Point || gz.tag != ZeroTag::Point) {
    throw SliceError(ErrorCode::CaseMismatch, "both factors must have a single zero on the sphere");
  }
  const Element<S>& vf = fs.value;
  const Element<S>& df = fs.ds();
  const Element<S>& vg = gs.value;
  const Element<S>& dg = gs.ds();
  const Element<S>& y = *fz.point;
  const Element<S>& z = *gz.point;
  const Element<S> iy = im(y), iz = im(z);
  Element<S> w2 = ((y * df) * vg - ((y * iy) * df) * dg) * inverse(df * vg - (iy * df) * dg);
  Element<S> w3 = (vf * (z * dg) - df * ((z * iz) * dg)) * inverse(vf * dg - df * (iz * dg));
  return {w2, w3};
}

// ---------------------------------------------------------------------------
// Zero scan

namespace detail {

using cplx = std::complex<double>;

inline cplx horner(const std::vector<double>& p, cplx z) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline std::vector<double> derivative(const std::vector<double>& p) {
  std::vector<double> out;
  for (std::size_t n = 1; n < p.size(); ++n) out.push_back(p[n] * double(n));
  return out;
}

/// All complex roots of a real polynomial (coefficients low to high) by the
/// Aberth-Ehrlich iteration.
inline std::vector<cplx> polynomial_roots(std::vector<double> p) {
  while (!p.empty() && p.back() == 0.0) p.pop_back();
  const int n = int(p.size()) - 1;
  if (n < 1) return {};
  double bound = 0.0;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(p[k] / p[n]));
  bound += 1.0;
  std::vector<cplx> z(n);
  for (int k = 0; k < n; ++k) z[k] = std::polar(0.5 * bound, 2.0 * 3.14159265358979323846 * (k + 0.25) / n);
  const auto dp = derivative(p);
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0.0;
    for (int k = 0; k < n; ++k) {
      cplx v = horner(p, z[k]);
      if (v == 0.0) continue;
      cplx ratio = v / horner(dp, z[k]);
      cplx sum = 0.0;
      for (int m = 0; m < n; ++m)
        if (m != k) sum += 1.0 / (z[k] - z[m]);
      cplx step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      z[k] -= step;
      change = std::max(change, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (change < 1e-15) break;
  }
  return z;
}

/// Groups nearby roots, then polishes each cluster of size m by Newton's method
/// on the (m-1)-th derivative, where the multiple root becomes simple.
inline std::vector<std::pair<cplx, int>> clustered_roots(const std::vector<double>& p, double radius = 1e-3) {
  auto roots = polynomial_roots(p);
  std::vector<bool> used(roots.size(), false);
  std::vector<std::pair<cplx, int>> out;
  for (std::size_t a = 0; a < roots.size(); ++a) {
    if (used[a]) continue;
    cplx sum = roots[a];
    int m = 1;
    used[a] = true;
    for (std::size_t b = a + 1; b < roots.size(); ++b) {
      if (!used[b] && std::abs(roots[b] - roots[a]) < radius * (1.0 + std::abs(roots[a]))) {
        used[b] = true;
        sum += roots[b];
        ++m;
      }
    }
    cplx z = sum / double(m);
    std::vector<double> q = p;
    for (int t = 1; t < m; ++t) q = derivative(q);
    const auto dq = derivative(q);
    for (int iter = 0; iter < 50; ++iter) {
      cplx d = horner(dq, z);
      if (d == 0.0) break;
      cplx step = horner(q, z) / d;
      z -= step;
      if (std::abs(step) < 1e-16 * (1.0 + std::abs(z))) break;
    }
    out.emplace_back(z, m);
  }
  return out;
}

}  // namespace detail

struct ZeroHit {
  double alpha = 0.0;
  double beta = 0.0;
  ZeroTag tag = ZeroTag::Empty;
  std::optional<Element<double>> point;
  /// Distance in the (alpha, beta) half-plane to the nearest other hit.
  double isolation_radius = std::numeric_limits<double>::infinity();
};

namespace detail {

/// Best rational approximation with bounded denominator (continued fractions).
inline Rational rational_near(double x, long long max_den = 1000000) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    long long ai = static_cast<long long>(a);
    long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(x - double(p1) / double(q1)) < 1e-15 * (1.0 + std::abs(x))) break;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return Rational(p1) / Rational(q1);
}

template <Scalar S>
std::optional<ZeroHit> classify_hit(const SliceFunction<S>& f, double a, double b, double tol) {
  SphereZeroClass<S> zc;
  if constexpr (ScalarTraits<S>::exact) {
    Sphere<S> snapped{rational_near(a), rational_near(b * b)};
    bool close = std::abs(to_double(snapped.alpha) - a) < 1e-9 && std::abs(to_double(snapped.beta_sq) - b * b) < 1e-9;
    if (close) zc = classify_sphere_zeros(f, snapped, tol);
    if (!close || zc.tag == ZeroTag::Empty) {
      if (!f.is_closed_form()) return std::nullopt;
      return classify_hit(function_cast<double>(f), a, b, tol);
    }
    a = to_double(snapped.alpha);
    b = snapped.beta();
  } else {
    zc = classify_sphere_zeros(f, sphere_at<S>(a, b), tol);
  }
  if (zc.tag == ZeroTag::Empty) return std::nullopt;
  ZeroHit hit{a, b, zc.tag, std::nullopt};
  if (zc.point) hit.point = element_cast<double>(*zc.point);
  return hit;
}

}  // namespace detail

/// Spheres in `rect` carrying zeros of f. Closed forms go through the roots of
/// the real polynomial N(numerator); other bodies through a grid scan of |N(f)|
/// refined by pattern search. Sorted by alpha, then beta.
template <Scalar S>
std::vector<ZeroHit> zero_scan(const SliceFunction<S>& f, const Rect& rect, int grid_density = 64,
                               double tol = kUnitAcceptTolerance) {
  std::vector<std::pair<double, double>> candidates;
  std::optional<StarPolynomial<S>> numerator;
  if (auto p = f.template as<StarPolynomial<S>>()) numerator = *p;
  if (auto q = f.template as<SemiregularForm<S>>()) numerator = q->numerator();

  double class_tol = tol;
  if (numerator) {
    if (numerator->is_zero()) throw SliceError(ErrorCode::InvalidArgument, "function vanishes identically");
    std::vector<double> np;
    const StarPolynomial<S> n = star_normal(*numerator);
    for (const auto& c : n.coeffs()) np.push_back(to_double(c[0]));
    for (auto [z, m] : detail::clustered_roots(np)) {
      double a = z.real();
      double b = std::abs(z.imag());
      if (b < 1e-7 * (1.0 + std::abs(z))) b = 0.0;
      if (z.imag() < 0 && b > 0) continue;
      candidates.emplace_back(a, b);
    }
  } else {
    class_tol = std::max(tol, 1e-6);
    const int n = std::max(grid_density, 4);
    auto modulus = [&](double a, double b) {
      b = std::abs(b);
      try {
        Sphere<S> s = sphere_at<S>(a, b);
        Stem<S> st = stem_normal(f.stem(s), s.beta_sq);
        double A = to_double(st.value[0]);
        double B = st.derivative ? to_double((*st.derivative)[0]) : 0.0;
        return std::sqrt(A * A + b * b * B * B);
      } catch (const SliceError&) {
        return std::numeric_limits<double>::infinity();
      }
    };
    const double ha = (rect.alpha1 - rect.alpha0) / n, hb = (rect.beta1 - rect.beta0) / n;
    std::vector<double> grid((n + 1) * (n + 1));
    for (int ib = 0; ib <= n; ++ib)
      for (int ia = 0; ia <= n; ++ia) grid[ib * (n + 1) + ia] = modulus(rect.alpha0 + ha * ia, rect.beta0 + hb * ib);
    for (int ib = 0; ib <= n; ++ib) {
      for (int ia = 0; ia <= n; ++ia) {
        double v = grid[ib * (n + 1) + ia];
        if (!std::isfinite(v)) continue;
        bool local_min = true;
        for (int db = -1; db <= 1 && local_min; ++db) {
          for (int da = -1; da <= 1; ++da) {
            int pa = ia + da, pb = ib + db;
            if ((da == 0 && db == 0) || pa < 0 || pb < 0 || pa > n || pb > n) continue;
            if (grid[pb * (n + 1) + pa] < v) {
              local_min = false;
              break;
            }
          }
        }
        if (!local_min) continue;
        double a = rect.alpha0 + ha * ia, b = rect.beta0 + hb * ib;
        double step = std::max(ha, hb);
        double best = v;
        while (step > 1e-15) {
          bool moved = false;
          for (auto [da, db] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
            double na = a + da * step, nb = std::max(0.0, b + db * step);
            double m = modulus(na, nb);
            if (m < best) {
              best = m;
              a = na;
              b = nb;
              moved = true;
              break;
            }
          }
          if (!moved) step *= 0.5;
        }
        if (best < 1e-10) candidates.emplace_back(a, b);
      }
    }
  }

  std::vector<ZeroHit> hits;
  for (auto [a, b] : candidates) {
    if (a < rect.alpha0 - 1e-9 || a > rect.alpha1 + 1e-9 || b < rect.beta0 - 1e-9 || b > rect.beta1 + 1e-9) continue;
    bool duplicate = false;
    for (const auto& h : hits)
      if (std::hypot(h.alpha - a, h.beta - b) < 1e-6) duplicate = true;
    if (duplicate) continue;
    std::optional<ZeroHit> hit;
    try {
      hit = detail::classify_hit(f, a, b, class_tol);
    } catch (const SliceError&) {
      continue;
    }
    if (hit) hits.push_back(*hit);
  }
  for (auto& h : hits)
    for (const auto& o : hits)
      if (&h != &o) h.isolation_radius = std::min(h.isolation_radius, std::hypot(h.alpha - o.alpha, h.beta - o.beta));
  std::sort(hits.begin(), hits.end(),
            [](const ZeroHit& p, const ZeroHit& q) { return p.alpha != q.alpha ? p.alpha < q.alpha : p.beta < q.beta; });
  return hits;
}

}  // namespace slicefn
