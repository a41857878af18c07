#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <vector>

#include "slicefn/random.hpp"
#include "slicefn/reciprocal.hpp"

namespace slicefn {

// ---------------------------------------------------------------------------
// Distances

namespace detail {

inline bool same_slice(const Element<double>& x, const Element<double>& y, double tol = 1e-12) {
  const Element<double> a = im(x), b = im(y);
  const double na = std::sqrt(norm(a)), nb = std::sqrt(norm(b));
  if (na <= tol || nb <= tol) return true;
  return std::abs(std::abs(dot(a, b)) - na * nb) <= tol * na * nb;
}

}  // namespace detail

template <Scalar S>
double sigma(const Element<S>& x, const Element<S>& y) {
  const Element<double> a = element_cast<double>(x), b = element_cast<double>(y);
  if (detail::same_slice(a, b)) return std::sqrt(norm(Element<double>(a - b)));
  const double dr = a[0] - b[0];
  const double di = std::sqrt(norm(im(a))) + std::sqrt(norm(im(b)));
  return std::sqrt(dr * dr + di * di);
}

template <Scalar S>
double tau(const Element<S>& x, const Element<S>& y) {
  const Element<double> a = element_cast<double>(x), b = element_cast<double>(y);
  if (detail::same_slice(a, b)) return std::sqrt(norm(Element<double>(a - b)));
  const double dr = a[0] - b[0];
  const double di = std::sqrt(norm(im(a))) - std::sqrt(norm(im(b)));
  return std::sqrt(dr * dr + di * di);
}

/// Delta_y(x) = x^2 - 2 re(y) x + n(y).
template <Scalar S>
Element<S> delta_value(const Element<S>& y, const Element<S>& x) {
  return x * x - x * S(S(2) * y[0]) + Element<S>::real(x.algebra(), norm(y));
}

template <Scalar S>
double u_dist(const Element<S>& x, const Element<S>& y) {
  return std::sqrt(std::sqrt(norm(element_cast<double>(delta_value(y, x)))));
}

// ---------------------------------------------------------------------------
// Spherical Laurent coefficients

struct ContourConfig {
  double rho = 0.0;
  int nodes = 512;
  int max_nodes = 16384;
  double tolerance = 1e-9;
};

struct LaurentTerm {
  Element<double> u;
  Element<double> v;
};

struct SphericalLaurent {
  Element<double> center;
  Element<double> unit;
  double rho = 0.0;
  int nodes = 0;
  std::map<int, LaurentTerm> terms;
};

namespace detail {

using Complex = std::complex<double>;

inline Element<double> slice_point(const Element<double>& unit, Complex z) {
  return Element<double>::real(unit.algebra(), z.real()) + unit * z.imag();
}

/// w . a for w in C_J identified with a complex number.
inline Element<double> slice_scale(const Element<double>& unit, Complex w, const Element<double>& a) {
  return a * w.real() + (unit * a) * w.imag();
}

inline Element<double> slice_unit_of(const Element<double>& y) {
  const Element<double> iy = im(y);
  const double n = std::sqrt(norm(iy));
  if (n > 0.0) return iy / n;
  return Element<double>::basis(y.algebra(), y.algebra().level > 0 ? 1 : 0);
}

struct ContourSample {
  Complex zeta;
  Complex weight_base;
  Element<double> value;
};

}  // namespace detail

/// Relative change below which a stalled refinement is taken as rounding noise.
inline constexpr double kRoundingFloor = 1e-6;

inline double default_contour_radius(const Element<double>& y) {
  const double beta = std::sqrt(norm(im(y)));
  return beta > 0.0 ? std::min(0.5, beta / 2.0) : 0.5;
}

/// Coefficients u_k, v_k of f(x) = sum Delta_y^k(x)(x u_k + v_k) for k in [k_lo, k_hi].
/// The contour is the pair of circles |zeta - y| = rho, |zeta - y^c| = rho in C_J
/// (one circle when y is real), with trapezoidal quadrature refined by doubling.
template <Scalar S>
SphericalLaurent spherical_laurent_extract(const SliceFunction<S>& f, const Element<S>& center, int k_lo, int k_hi,
                                           ContourConfig cfg = {}) {
  if (k_lo > k_hi) throw SliceError(ErrorCode::InvalidArgument, "empty coefficient window");
  const Element<double> y = element_cast<double>(center);
  const AlgebraId alg = y.algebra();
  const Element<double> J = detail::slice_unit_of(y);
  const double alpha = y[0];
  const double beta = std::sqrt(norm(im(y)));
  const double rho = cfg.rho > 0.0 ? cfg.rho : default_contour_radius(y);
  if (beta > 0.0 && rho >= 2.0 * beta) {
    throw SliceError(ErrorCode::ContourThroughSingularity, "contour circles overlap the conjugate point");
  }
  const auto eval = detail::double_evaluator(f);
  const detail::Complex yc(alpha, beta), yb(alpha, -beta);
  std::vector<detail::Complex> centres{yc};
  if (beta > 0.0) centres.push_back(yb);

  auto delta = [&](detail::Complex z) { return (z - yc) * (z - yb); };
  auto compute = [&](int n) {
    std::map<int, LaurentTerm> terms;
    for (int k = k_lo; k <= k_hi; ++k) terms.emplace(k, LaurentTerm{Element<double>(alg), Element<double>(alg)});
    for (const auto& c : centres) {
      for (int m = 0; m < n; ++m) {
        const double theta = 2.0 * std::numbers::pi * m / n;
        const detail::Complex e(std::cos(theta), std::sin(theta));
        const detail::Complex zeta = c + rho * e;
        Element<double> fz(alg);
        try {
          fz = eval(detail::slice_point(J, zeta));
        } catch (const SliceError& err) {
          if (err.code() == ErrorCode::PoleProximity || err.code() == ErrorCode::OutOfDomain ||
              err.code() == ErrorCode::OutOfAnnulus) {
            throw SliceError(ErrorCode::ContourThroughSingularity, "contour meets a singularity of f");
          }
          throw;
        }
        for (const auto& vv : fz.coords()) {
          if (!std::isfinite(vv)) {
            throw SliceError(ErrorCode::ContourThroughSingularity, "non-finite value on the contour");
          }
        }
        const detail::Complex base = rho * e / double(n);
        const detail::Complex d = delta(zeta);
        for (int k = k_lo; k <= k_hi; ++k) {
          const detail::Complex w = base * std::pow(d, -k - 1);
          auto& t = terms.at(k);
          t.u += detail::slice_scale(J, w, fz);
          t.v += detail::slice_scale(J, w * (zeta - 2.0 * alpha), fz);
        }
      }
    }
    return terms;
  };

  int n = std::max(cfg.nodes, 8);
  auto terms = compute(n);
  std::optional<double> previous;
  while (true) {
    if (2 * n > cfg.max_nodes) {
      throw SliceError(ErrorCode::NonConvergentWindow, "quadrature did not settle within the node budget");
    }
    auto finer = compute(2 * n);
    double change = 0.0, scale = 0.0;
    for (const auto& [k, t] : finer) {
      const auto& old = terms.at(k);
      const double s = std::pow(beta > 0.0 ? 2.0 * beta * rho : rho * rho, k);
      change = std::max(change, s * std::max(max_abs_diff(t.u, old.u), max_abs_diff(t.v, old.v)));
      scale = std::max(scale, s * std::max(std::sqrt(norm(t.u)), std::sqrt(norm(t.v))));
    }
    terms = std::move(finer);
    n *= 2;
    const double ref = std::max(1.0, scale);
    if (change <= cfg.tolerance * ref) break;
    if (previous && change >= 0.5 * *previous && change <= kRoundingFloor * ref) break;
    previous = change;
  }
  return SphericalLaurent{y, J, rho, n, std::move(terms)};
}

/// sum_k Delta_y^k(x)(x u_k + v_k).
inline Element<double> laurent_reconstruct(const SphericalLaurent& series, const Element<double>& x) {
  const Element<double> d = delta_value(series.center, x);
  Element<double> out(x.algebra());
  for (const auto& [k, t] : series.terms) {
    Element<double> p = Element<double>::real(x.algebra(), 1.0);
    const Element<double> base = k >= 0 ? d : inverse(d);
    for (int m = 0; m < std::abs(k); ++m) p = p * base;
    out += p * (x * t.u + t.v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

enum class SingularityClass { Removable, Pole, Essential };

constexpr std::string_view singularity_class_name(SingularityClass c) {
  switch (c) {
    case SingularityClass::Removable: return "Removable";
    case SingularityClass::Pole: return "Pole";
    case SingularityClass::Essential: return "Essential";
  }
  return "Unknown";
}

/// Finite order, or infinite as far as the probe bound.
struct Order {
  std::optional<int> value;
  int bound = 0;

  bool finite() const { return value.has_value(); }
  std::string to_string() const {
    return value ? std::to_string(*value) : "Infinite(" + std::to_string(bound) + ")";
  }
};

struct GrowthDiagnostic {
  Element<double> point;
  int k = 0;
  std::vector<double> radii;
  std::vector<double> sups;
  double slope = 0.0;
};

struct SingularityReport {
  Element<double> center;
  bool real_center = false;
  Order spherical_order;
  Order order_at_y;
  std::optional<Order> order_at_conjugate;
  SingularityClass klass = SingularityClass::Removable;
  int k_max = 0;
  SphericalLaurent coefficients;
  std::vector<GrowthDiagnostic> growth;
  /// Point of the sphere with smaller order than the others, if any.
  std::optional<Element<double>> exceptional_point;
  std::optional<int> exceptional_point_order;
  /// Vanishing order of Delta_y^k f at the exceptional point.
  std::optional<int> exceptional_zero_order;
};

struct RadiiConfig {
  double r_max = 1e-2;
  double r_min = 1e-6;
  int levels = 5;
  int samples = 64;
};

inline constexpr double kBoundedSlope = -0.1;
inline constexpr double kUnboundedSlope = -0.9;
inline constexpr double kCoefficientSignificance = 1e-8;

namespace detail {

inline double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Growth of |weight(z)| |f(z)| on shrinking slice circles around w.
template <class Eval, class Weight>
GrowthDiagnostic growth_probe(const Eval& eval, const Element<double>& unit, Complex w, int k, const Weight& weight,
                              const RadiiConfig& cfg) {
  GrowthDiagnostic g;
  g.point = slice_point(unit, w);
  g.k = k;
  std::vector<double> lx, ly;
  for (int l = 0; l < cfg.levels; ++l) {
    const double t = cfg.levels > 1 ? double(l) / (cfg.levels - 1) : 0.0;
    const double r = cfg.r_max * std::pow(cfg.r_min / cfg.r_max, t);
    double sup = 0.0;
    try {
      for (int m = 0; m < cfg.samples; ++m) {
        const double theta = 2.0 * std::numbers::pi * (m + 0.5) / cfg.samples;
        const Complex z = w + r * Complex(std::cos(theta), std::sin(theta));
        const double v = weight(z, k) * std::sqrt(norm(eval(slice_point(unit, z))));
        sup = std::max(sup, v);
      }
    } catch (const SliceError& e) {
      // Radii below the pole guard are dropped.
      if (e.code() != ErrorCode::PoleProximity) throw;
      break;
    }
    g.radii.push_back(r);
    g.sups.push_back(sup);
    lx.push_back(std::log(r));
    ly.push_back(std::log(std::max(sup, std::numeric_limits<double>::min())));
  }
  if (lx.size() < 3) throw SliceError(ErrorCode::ProbeInconclusive, "too few radii clear of the pole guard");
  g.slope = regression_slope(lx, ly);
  return g;
}

}  // namespace detail

/// Decides removable / pole / essential at the sphere of y from boundedness of
/// (z - y)^k (z - y^c)^k f(z) on the slice and from the spherical Laurent window.
template <Scalar S>
SingularityReport classify_singularity(const SliceFunction<S>& f, const Element<S>& center, int k_max = 12,
                                       RadiiConfig radii = {}, ContourConfig contour = {}) {
  const Element<double> y = element_cast<double>(center);
  const Element<double> J = detail::slice_unit_of(y);
  const double alpha = y[0];
  const double beta = std::sqrt(norm(im(y)));
  const bool real_center = beta == 0.0;
  const auto eval = detail::double_evaluator(f);
  const detail::Complex yc(alpha, beta), yb(alpha, -beta);

  SingularityReport rep;
  rep.center = y;
  rep.real_center = real_center;
  rep.k_max = k_max;

  auto weight = [&](detail::Complex z, int k) {
    const double d = real_center ? std::abs(z - yc) : std::abs((z - yc) * (z - yb));
    return std::pow(d, k);
  };
  auto point_order = [&](detail::Complex w) {
    for (int k = 0; k <= k_max; ++k) {
      auto g = detail::growth_probe(eval, J, w, k, weight, radii);
      rep.growth.push_back(g);
      if (g.slope > kBoundedSlope) return Order{k, k_max};
      if (g.slope > kUnboundedSlope) {
        throw SliceError(ErrorCode::ProbeInconclusive, "growth slope " + std::to_string(g.slope) +
                                                           " lies in the inconclusive band");
      }
    }
    return Order{std::nullopt, k_max};
  };
  rep.order_at_y = point_order(yc);
  if (!real_center) rep.order_at_conjugate = point_order(yb);

  if (contour.rho <= 0.0) contour.rho = radii.r_max;
  rep.coefficients = spherical_laurent_extract(f, center, -(k_max + 1), 1, contour);
  const double s = real_center ? contour.rho * contour.rho : 2.0 * beta * contour.rho;
  const double xscale = std::sqrt(norm(y)) + contour.rho;
  std::map<int, double> weights;
  double top = 0.0;
  for (const auto& [k, t] : rep.coefficients.terms) {
    const double w = std::pow(s, k) * (xscale * std::sqrt(norm(t.u)) + std::sqrt(norm(t.v)));
    weights[k] = w;
    top = std::max(top, w);
  }
  int k0 = 0;
  for (const auto& [k, w] : weights) {
    if (k < 0 && w > kCoefficientSignificance * top) {
      k0 = -k;
      break;
    }
  }
  if (k0 > k_max)
    rep.spherical_order = Order{std::nullopt, 2 * k_max};
  else
    rep.spherical_order = Order{2 * k0, 2 * k_max};

  const bool points_finite = rep.order_at_y.finite() && (!rep.order_at_conjugate || rep.order_at_conjugate->finite());
  if (points_finite) {
    int m = *rep.order_at_y.value;
    if (rep.order_at_conjugate) m = std::max(m, *rep.order_at_conjugate->value);
    const int expected = real_center ? (m + 1) / 2 : m;
    if (!rep.spherical_order.finite() || *rep.spherical_order.value != 2 * expected) {
      throw SliceError(ErrorCode::ProbeInconclusive, "point orders and spherical order disagree");
    }
    rep.klass = m == 0 ? SingularityClass::Removable : SingularityClass::Pole;
    if (!real_center && *rep.order_at_y.value != *rep.order_at_conjugate->value) {
      const bool at_y = *rep.order_at_y.value < *rep.order_at_conjugate->value;
      const detail::Complex w = at_y ? yc : yb;
      rep.exceptional_point = detail::slice_point(J, w);
      rep.exceptional_point_order = at_y ? *rep.order_at_y.value : *rep.order_at_conjugate->value;
      auto g = detail::growth_probe(eval, J, w, m, weight, radii);
      rep.exceptional_zero_order = static_cast<int>(std::lround(g.slope));
    }
  } else {
    const bool sph_large = !rep.spherical_order.finite() || *rep.spherical_order.value > (real_center ? k_max : 2 * k_max);
    const bool conj_finite_y_inf = !rep.order_at_y.finite() || !rep.order_at_conjugate ||
                                   !rep.order_at_conjugate->finite();
    if (!conj_finite_y_inf) throw SliceError(ErrorCode::ProbeInconclusive, "inconsistent point orders");
    if (!sph_large && real_center) {
      throw SliceError(ErrorCode::ProbeInconclusive, "essential growth with a short spherical window");
    }
    if (!real_center && rep.spherical_order.finite()) {
      throw SliceError(ErrorCode::ProbeInconclusive, "essential growth with a finite spherical order");
    }
    rep.klass = SingularityClass::Essential;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Semiregular arithmetic

template <Scalar S>
SemiregularForm<S> semiregular_reciprocal(const SemiregularForm<S>& f) {
  StarPolynomial<S> n = detail::real_part_polynomial(star_normal(f.numerator()));
  if (n.is_zero()) throw SliceError(ErrorCode::NormalIdenticallyZero, "numerator has identically zero normal");
  return SemiregularForm<S>(star_mul(f.denominator(), star_conj(f.numerator())), n).normalized();
}

// ---------------------------------------------------------------------------
// Casorati-Weierstrass density probe

struct DensityConfig {
  double r_in = 0.08;
  double r_out = 0.125;
  int samples = 1000000;
  int targets = 2000;
  double eps = 0.15;
  double target_radius = 1.0;
  std::uint64_t seed = 0;
};

struct DensityReport {
  double coverage = 0.0;
  int covered = 0;
  int targets = 0;
  int samples = 0;
  int failed_samples = 0;
  bool planar_reduction = false;
  std::uint64_t seed = 0;
};

namespace detail {

/// Distance from t to {a1 + J a2 : J imaginary unit}, the image of one sphere.
inline double sphere_image_distance(const Element<double>& t, const Element<double>& a1, const Element<double>& a2) {
  const Element<double> d = t - a1;
  const double n2 = std::sqrt(norm(a2));
  if (n2 == 0.0) return std::sqrt(norm(d));
  if (t.algebra().level == 1) {
    const Element<double> i = Element<double>::basis(t.algebra(), 1);
    return std::min(std::sqrt(norm(Element<double>(d - i * a2))), std::sqrt(norm(Element<double>(d + i * a2))));
  }
  const double along = dot(d, a2) / n2;
  const double perp = std::sqrt(std::max(0.0, norm(d) - along * along));
  return std::sqrt(along * along + (perp - n2) * (perp - n2));
}

}  // namespace detail

/// Fraction of random targets in a ball that lie within eps of f(x) for some x
/// in the punctured shell around the sphere of y. Every sampled sphere
/// contributes its whole image, i.e. all slices at once.
template <Scalar S>
DensityReport density_probe(const SliceFunction<S>& f, const Element<S>& center, DensityConfig cfg = {}) {
  const Element<double> y = element_cast<double>(center);
  const AlgebraId alg = y.algebra();
  const double ya = y[0];
  const double yb = std::sqrt(norm(im(y)));
  Rng rng(cfg.seed);
  DensityReport rep;
  rep.seed = cfg.seed;
  std::vector<Element<double>> a1s, a2s;
  a1s.reserve(cfg.samples);
  a2s.reserve(cfg.samples);
  const bool exact = ScalarTraits<S>::exact;
  std::optional<SliceFunction<double>> fd;
  if constexpr (std::is_same_v<S, double>)
    fd = f;
  else if (f.is_closed_form())
    fd = function_cast<double>(f);
  (void)exact;
  bool all_real = true;
  for (int s = 0; s < cfg.samples; ++s) {
    double a, b;
    do {
      const double r = std::sqrt(rng.uniform(cfg.r_in * cfg.r_in, cfg.r_out * cfg.r_out));
      const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
      a = ya + r * std::cos(th);
      b = yb + r * std::sin(th);
    } while (b <= 0.0);
    try {
      Stem<double> st;
      if (fd) {
        st = fd->stem(sphere_at<double>(a, b));
      } else {
        Stem<S> se = f.stem(sphere_at<S>(a, b));
        st = {element_cast<double>(se.value), std::nullopt};
        if (se.derivative) st.derivative = element_cast<double>(*se.derivative);
      }
      Element<double> a2 = st.ds() * b;
      if (!is_real(st.value) || !is_real(a2)) all_real = false;
      a1s.push_back(st.value);
      a2s.push_back(a2);
      ++rep.samples;
    } catch (const SliceError&) {
      ++rep.failed_samples;
    }
  }
  std::vector<Element<double>> targets;
  for (int m = 0; m < cfg.targets; ++m) {
    auto p = random_ball_point(alg.dim(), rng);
    Element<double> t(alg);
    for (int c = 0; c < alg.dim(); ++c) t[c] = cfg.target_radius * p[c];
    targets.push_back(t);
  }
  rep.targets = cfg.targets;
  rep.planar_reduction = all_real && alg.level > 0;
  if (rep.planar_reduction) {
    const double cell = cfg.eps;
    std::map<std::pair<long long, long long>, std::vector<std::pair<double, double>>> grid;
    for (std::size_t s = 0; s < a1s.size(); ++s) {
      const double px = a1s[s][0], py = std::abs(a2s[s][0]);
      if (!std::isfinite(px) || !std::isfinite(py)) continue;
      if (std::abs(px) > 1e6 || py > 1e6) continue;
      grid[{static_cast<long long>(std::floor(px / cell)), static_cast<long long>(std::floor(py / cell))}].push_back(
          {px, py});
    }
    for (const auto& t : targets) {
      const double tx = t[0], ty = std::sqrt(norm(im(t)));
      const long long cx = static_cast<long long>(std::floor(tx / cell));
      const long long cy = static_cast<long long>(std::floor(ty / cell));
      bool hit = false;
      for (long long dx = -1; dx <= 1 && !hit; ++dx) {
        for (long long dy = -1; dy <= 1 && !hit; ++dy) {
          auto it = grid.find({cx + dx, cy + dy});
          if (it == grid.end()) continue;
          for (const auto& [px, py] : it->second) {
            if (std::hypot(px - tx, py - ty) <= cfg.eps) {
              hit = true;
              break;
            }
          }
        }
      }
      if (hit) ++rep.covered;
    }
  } else {
    for (const auto& t : targets) {
      for (std::size_t s = 0; s < a1s.size(); ++s) {
        if (detail::sphere_image_distance(t, a1s[s], a2s[s]) <= cfg.eps) {
          ++rep.covered;
          break;
        }
      }
    }
  }
  rep.coverage = rep.targets > 0 ? double(rep.covered) / rep.targets : 0.0;
  return rep;
}

/// Truncated exponential series sum_{n <= terms} x^{-n} / n! centred at 0.
inline StarLaurent<double> truncated_exp_inverse(AlgebraId alg, int terms = 40) {
  std::map<int, Element<double>> cs;
  double fact = 1.0;
  for (int n = 0; n <= terms; ++n) {
    if (n > 0) fact *= n;
    cs.emplace(-n, Element<double>::real(alg, 1.0 / fact));
  }
  return StarLaurent<double>(alg, 0.0, std::move(cs));
}

}  // namespace slicefn
