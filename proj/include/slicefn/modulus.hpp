#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "slicefn/random.hpp"
#include "slicefn/reciprocal.hpp"

namespace slicefn {

inline constexpr double kConstantModulusTolerance = 1e-10;
inline constexpr double kMembershipTolerance = 1e-10;
inline constexpr int kSphereGridSize = 512;

namespace detail {

/// Deterministic spread of imaginary units used as a sphere grid.
inline std::vector<Element<double>> unit_grid(AlgebraId alg, int count, std::uint64_t seed = 7) {
  std::vector<Element<double>> units;
  const int n = alg.dim() - 1;
  if (n == 1) {
    units.push_back(Element<double>::basis(alg, 1));
    units.push_back(-Element<double>::basis(alg, 1));
    return units;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int m = 0; m < count; ++m) {
      double z = 1.0 - 2.0 * (m + 0.5) / count;
      double r = std::sqrt(1.0 - z * z);
      Element<double> u(alg);
      u[1] = r * std::cos(golden * m);
      u[2] = r * std::sin(golden * m);
      u[3] = z;
      units.push_back(u);
    }
    return units;
  }
  Rng rng(seed);
  for (int m = 0; m < count; ++m) units.push_back(random_unit<double>(alg, rng));
  return units;
}

/// Distance from e to span{1, a, b, ab} for imaginary a, b (the subalgebra they generate).
inline double distance_to_generated(const Element<double>& e, const Element<double>& a, const Element<double>& b) {
  const AlgebraId alg = e.algebra();
  std::vector<Element<double>> basis;
  auto add = [&](Element<double> v) {
    for (const auto& q : basis) v = v - q * dot(v, q);
    double n = std::sqrt(norm(v));
    if (n > 1e-12) basis.push_back(v / n);
  };
  add(Element<double>::real(alg, 1.0));
  add(a);
  add(b);
  add(a * b);
  Element<double> r = e;
  for (const auto& q : basis) r = r - q * dot(r, q);
  return std::sqrt(norm(r));
}

}  // namespace detail

struct SphereExtrema {
  double alpha = 0.0;
  double beta = 0.0;
  bool constant_modulus = false;
  std::optional<Element<double>> max_point;
  std::optional<Element<double>> min_point;
  double max_value = 0.0;
  double min_value = 0.0;
  bool algebra_membership_check = true;
  double grid_max = 0.0;
  double grid_min = 0.0;
  bool grid_check = true;
  int grid_size = 0;
};

/// Extrema of |f| on the sphere of y from v = vs f(y) f'_s(y)^c, checked on a grid.
template <Scalar S>
SphereExtrema sphere_extrema(const SliceFunction<S>& f, const Element<S>& y) {
  const Sphere<S> sphere = sphere_of(y);
  if (sphere.is_real()) throw SliceError(ErrorCode::InvalidArgument, "sphere extrema need a non-real point");
  const Stem<S> st = f.stem(sphere);
  const Element<double> vs = element_cast<double>(st.value);
  const Element<double> ds = element_cast<double>(st.ds());
  const AlgebraId alg = f.algebra();
  const double alpha = to_double(sphere.alpha);
  const double beta = sphere.beta();
  const Element<double> v = vs * conj(ds);
  const Element<double> iv = im(v);
  const double niv = std::sqrt(norm(iv));
  const double base = norm(vs) + beta * beta * norm(ds);

  SphereExtrema out;
  out.alpha = alpha;
  out.beta = beta;
  out.constant_modulus = niv <= kConstantModulusTolerance;
  if (out.constant_modulus) {
    out.max_value = out.min_value = std::sqrt(std::max(0.0, base));
  } else {
    const Element<double> unit = iv / niv;
    out.max_point = Element<double>::real(alg, alpha) + unit * beta;
    out.min_point = Element<double>::real(alg, alpha) - unit * beta;
    out.max_value = std::sqrt(std::max(0.0, base + 2.0 * beta * niv));
    out.min_value = std::sqrt(std::max(0.0, base - 2.0 * beta * niv));
    out.algebra_membership_check =
        detail::distance_to_generated(*out.max_point, im(vs), im(ds)) <= kMembershipTolerance &&
        detail::distance_to_generated(*out.min_point, im(vs), im(ds)) <= kMembershipTolerance;
  }

  const auto units = detail::unit_grid(alg, kSphereGridSize);
  out.grid_size = static_cast<int>(units.size());
  out.grid_max = 0.0;
  out.grid_min = std::numeric_limits<double>::infinity();
  for (const auto& J : units) {
    const double m = std::sqrt(norm(Element<double>(vs + (J * beta) * ds)));
    out.grid_max = std::max(out.grid_max, m);
    out.grid_min = std::min(out.grid_min, m);
  }
  out.grid_check = out.max_value >= out.grid_max - 1e-3 && out.min_value <= out.grid_min + 1e-3 &&
                   out.grid_max <= out.max_value + 1e-9 && out.grid_min >= out.min_value - 1e-9;
  return out;
}

enum class ExtremumVerdict { IsLocalMax, IsLocalMin, Neither, SaddleAmbiguous };

constexpr std::string_view extremum_verdict_name(ExtremumVerdict v) {
  switch (v) {
    case ExtremumVerdict::IsLocalMax: return "IsLocalMax";
    case ExtremumVerdict::IsLocalMin: return "IsLocalMin";
    case ExtremumVerdict::Neither: return "Neither";
    case ExtremumVerdict::SaddleAmbiguous: return "SaddleAmbiguous";
  }
  return "Unknown";
}

struct ExtremumReport {
  ExtremumVerdict verdict = ExtremumVerdict::Neither;
  bool constant = false;
  double center_value = 0.0;
  double max_excess = 0.0;
  double max_deficit = 0.0;
  int samples = 0;
  int failed_samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kExtremumMargin = 1e-12;

/// Compares |f| at x0 with Monte-Carlo samples in the ball and an axis grid.
template <Scalar S>
ExtremumReport local_extremum_probe(const SliceFunction<S>& f, const Element<S>& x0, double radius,
                                    int samples = 4096, std::uint64_t seed = 0) {
  if (radius <= 0.0) throw SliceError(ErrorCode::InvalidArgument, "radius must be positive");
  const auto eval = detail::double_evaluator(f);
  const Element<double> c = element_cast<double>(x0);
  const AlgebraId alg = c.algebra();
  const int dim = alg.dim();
  ExtremumReport rep;
  rep.seed = seed;
  rep.center_value = std::sqrt(norm(eval(c)));
  auto visit = [&](const Element<double>& x) {
    try {
      const double m = std::sqrt(norm(eval(x)));
      rep.max_excess = std::max(rep.max_excess, m - rep.center_value);
      rep.max_deficit = std::max(rep.max_deficit, rep.center_value - m);
      ++rep.samples;
    } catch (const SliceError&) {
      ++rep.failed_samples;
    }
  };
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto p = random_ball_point(dim, rng);
    Element<double> x = c;
    for (int t = 0; t < dim; ++t) x[t] += radius * p[t];
    visit(x);
  }
  for (int t = 0; t < dim; ++t) {
    for (int m = 1; m <= 16; ++m) {
      for (double sign : {1.0, -1.0}) {
        Element<double> x = c;
        x[t] += sign * radius * m / 16.0;
        visit(x);
      }
    }
  }
  const bool above = rep.max_excess > kExtremumMargin;
  const bool below = rep.max_deficit > kExtremumMargin;
  if (rep.failed_samples > 0 && !(above && below)) {
    rep.verdict = ExtremumVerdict::SaddleAmbiguous;
  } else if (!above && !below) {
    rep.constant = true;
    rep.verdict = ExtremumVerdict::IsLocalMax;
  } else if (!above) {
    rep.verdict = ExtremumVerdict::IsLocalMax;
  } else if (!below) {
    rep.verdict = ExtremumVerdict::IsLocalMin;
  } else {
    rep.verdict = ExtremumVerdict::Neither;
  }
  return rep;
}

enum class CompactKind { Ball, Tube };

struct CompactSpec {
  CompactKind kind = CompactKind::Ball;
  double radius = 0.5;
};

struct OpenImageReport {
  double epsilon = 0.0;
  double boundary_min = 0.0;
  int boundary_samples = 0;
  int targets = 0;
  int attained = 0;
  double coverage = 0.0;
  double worst_residual = 0.0;
  int starts = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kDegenerateEpsilon = 1e-9;
inline constexpr double kAttainTolerance = 1e-6;

namespace detail {

inline double distance_to_sphere_of(const Element<double>& x, const Element<double>& c) {
  const double da = x[0] - c[0];
  const double db = std::sqrt(norm(im(x))) - std::sqrt(norm(im(c)));
  return std::sqrt(da * da + db * db);
}

inline double compact_distance(const Element<double>& x, const Element<double>& c, CompactKind kind) {
  if (kind == CompactKind::Ball) return std::sqrt(norm(Element<double>(x - c)));
  return distance_to_sphere_of(x, c);
}

/// Random point of the compact set: a ball point shifted to a random point of the sphere for tubes.
inline Element<double> compact_sample(const Element<double>& c, const CompactSpec& spec, Rng& rng, bool boundary) {
  const AlgebraId alg = c.algebra();
  Element<double> centre = c;
  if (spec.kind == CompactKind::Tube && alg.level > 0) {
    const double beta = std::sqrt(norm(im(c)));
    centre = Element<double>::real(alg, c[0]) + random_unit<double>(alg, rng) * beta;
  }
  auto p = random_ball_point(alg.dim(), rng);
  double n = 0.0;
  for (double v : p) n += v * v;
  n = std::sqrt(n);
  const double scale = boundary ? spec.radius / n : spec.radius;
  Element<double> x = centre;
  for (int t = 0; t < alg.dim(); ++t) x[t] += scale * p[t];
  return x;
}

}  // namespace detail

/// epsilon = min over the boundary of K of |f - f(x0)| / 3, then multistart
/// coordinate descent checks that targets within epsilon of f(x0) are attained in K.
template <Scalar S>
OpenImageReport open_image_epsilon(const SliceFunction<S>& f, const Element<S>& x0, CompactSpec spec,
                                   int targets = 32, std::uint64_t seed = 0, int starts = 16,
                                   int boundary_samples = 4096) {
  if (spec.radius <= 0.0) throw SliceError(ErrorCode::InvalidArgument, "radius must be positive");
  starts = std::max(starts, 16);
  const auto eval = detail::double_evaluator(f);
  const Element<double> c = element_cast<double>(x0);
  const AlgebraId alg = c.algebra();
  const int dim = alg.dim();
  const Element<double> fc = eval(c);
  OpenImageReport rep;
  rep.seed = seed;
  rep.starts = starts;
  rep.boundary_samples = boundary_samples;
  Rng rng(seed);
  double bmin = std::numeric_limits<double>::infinity();
  for (int s = 0; s < boundary_samples; ++s) {
    const Element<double> x = detail::compact_sample(c, spec, rng, true);
    bmin = std::min(bmin, std::sqrt(norm(Element<double>(eval(x) - fc))));
  }
  rep.boundary_min = bmin;
  if (!(bmin >= kDegenerateEpsilon)) {
    throw SliceError(ErrorCode::DegenerateEpsilon, "f - f(x0) nearly vanishes on the boundary of K");
  }
  rep.epsilon = bmin / 3.0;
  rep.targets = targets;

  auto inside = [&](const Element<double>& x) {
    return detail::compact_distance(x, c, spec.kind) <= spec.radius;
  };
  for (int m = 0; m < targets; ++m) {
    auto p = random_ball_point(dim, rng);
    Element<double> y = fc;
    for (int t = 0; t < dim; ++t) y[t] += rep.epsilon * p[t];
    auto residual = [&](const Element<double>& x) { return std::sqrt(norm(Element<double>(eval(x) - y))); };
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s < starts && best >= kAttainTolerance; ++s) {
      Element<double> x = s == 0 ? c : detail::compact_sample(c, spec, rng, false);
      double r = residual(x);
      double step = spec.radius / 4.0;
      for (int iter = 0; iter < 20000 && step > 1e-14 && r >= kAttainTolerance * 1e-2; ++iter) {
        bool improved = false;
        for (int t = 0; t < dim; ++t) {
          for (double sign : {1.0, -1.0}) {
            Element<double> trial = x;
            trial[t] += sign * step;
            if (!inside(trial)) continue;
            double rt = residual(trial);
            if (rt < r) {
              x = trial;
              r = rt;
              improved = true;
            }
          }
        }
        if (!improved) step /= 2.0;
      }
      if (r < best && detail::compact_distance(x, c, spec.kind) < spec.radius) best = r;
    }
    rep.worst_residual = std::max(rep.worst_residual, best);
    if (best < kAttainTolerance) ++rep.attained;
  }
  rep.coverage = targets > 0 ? double(rep.attained) / targets : 1.0;
  return rep;
}

struct NonOpenWitness {
  double slice_distance = 0.0;
  bool ball_misses_slice = false;
  bool slice_preserving = false;
  int samples = 0;
  int hits_off_real = 0;
  bool not_open = false;
};

/// For slice preserving f and a ball B(x0, r) disjoint from C_J, f(B) misses
/// C_J minus the reals, so a real value f(x0) is not interior to the image.
template <Scalar S>
NonOpenWitness non_open_witness(const SliceFunction<S>& f, const Element<S>& x0, double radius,
                                const Element<S>& unit, int samples = 4096, std::uint64_t seed = 0) {
  if (!is_imaginary_unit(unit)) throw SliceError(ErrorCode::NotImaginaryUnit, "slice direction must be a unit");
  const auto eval = detail::double_evaluator(f);
  const Element<double> c = element_cast<double>(x0);
  const Element<double> J = element_cast<double>(unit);
  const AlgebraId alg = c.algebra();
  NonOpenWitness w;
  const Element<double> off = im(c) - J * dot(im(c), J);
  w.slice_distance = std::sqrt(norm(off));
  w.ball_misses_slice = w.slice_distance >= radius - 1e-12;
  w.slice_preserving = is_slice_preserving(f);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    auto p = random_ball_point(alg.dim(), rng);
    Element<double> x = c;
    for (int t = 0; t < alg.dim(); ++t) x[t] += radius * p[t];
    const Element<double> v = eval(x);
    const Element<double> iv = im(v);
    const Element<double> perp = iv - J * dot(iv, J);
    const bool in_slice = std::sqrt(norm(perp)) <= 1e-12 * (1.0 + std::sqrt(norm(v)));
    const bool off_real = std::abs(dot(iv, J)) > 1e-12 * (1.0 + std::sqrt(norm(v)));
    ++w.samples;
    if (in_slice && off_real) ++w.hits_off_real;
  }
  const bool real_value = is_real(eval(c), 1e-12);
  w.not_open = w.ball_misses_slice && w.slice_preserving && w.hits_off_real == 0 && real_value;
  return w;
}

}  // namespace slicefn
