#pragma once

#include <algorithm>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <variant>
#include <vector>

#include "slicefn/star_poly.hpp"

namespace slicefn {

// ---------------------------------------------------------------------------
// Domains: circular sets described by regions of the closed upper half-plane
// {alpha + i beta : beta >= 0}. A point x belongs to the circular set when
// (re x, |im x|) lies in the region.

struct Rect {
  double alpha0 = -std::numeric_limits<double>::infinity();
  double alpha1 = std::numeric_limits<double>::infinity();
  double beta0 = 0.0;
  double beta1 = std::numeric_limits<double>::infinity();
};

/// {center + r e^{i theta} : r0 <= r <= r1, theta0 <= theta <= theta1}, theta in [0, pi].
struct AnnularSector {
  double center = 0.0;
  double r0 = 0.0;
  double r1 = 1.0;
  double theta0 = 0.0;
  double theta1 = 3.14159265358979323846;
};

using Region = std::variant<Rect, AnnularSector>;

enum class DomainKind { SliceDomain, ProductDomain, Union };

constexpr std::string_view domain_kind_name(DomainKind k) {
  switch (k) {
    case DomainKind::SliceDomain: return "SliceDomain";
    case DomainKind::ProductDomain: return "ProductDomain";
    case DomainKind::Union: return "Union";
  }
  return "Unknown";
}

namespace detail {

inline constexpr double kRegionSlack = 1e-12;

inline bool region_contains(const Region& region, double alpha, double beta) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Rect>) {
          return alpha >= r.alpha0 - kRegionSlack && alpha <= r.alpha1 + kRegionSlack &&
                 beta >= r.beta0 - kRegionSlack && beta <= r.beta1 + kRegionSlack;
        } else {
          double rad = std::hypot(alpha - r.center, beta);
          if (rad < r.r0 - kRegionSlack || rad > r.r1 + kRegionSlack) return false;
          if (rad == 0.0) return r.r0 <= 0.0;
          double theta = std::atan2(beta, alpha - r.center);
          return theta >= r.theta0 - kRegionSlack && theta <= r.theta1 + kRegionSlack;
        }
      },
      region);
}

struct Box {
  double a0, a1, b0, b1;
  bool empty() const { return a0 > a1 || b0 > b1; }
};

inline Box region_box(const Region& region) {
  return std::visit(
      [](const auto& r) -> Box {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Rect>) {
          return {r.alpha0, r.alpha1, std::max(0.0, r.beta0), r.beta1};
        } else {
          return {r.center - r.r1, r.center + r.r1, 0.0, r.r1};
        }
      },
      region);
}

}  // namespace detail

/// Union of clauses; each clause is the intersection of its regions. An empty
/// clause stands for the whole half-plane.
class DomainSpec {
 public:
  DomainSpec() : clauses_{{}} {}
  DomainSpec(std::vector<std::vector<Region>> clauses, bool exclude_real)
      : clauses_(std::move(clauses)), exclude_real_(exclude_real) {}

  static DomainSpec entire() { return {}; }
  static DomainSpec off_real() { return DomainSpec({{}}, true); }
  static DomainSpec from_regions(const std::vector<Region>& regions, bool exclude_real = false) {
    std::vector<std::vector<Region>> clauses;
    for (const auto& r : regions) clauses.push_back({r});
    return DomainSpec(std::move(clauses), exclude_real);
  }

  const std::vector<std::vector<Region>>& clauses() const { return clauses_; }
  bool excludes_real() const { return exclude_real_; }
  bool is_entire() const {
    if (exclude_real_) return false;
    for (const auto& c : clauses_)
      if (c.empty()) return true;
    return false;
  }

  bool contains(double alpha, double beta) const {
    beta = std::abs(beta);
    if (exclude_real_ && beta == 0.0) return false;
    for (const auto& clause : clauses_) {
      bool ok = true;
      for (const auto& r : clause) {
        if (!detail::region_contains(r, alpha, beta)) {
          ok = false;
          break;
        }
      }
      if (ok) return true;
    }
    return false;
  }

  template <Scalar S>
  bool contains(const Element<S>& x) const {
    return contains(to_double(x[0]), std::sqrt(to_double(norm(im(x)))));
  }

  /// Sampled emptiness test over the bounding box of every clause.
  bool is_empty() const {
    for (const auto& clause : clauses_) {
      if (clause.empty()) return false;
      detail::Box box = clause_box(clause);
      if (box.empty()) continue;
      constexpr int n = 64;
      for (int p = 0; p <= n; ++p) {
        for (int q = 0; q <= n; ++q) {
          double a = box.a0 + (box.a1 - box.a0) * p / n;
          double b = box.b0 + (box.b1 - box.b0) * q / n;
          if (contains(a, b)) return false;
        }
      }
    }
    return true;
  }

  /// Slice domain when a single connected piece meets the real axis, product
  /// domain when it does not; several pieces give a union.
  DomainKind kind() const {
    std::vector<detail::Box> boxes;
    bool touches_real = false;
    for (const auto& clause : clauses_) {
      detail::Box box = clause_box(clause);
      if (box.empty()) continue;
      boxes.push_back(box);
      if (!exclude_real_ && box.b0 <= 0.0) {
        constexpr int n = 256;
        for (int p = 0; p <= n && !touches_real; ++p) {
          double a = std::isfinite(box.a0) && std::isfinite(box.a1) ? box.a0 + (box.a1 - box.a0) * p / n : 0.0;
          if (contains(a, 0.0)) touches_real = true;
        }
      }
    }
    std::vector<int> parent(boxes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (std::size_t a = 0; a < boxes.size(); ++a) {
      for (std::size_t b = a + 1; b < boxes.size(); ++b) {
        const auto& p = boxes[a];
        const auto& q = boxes[b];
        if (p.a0 <= q.a1 && q.a0 <= p.a1 && p.b0 <= q.b1 && q.b0 <= p.b1) parent[find(int(a))] = find(int(b));
      }
    }
    int components = 0;
    for (std::size_t a = 0; a < boxes.size(); ++a)
      if (find(int(a)) == int(a)) ++components;
    if (components > 1) return DomainKind::Union;
    return touches_real ? DomainKind::SliceDomain : DomainKind::ProductDomain;
  }

  friend DomainSpec intersect(const DomainSpec& a, const DomainSpec& b) {
    std::vector<std::vector<Region>> clauses;
    for (const auto& p : a.clauses_) {
      for (const auto& q : b.clauses_) {
        std::vector<Region> c = p;
        c.insert(c.end(), q.begin(), q.end());
        clauses.push_back(std::move(c));
      }
    }
    return DomainSpec(std::move(clauses), a.exclude_real_ || b.exclude_real_);
  }

 private:
  static detail::Box clause_box(const std::vector<Region>& clause) {
    constexpr double big = 1e6;
    detail::Box box{-big, big, 0.0, big};
    for (const auto& r : clause) {
      detail::Box rb = detail::region_box(r);
      box.a0 = std::max(box.a0, rb.a0);
      box.a1 = std::min(box.a1, rb.a1);
      box.b0 = std::max(box.b0, rb.b0);
      box.b1 = std::min(box.b1, rb.b1);
    }
    return box;
  }

  std::vector<std::vector<Region>> clauses_;
  bool exclude_real_ = false;
};

// ---------------------------------------------------------------------------
// Sampled stems

/// Spherical value and derivative sampled on a uniform (alpha, beta) grid,
/// interpolated bilinearly. When beta0 = 0 the first row of derivative data
/// counts as the real-axis limit only if `real_limits` is set.
template <Scalar S>
class StemGrid {
 public:
  StemGrid(AlgebraId algebra, Rect rect, int n_alpha, int n_beta, std::vector<Element<S>> vs,
           std::vector<Element<S>> ds, bool real_limits = false)
      : algebra_(algebra),
        rect_(rect),
        na_(n_alpha),
        nb_(n_beta),
        vs_(std::move(vs)),
        ds_(std::move(ds)),
        real_limits_(real_limits) {
    if (na_ < 2 || nb_ < 2) throw SliceError(ErrorCode::GridTooSmall, "stem grid needs at least 2x2 nodes");
    if (rect_.beta0 < 0 || !(rect_.alpha1 > rect_.alpha0) || !(rect_.beta1 > rect_.beta0)) {
      throw SliceError(ErrorCode::InvalidArgument, "stem grid rectangle must lie in the closed upper half-plane");
    }
    if (vs_.size() != std::size_t(na_ * nb_) || ds_.size() != std::size_t(na_ * nb_)) {
      throw SliceError(ErrorCode::InvalidArgument, "stem grid sample count does not match its shape");
    }
    for (const auto& e : vs_) require_same_algebra(algebra_, e.algebra());
    for (const auto& e : ds_) require_same_algebra(algebra_, e.algebra());
  }

  AlgebraId algebra() const { return algebra_; }
  const Rect& rect() const { return rect_; }
  int n_alpha() const { return na_; }
  int n_beta() const { return nb_; }
  bool real_limits() const { return real_limits_; }
  const std::vector<Element<S>>& values() const { return vs_; }
  const std::vector<Element<S>>& derivatives() const { return ds_; }
  /// Row-major in beta: index = ib * n_alpha + ia.
  const Element<S>& value_at(int ia, int ib) const { return vs_[ib * na_ + ia]; }
  const Element<S>& derivative_at(int ia, int ib) const { return ds_[ib * na_ + ia]; }
  double alpha_node(int ia) const { return rect_.alpha0 + (rect_.alpha1 - rect_.alpha0) * ia / (na_ - 1); }
  double beta_node(int ib) const { return rect_.beta0 + (rect_.beta1 - rect_.beta0) * ib / (nb_ - 1); }

  Stem<S> stem(const Sphere<S>& sphere) const {
    const double a = to_double(sphere.alpha);
    const double b = sphere.beta();
    if (a < rect_.alpha0 - detail::kRegionSlack || a > rect_.alpha1 + detail::kRegionSlack ||
        b < rect_.beta0 - detail::kRegionSlack || b > rect_.beta1 + detail::kRegionSlack) {
      throw SliceError(ErrorCode::OutOfDomain, "point outside the sampled stem rectangle");
    }
    double u = std::clamp((a - rect_.alpha0) / (rect_.alpha1 - rect_.alpha0) * (na_ - 1), 0.0, double(na_ - 1));
    double w = std::clamp((b - rect_.beta0) / (rect_.beta1 - rect_.beta0) * (nb_ - 1), 0.0, double(nb_ - 1));
    int i0 = std::min(int(u), na_ - 2);
    int j0 = std::min(int(w), nb_ - 2);
    const S fu = from_double<S>(u - i0);
    const S fw = from_double<S>(w - j0);
    auto lerp = [&](const std::vector<Element<S>>& data) {
      const Element<S>& c00 = data[j0 * na_ + i0];
      const Element<S>& c10 = data[j0 * na_ + i0 + 1];
      const Element<S>& c01 = data[(j0 + 1) * na_ + i0];
      const Element<S>& c11 = data[(j0 + 1) * na_ + i0 + 1];
      const S one(1);
      return c00 * S((one - fu) * (one - fw)) + c10 * S(fu * (one - fw)) + c01 * S((one - fu) * fw) +
             c11 * S(fu * fw);
    };
    Stem<S> out{lerp(vs_), std::nullopt};
    if (sphere.beta_sq != 0 || real_limits_) out.derivative = lerp(ds_);
    return out;
  }

 private:
  AlgebraId algebra_;
  Rect rect_;
  int na_, nb_;
  std::vector<Element<S>> vs_;
  std::vector<Element<S>> ds_;
  bool real_limits_;
};

/// Slice function known only through a callable returning its stem data.
template <Scalar S>
struct GenericStem {
  std::function<Stem<S>(const Sphere<S>&)> fn;
  bool slice_preserving = false;
};

// ---------------------------------------------------------------------------

template <Scalar S>
class SliceFunction {
 public:
  using Body = std::variant<StarPolynomial<S>, SemiregularForm<S>, StarLaurent<S>, StemGrid<S>, GenericStem<S>>;

  SliceFunction(StarPolynomial<S> p, DomainSpec domain = DomainSpec::entire())
      : algebra_(p.algebra()), body_(std::move(p)), domain_(std::move(domain)) {}
  SliceFunction(SemiregularForm<S> f, DomainSpec domain = DomainSpec::entire())
      : algebra_(f.algebra()), domain_(std::move(domain)) {
    f = f.normalized();
    if (f.is_polynomial())
      body_ = f.to_polynomial();
    else
      body_ = std::move(f);
  }
  SliceFunction(StarLaurent<S> f, DomainSpec domain = DomainSpec::entire())
      : algebra_(f.algebra()), body_(std::move(f)), domain_(std::move(domain)) {}
  SliceFunction(StemGrid<S> f)
      : algebra_(f.algebra()),
        body_(f),
        domain_(DomainSpec::from_regions({f.rect()})) {}
  SliceFunction(AlgebraId algebra, GenericStem<S> f, DomainSpec domain = DomainSpec::entire())
      : algebra_(algebra), body_(std::move(f)), domain_(std::move(domain)) {}

  AlgebraId algebra() const { return algebra_; }
  const Body& body() const { return body_; }
  const DomainSpec& domain() const { return domain_; }
  template <class T>
  const T* as() const {
    return std::get_if<T>(&body_);
  }
  bool is_closed_form() const {
    return std::holds_alternative<StarPolynomial<S>>(body_) || std::holds_alternative<SemiregularForm<S>>(body_) ||
           std::holds_alternative<StarLaurent<S>>(body_);
  }

  Stem<S> stem(const Sphere<S>& sphere) const {
    if (!domain_.contains(to_double(sphere.alpha), sphere.beta())) {
      throw SliceError(ErrorCode::OutOfDomain, "sphere outside the function domain");
    }
    return std::visit(
        [&](const auto& body) -> Stem<S> {
          using T = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<T, GenericStem<S>>)
            return body.fn(sphere);
          else
            return body.stem(sphere);
        },
        body_);
  }

  Element<S> operator()(const Element<S>& x) const {
    require_same_algebra(algebra_, x.algebra());
    return assemble(stem(sphere_of(x)), x);
  }

 private:
  AlgebraId algebra_;
  Body body_;
  DomainSpec domain_;
};

/// Converts a closed-form function between numeric modes.
template <Scalar T, Scalar S>
SliceFunction<T> function_cast(const SliceFunction<S>& f) {
  if (auto p = f.template as<StarPolynomial<S>>()) return SliceFunction<T>(polynomial_cast<T>(*p), f.domain());
  if (auto q = f.template as<SemiregularForm<S>>()) {
    return SliceFunction<T>(
        SemiregularForm<T>(polynomial_cast<T>(q->numerator()), polynomial_cast<T>(q->denominator())), f.domain());
  }
  if (auto l = f.template as<StarLaurent<S>>()) {
    std::map<int, Element<T>> cs;
    for (const auto& [n, a] : l->coeffs()) cs.emplace(n, element_cast<T>(a));
    T center;
    if constexpr (std::is_same_v<T, S>)
      center = l->center();
    else if constexpr (std::is_same_v<T, double>)
      center = to_double(l->center());
    else
      center = from_double<T>(l->center());
    return SliceFunction<T>(StarLaurent<T>(l->algebra(), center, std::move(cs), l->inner_radius(), l->outer_radius()),
                            f.domain());
  }
  throw SliceError(ErrorCode::ModeMismatch, "only closed forms can change numeric mode");
}

namespace detail {

/// Double-precision evaluator for probes that sample arbitrary points.
template <Scalar S>
std::function<Element<double>(const Element<double>&)> double_evaluator(const SliceFunction<S>& f) {
  if constexpr (std::is_same_v<S, double>) {
    return [f](const Element<double>& x) { return f(x); };
  } else {
    if (f.is_closed_form()) {
      auto g = function_cast<double>(f);
      return [g](const Element<double>& x) { return g(x); };
    }
    return [f](const Element<double>& x) {
      Element<S> y(x.algebra());
      for (int t = 0; t < x.algebra().dim(); ++t) y[t] = from_double<S>(x[t]);
      return element_cast<double>(f(y));
    };
  }
}

}  // namespace detail

template <Scalar S>
Element<S> evaluate(const SliceFunction<S>& f, const Element<S>& x) {
  return f(x);
}

template <Scalar S>
Element<S> spherical_value(const SliceFunction<S>& f, const Element<S>& q) {
  return f.stem(sphere_of(q)).value;
}

template <Scalar S>
Element<S> spherical_derivative(const SliceFunction<S>& f, const Element<S>& q) {
  return f.stem(sphere_of(q)).ds();
}

template <Scalar S>
SliceFunction<S> constant_function(const Element<S>& c) {
  return SliceFunction<S>(StarPolynomial<S>::constant(c));
}

template <Scalar S>
SliceFunction<S> variable_function(AlgebraId algebra) {
  return SliceFunction<S>(StarPolynomial<S>::variable(algebra));
}

namespace detail {

template <Scalar S>
std::optional<SemiregularForm<S>> as_quotient(const SliceFunction<S>& f) {
  if (auto p = f.template as<StarPolynomial<S>>()) return SemiregularForm<S>(*p);
  if (auto q = f.template as<SemiregularForm<S>>()) return *q;
  return std::nullopt;
}

template <Scalar S>
std::map<int, Element<S>> laurent_convolve(const StarLaurent<S>& f, const StarLaurent<S>& g) {
  std::map<int, Element<S>> out;
  for (const auto& [m, a] : f.coeffs()) {
    for (const auto& [n, b] : g.coeffs()) {
      auto it = out.try_emplace(m + n, Element<S>(f.algebra())).first;
      it->second += a * b;
    }
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

}  // namespace detail

/// Cheap structural test used to propagate slice preservation through
/// generic wrappers; never samples.
template <Scalar S>
bool is_slice_preserving_hint(const SliceFunction<S>& f) {
  return std::visit(
      [](const auto& body) -> bool {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, StarPolynomial<S>>)
          return body.is_real();
        else if constexpr (std::is_same_v<T, SemiregularForm<S>>)
          return body.numerator().is_real();
        else if constexpr (std::is_same_v<T, StarLaurent<S>>)
          return std::all_of(body.coeffs().begin(), body.coeffs().end(),
                             [](const auto& kv) { return slicefn::is_real(kv.second); });
        else if constexpr (std::is_same_v<T, GenericStem<S>>)
          return body.slice_preserving;
        else
          return false;
      },
      f.body());
}

template <Scalar S>
SemiregularForm<S> semiregular_mul(const SemiregularForm<S>& f, const SemiregularForm<S>& g) {
  return SemiregularForm<S>(star_mul(f.numerator(), g.numerator()), star_mul(f.denominator(), g.denominator()))
      .normalized();
}

template <Scalar S>
SliceFunction<S> slice_product(const SliceFunction<S>& f, const SliceFunction<S>& g) {
  require_same_algebra(f.algebra(), g.algebra());
  DomainSpec domain = intersect(f.domain(), g.domain());
  if (domain.is_empty()) throw SliceError(ErrorCode::EmptyDomainIntersection, "factor domains do not meet");
  if (auto p = f.template as<StarPolynomial<S>>()) {
    if (auto q = g.template as<StarPolynomial<S>>()) return SliceFunction<S>(star_mul(*p, *q), domain);
  }
  auto fq = detail::as_quotient(f);
  auto gq = detail::as_quotient(g);
  if (fq && gq) return SliceFunction<S>(semiregular_mul(*fq, *gq), domain);
  auto fl = f.template as<StarLaurent<S>>();
  auto gl = g.template as<StarLaurent<S>>();
  if (fl && gl && fl->center() == gl->center()) {
    return SliceFunction<S>(StarLaurent<S>(f.algebra(), fl->center(), detail::laurent_convolve(*fl, *gl),
                                           std::max(fl->inner_radius(), gl->inner_radius()),
                                           std::min(fl->outer_radius(), gl->outer_radius())),
                            domain);
  }
  auto pf = std::make_shared<SliceFunction<S>>(f);
  auto pg = std::make_shared<SliceFunction<S>>(g);
  GenericStem<S> body{[pf, pg](const Sphere<S>& s) { return stem_product(pf->stem(s), pg->stem(s), s.beta_sq); },
                      is_slice_preserving_hint(f) && is_slice_preserving_hint(g)};
  return SliceFunction<S>(f.algebra(), std::move(body), domain);
}

namespace detail {

template <Scalar S>
Stem<S> stem_sum(const Stem<S>& f, const Stem<S>& g) {
  Stem<S> out{f.value + g.value, std::nullopt};
  if (f.derivative && g.derivative) out.derivative = *f.derivative + *g.derivative;
  return out;
}

}  // namespace detail

template <Scalar S>
SliceFunction<S> slice_sum(const SliceFunction<S>& f, const SliceFunction<S>& g) {
  require_same_algebra(f.algebra(), g.algebra());
  DomainSpec domain = intersect(f.domain(), g.domain());
  if (domain.is_empty()) throw SliceError(ErrorCode::EmptyDomainIntersection, "summand domains do not meet");
  auto fq = detail::as_quotient(f);
  auto gq = detail::as_quotient(g);
  if (fq && gq) {
    if (fq->denominator() == gq->denominator()) {
      return SliceFunction<S>(SemiregularForm<S>(fq->numerator() + gq->numerator(), fq->denominator()), domain);
    }
    return SliceFunction<S>(SemiregularForm<S>(star_mul(gq->denominator(), fq->numerator()) +
                                                   star_mul(fq->denominator(), gq->numerator()),
                                               star_mul(fq->denominator(), gq->denominator())),
                            domain);
  }
  auto fl = f.template as<StarLaurent<S>>();
  auto gl = g.template as<StarLaurent<S>>();
  if (fl && gl && fl->center() == gl->center()) {
    auto cs = fl->coeffs();
    for (const auto& [n, a] : gl->coeffs()) {
      auto it = cs.find(n);
      if (it == cs.end())
        cs.emplace(n, a);
      else
        it->second += a;
    }
    return SliceFunction<S>(StarLaurent<S>(f.algebra(), fl->center(), std::move(cs),
                                           std::max(fl->inner_radius(), gl->inner_radius()),
                                           std::min(fl->outer_radius(), gl->outer_radius())),
                            domain);
  }
  auto pf = std::make_shared<SliceFunction<S>>(f);
  auto pg = std::make_shared<SliceFunction<S>>(g);
  GenericStem<S> body{[pf, pg](const Sphere<S>& s) { return detail::stem_sum(pf->stem(s), pg->stem(s)); },
                      is_slice_preserving_hint(f) && is_slice_preserving_hint(g)};
  return SliceFunction<S>(f.algebra(), std::move(body), domain);
}

template <Scalar S>
SliceFunction<S> slice_negate(const SliceFunction<S>& f) {
  return slice_product(constant_function(Element<S>::real(f.algebra(), S(-1))), f);
}

template <Scalar S>
SliceFunction<S> slice_conjugate(const SliceFunction<S>& f) {
  return std::visit(
      [&](const auto& body) -> SliceFunction<S> {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, StarPolynomial<S>>) {
          return SliceFunction<S>(star_conj(body), f.domain());
        } else if constexpr (std::is_same_v<T, SemiregularForm<S>>) {
          return SliceFunction<S>(SemiregularForm<S>(star_conj(body.numerator()), body.denominator()), f.domain());
        } else if constexpr (std::is_same_v<T, StarLaurent<S>>) {
          std::map<int, Element<S>> cs;
          for (const auto& [n, a] : body.coeffs()) cs.emplace(n, conj(a));
          return SliceFunction<S>(
              StarLaurent<S>(body.algebra(), body.center(), std::move(cs), body.inner_radius(), body.outer_radius()),
              f.domain());
        } else if constexpr (std::is_same_v<T, StemGrid<S>>) {
          std::vector<Element<S>> vs, ds;
          for (const auto& e : body.values()) vs.push_back(conj(e));
          for (const auto& e : body.derivatives()) ds.push_back(conj(e));
          return SliceFunction<S>(StemGrid<S>(body.algebra(), body.rect(), body.n_alpha(), body.n_beta(),
                                              std::move(vs), std::move(ds), body.real_limits()));
        } else {
          auto fn = body.fn;
          return SliceFunction<S>(f.algebra(),
                                  GenericStem<S>{[fn](const Sphere<S>& s) { return stem_conj(fn(s)); },
                                                 body.slice_preserving},
                                  f.domain());
        }
      },
      f.body());
}

/// N(f) = f . f^c.
template <Scalar S>
SliceFunction<S> normal(const SliceFunction<S>& f) {
  if (auto p = f.template as<StarPolynomial<S>>()) return SliceFunction<S>(star_normal(*p), f.domain());
  if (auto q = f.template as<SemiregularForm<S>>()) {
    return SliceFunction<S>(
        SemiregularForm<S>(star_normal(q->numerator()), star_mul(q->denominator(), q->denominator())), f.domain());
  }
  if (f.template as<StarLaurent<S>>()) return slice_product(f, slice_conjugate(f));
  auto pf = std::make_shared<SliceFunction<S>>(f);
  return SliceFunction<S>(
      f.algebra(), GenericStem<S>{[pf](const Sphere<S>& s) { return stem_normal(pf->stem(s), s.beta_sq); }, true},
      f.domain());
}

inline constexpr double kSlicePreservingTolerance = 1e-10;

namespace detail {

/// Deterministic probe spheres inside the domain (Halton points in a box).
template <Scalar S>
std::vector<Sphere<S>> probe_spheres(const DomainSpec& domain, int count, double a0 = -2.0, double a1 = 2.0,
                                     double b0 = 0.0, double b1 = 2.0) {
  auto halton = [](int index, int base) {
    double f = 1.0, r = 0.0;
    for (int i = index; i > 0; i /= base) {
      f /= base;
      r += f * (i % base);
    }
    return r;
  };
  std::vector<Sphere<S>> out;
  for (int n = 1; n < 64 * count && int(out.size()) < count; ++n) {
    double a = a0 + (a1 - a0) * halton(n, 2);
    double b = b0 + (b1 - b0) * halton(n, 3);
    if (domain.contains(a, b)) out.push_back(sphere_at<S>(a, b));
  }
  return out;
}

}  // namespace detail

template <Scalar S>
bool is_slice_preserving(const SliceFunction<S>& f, int sample_count = 64) {
  auto real_within = [](const Element<S>& e) { return slicefn::is_real(e, kSlicePreservingTolerance); };
  return std::visit(
      [&](const auto& body) -> bool {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, StemGrid<S>>) {
          for (const auto& e : body.values())
            if (!real_within(e)) return false;
          for (const auto& e : body.derivatives())
            if (!real_within(e)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, GenericStem<S>>) {
          if (body.slice_preserving) return true;
          for (const auto& s : detail::probe_spheres<S>(f.domain(), sample_count)) {
            Stem<S> st;
            try {
              st = body.fn(s);
            } catch (const SliceError&) {
              continue;
            }
            if (!real_within(st.value)) return false;
            if (st.derivative && !real_within(*st.derivative)) return false;
          }
          return true;
        } else {
          return is_slice_preserving_hint(f);
        }
      },
      f.body());
}

/// Samples the stem of f on a rectangle of the closed upper half-plane.
template <Scalar S>
StemGrid<S> sample_stem(const SliceFunction<S>& f, Rect rect, int n_alpha, int n_beta) {
  std::vector<Element<S>> vs, ds;
  bool limits = true;
  for (int ib = 0; ib < n_beta; ++ib) {
    double b = rect.beta0 + (rect.beta1 - rect.beta0) * ib / (n_beta - 1);
    for (int ia = 0; ia < n_alpha; ++ia) {
      double a = rect.alpha0 + (rect.alpha1 - rect.alpha0) * ia / (n_alpha - 1);
      Stem<S> st = f.stem(sphere_at<S>(a, b));
      vs.push_back(st.value);
      if (st.derivative) {
        ds.push_back(*st.derivative);
      } else {
        limits = false;
        ds.push_back(Element<S>(f.algebra()));
      }
    }
  }
  return StemGrid<S>(f.algebra(), rect, n_alpha, n_beta, std::move(vs), std::move(ds), limits && rect.beta0 == 0.0);
}

/// f(x) = 1 + (im(x)/|im(x)|) J0 off the real axis: vs = 1, f'_s = J0 / beta.
/// Its zero set is the half-slice C_{J0}^+ and N(f) vanishes identically.
template <Scalar S>
SliceFunction<S> unit_switch_function(const Element<S>& j0) {
  if (!is_imaginary_unit(j0)) throw SliceError(ErrorCode::NotImaginaryUnit, "J0 must be an imaginary unit");
  const AlgebraId alg = j0.algebra();
  GenericStem<S> body{[j0, alg](const Sphere<S>& s) {
                        Stem<S> out{Element<S>::real(alg, S(1)), std::nullopt};
                        if (s.beta_sq != 0) out.derivative = j0 / scalar_sqrt(s.beta_sq);
                        return out;
                      },
                      false};
  return SliceFunction<S>(alg, std::move(body), DomainSpec::off_real());
}

// ---------------------------------------------------------------------------
// Splitting lemma

struct SplitGrid {
  double alpha0 = -1.0, alpha1 = 1.0;
  double beta0 = -1.0, beta1 = 1.0;
  int n_alpha = 17, n_beta = 17;
};

/// Components f_n : Omega_J -> C_J of f restricted to the slice C_J, written in
/// a splitting basis {1, J, J1, J J1, ...} as f = sum_n f_n J_n, together with
/// the largest discrete Cauchy-Riemann defect over interior nodes.
struct SplitComponents {
  std::vector<Element<double>> basis;
  SplitGrid grid;
  /// components[n][ib * n_alpha + ia] holds f_n as p + q i with f_n = p + q J.
  std::vector<std::vector<std::complex<double>>> components;
  double cr_residual = 0.0;
};

template <Scalar S>
SplitComponents split_components(const SliceFunction<S>& f, const Element<S>& unit, const SplitGrid& grid) {
  if (grid.n_alpha < 3 || grid.n_beta < 3) throw SliceError(ErrorCode::GridTooSmall, "split grid needs 3x3 nodes");
  const Element<double> J = element_cast<double>(unit);
  SplitComponents out;
  out.basis = splitting_basis(J);
  out.grid = grid;
  const int ncomp = int(out.basis.size()) / 2;
  out.components.assign(ncomp, std::vector<std::complex<double>>(grid.n_alpha * grid.n_beta));
  const double ha = (grid.alpha1 - grid.alpha0) / (grid.n_alpha - 1);
  const double hb = (grid.beta1 - grid.beta0) / (grid.n_beta - 1);
  for (int ib = 0; ib < grid.n_beta; ++ib) {
    for (int ia = 0; ia < grid.n_alpha; ++ia) {
      const double a = grid.alpha0 + ha * ia;
      const double b = grid.beta0 + hb * ib;
      Element<S> x = Element<S>::real(unit.algebra(), from_double<S>(a)) + unit * from_double<S>(b);
      Element<double> v = element_cast<double>(f(x));
      for (int n = 0; n < ncomp; ++n) {
        const auto& Jn = out.basis[2 * n];
        const auto& JJn = out.basis[2 * n + 1];
        out.components[n][ib * grid.n_alpha + ia] = {dot(v, Jn), dot(v, JJn)};
      }
    }
  }
  double residual = 0.0;
  for (int n = 0; n < ncomp; ++n) {
    const auto& c = out.components[n];
    for (int ib = 1; ib + 1 < grid.n_beta; ++ib) {
      for (int ia = 1; ia + 1 < grid.n_alpha; ++ia) {
        auto at = [&](int p, int q) { return c[q * grid.n_alpha + p]; };
        std::complex<double> da = (at(ia + 1, ib) - at(ia - 1, ib)) / (2 * ha);
        std::complex<double> db = (at(ia, ib + 1) - at(ia, ib - 1)) / (2 * hb);
        residual = std::max(residual, std::abs(da + std::complex<double>(0, 1) * db));
      }
    }
  }
  out.cr_residual = residual;
  return out;
}

}  // namespace slicefn
