#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <variant>
#include <vector>

#include "slicefn/stem.hpp"

namespace slicefn {

/// Threshold for treating a denominator value as a pole (scaled by
/// (1 + |x|)^degree at the evaluation point).
inline constexpr double kPoleTolerance = 1e-12;

/// Polynomial sum_m x^m a_m with right coefficients a_m.
template <Scalar S>
class StarPolynomial {
 public:
  explicit StarPolynomial(AlgebraId algebra = AlgebraId::octonion()) : algebra_(algebra) {}
  StarPolynomial(AlgebraId algebra, std::vector<Element<S>> coeffs)
      : algebra_(algebra), coeffs_(std::move(coeffs)) {
    for (const auto& c : coeffs_) require_same_algebra(algebra_, c.algebra());
    trim();
  }

  static StarPolynomial constant(const Element<S>& c) { return StarPolynomial(c.algebra(), {c}); }
  static StarPolynomial variable(AlgebraId algebra) {
    return StarPolynomial(algebra, {Element<S>(algebra), Element<S>::real(algebra, S(1))});
  }
  static StarPolynomial from_real(AlgebraId algebra, const std::vector<S>& coeffs) {
    std::vector<Element<S>> cs;
    for (const auto& c : coeffs) cs.push_back(Element<S>::real(algebra, c));
    return StarPolynomial(algebra, std::move(cs));
  }

  AlgebraId algebra() const { return algebra_; }
  /// Index of the last nonzero coefficient; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Element<S>>& coeffs() const { return coeffs_; }
  Element<S> coeff(int n) const {
    if (n < 0 || n > degree()) return Element<S>(algebra_);
    return coeffs_[n];
  }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return degree() <= 0; }
  /// All coefficients real, i.e. slice preserving.
  bool is_real() const {
    for (const auto& c : coeffs_)
      if (!is_real_element(c)) return false;
    return true;
  }

  /// Spherical value and derivative from the power recurrence
  ///   v_{n+1} = alpha v_n - beta^2 d_n,  d_{n+1} = v_n + alpha d_n,
  /// which stays exact on the real axis.
  Stem<S> stem(const Sphere<S>& sphere) const {
    Element<S> vs(algebra_), ds(algebra_);
    S v(1), d(0);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
      if (!coeffs_[n].is_zero()) {
        vs += coeffs_[n] * v;
        ds += coeffs_[n] * d;
      }
      S nv = sphere.alpha * v - sphere.beta_sq * d;
      S nd = v + sphere.alpha * d;
      v = nv;
      d = nd;
    }
    return {vs, ds};
  }

  Element<S> operator()(const Element<S>& x) const {
    require_same_algebra(algebra_, x.algebra());
    return assemble(stem(sphere_of(x)), x);
  }

  StarPolynomial operator-() const {
    StarPolynomial out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
  }
  friend StarPolynomial operator+(const StarPolynomial& p, const StarPolynomial& q) {
    require_same_algebra(p.algebra_, q.algebra_);
    std::vector<Element<S>> cs(std::max(p.coeffs_.size(), q.coeffs_.size()), Element<S>(p.algebra_));
    for (std::size_t n = 0; n < cs.size(); ++n) cs[n] = p.coeff(int(n)) + q.coeff(int(n));
    return StarPolynomial(p.algebra_, std::move(cs));
  }
  friend StarPolynomial operator-(const StarPolynomial& p, const StarPolynomial& q) { return p + (-q); }
  friend StarPolynomial operator*(const StarPolynomial& p, const S& s) {
    std::vector<Element<S>> cs = p.coeffs_;
    for (auto& c : cs) c *= s;
    return StarPolynomial(p.algebra_, std::move(cs));
  }
  friend bool operator==(const StarPolynomial& p, const StarPolynomial& q) {
    return p.algebra_ == q.algebra_ && p.coeffs_ == q.coeffs_;
  }

 private:
  static bool is_real_element(const Element<S>& c) { return slicefn::is_real(c); }
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
  }

  AlgebraId algebra_;
  std::vector<Element<S>> coeffs_;
};

template <Scalar T, Scalar S>
StarPolynomial<T> polynomial_cast(const StarPolynomial<S>& p) {
  std::vector<Element<T>> cs;
  for (const auto& c : p.coeffs()) cs.push_back(element_cast<T>(c));
  return StarPolynomial<T>(p.algebra(), std::move(cs));
}

/// Coefficient convolution: (sum x^n a_n)(sum x^n b_n) = sum x^n sum_k a_k b_{n-k}.
template <Scalar S>
StarPolynomial<S> star_mul(const StarPolynomial<S>& p, const StarPolynomial<S>& q) {
  require_same_algebra(p.algebra(), q.algebra());
  if (p.is_zero() || q.is_zero()) return StarPolynomial<S>(p.algebra());
  std::vector<Element<S>> cs(p.degree() + q.degree() + 1, Element<S>(p.algebra()));
  for (int a = 0; a <= p.degree(); ++a)
    for (int b = 0; b <= q.degree(); ++b) cs[a + b] += p.coeffs()[a] * q.coeffs()[b];
  return StarPolynomial<S>(p.algebra(), std::move(cs));
}

template <Scalar S>
StarPolynomial<S> star_conj(const StarPolynomial<S>& p) {
  std::vector<Element<S>> cs;
  for (const auto& c : p.coeffs()) cs.push_back(conj(c));
  return StarPolynomial<S>(p.algebra(), std::move(cs));
}

/// N(p) = p . p^c, always real-coefficient.
template <Scalar S>
StarPolynomial<S> star_normal(const StarPolynomial<S>& p) {
  return star_mul(p, star_conj(p));
}

/// Delta_y(x) = x^2 - x t(y) + n(y); vanishes exactly on S_y.
template <Scalar S>
StarPolynomial<S> delta_poly(const Element<S>& y) {
  return StarPolynomial<S>::from_real(y.algebra(), {norm(y), S(-trace(y)), S(1)});
}

template <Scalar S>
StarPolynomial<S> star_pow(const StarPolynomial<S>& p, int n) {
  StarPolynomial<S> out = StarPolynomial<S>::constant(Element<S>::real(p.algebra(), S(1)));
  for (int t = 0; t < n; ++t) out = star_mul(out, p);
  return out;
}

/// q(x)^{-1} P(x) with q real-coefficient (hence slice preserving and central).
template <Scalar S>
class SemiregularForm {
 public:
  SemiregularForm(StarPolynomial<S> numerator, StarPolynomial<S> denominator)
      : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
    require_same_algebra(numerator_.algebra(), denominator_.algebra());
    if (denominator_.is_zero()) {
      throw SliceError(ErrorCode::InvalidArgument, "semiregular denominator is identically zero");
    }
    if (!denominator_.is_real()) {
      throw SliceError(ErrorCode::InvalidArgument, "semiregular denominator must have real coefficients");
    }
  }
  explicit SemiregularForm(StarPolynomial<S> numerator)
      : SemiregularForm(numerator, StarPolynomial<S>::from_real(numerator.algebra(), {S(1)})) {}

  AlgebraId algebra() const { return numerator_.algebra(); }
  const StarPolynomial<S>& numerator() const { return numerator_; }
  const StarPolynomial<S>& denominator() const { return denominator_; }
  bool is_polynomial() const { return denominator_.degree() == 0; }
  StarPolynomial<S> to_polynomial() const {
    if (!is_polynomial()) throw SliceError(ErrorCode::InvalidArgument, "form has a nonconstant denominator");
    return numerator_ * S(S(1) / denominator_.coeffs()[0][0]);
  }
  /// Cancels a common factor x^m and folds a constant denominator into the
  /// numerator.
  SemiregularForm normalized() const {
    if (numerator_.is_zero()) return SemiregularForm(numerator_);
    int m = 0;
    while (numerator_.coeffs()[m].is_zero() && denominator_.coeffs()[m].is_zero()) ++m;
    SemiregularForm out = *this;
    if (m > 0) {
      auto shift = [m](const StarPolynomial<S>& p) {
        std::vector<Element<S>> cs(p.coeffs().begin() + m, p.coeffs().end());
        return StarPolynomial<S>(p.algebra(), std::move(cs));
      };
      out = SemiregularForm(shift(numerator_), shift(denominator_));
    }
    if (out.is_polynomial() && out.denominator_.coeffs()[0][0] != S(1)) return SemiregularForm(out.to_polynomial());
    return out;
  }

  Stem<S> stem(const Sphere<S>& sphere) const {
    Stem<S> q = denominator_.stem(sphere);
    const S a = q.value[0];
    const S b = (*q.derivative)[0];
    const S d = real_stem_modulus_sq(a, b, sphere.beta_sq);
    check_pole(d, sphere);
    Stem<S> p = numerator_.stem(sphere);
    const S ra = a / d;
    const S rb = S(-b) / d;
    return {p.value * ra - (*p.derivative) * S(rb * sphere.beta_sq), (*p.derivative) * ra + p.value * rb};
  }

  Element<S> operator()(const Element<S>& x) const {
    require_same_algebra(algebra(), x.algebra());
    return assemble(stem(sphere_of(x)), x);
  }

 private:
  void check_pole(const S& modulus_sq, const Sphere<S>& sphere) const {
    if constexpr (ScalarTraits<S>::exact) {
      if (modulus_sq == 0) throw SliceError(ErrorCode::PoleProximity, "denominator vanishes");
    } else {
      double r = std::sqrt(to_double(sphere.point_norm()));
      double scale = kPoleTolerance * std::pow(1.0 + r, denominator_.degree());
      if (std::sqrt(modulus_sq) < scale) throw SliceError(ErrorCode::PoleProximity, "denominator below pole tolerance");
    }
  }

  StarPolynomial<S> numerator_;
  StarPolynomial<S> denominator_;
};

/// (x - y)^{.n}; negative powers are Delta_y^{-|n|} (x - y^c)^{.|n|}.
template <Scalar S>
std::variant<StarPolynomial<S>, SemiregularForm<S>> star_power(const Element<S>& y, int n) {
  const AlgebraId alg = y.algebra();
  auto binomial = [&](const Element<S>& c) {
    return StarPolynomial<S>(alg, {-c, Element<S>::real(alg, S(1))});
  };
  if (n >= 0) return star_pow(binomial(y), n);
  return SemiregularForm<S>(star_pow(binomial(conj(y)), -n), star_pow(delta_poly(y), -n));
}

/// sum_n (x - y)^n a_n over a finite window of integers, real centre y.
template <Scalar S>
class StarLaurent {
 public:
  StarLaurent(AlgebraId algebra, S center, std::map<int, Element<S>> coeffs,
              double inner_radius = 0.0, double outer_radius = std::numeric_limits<double>::infinity())
      : algebra_(algebra),
        center_(std::move(center)),
        coeffs_(std::move(coeffs)),
        inner_(inner_radius),
        outer_(outer_radius) {
    for (const auto& [n, c] : coeffs_) require_same_algebra(algebra_, c.algebra());
  }

  AlgebraId algebra() const { return algebra_; }
  const S& center() const { return center_; }
  const std::map<int, Element<S>>& coeffs() const { return coeffs_; }
  double inner_radius() const { return inner_; }
  double outer_radius() const { return outer_; }
  int min_index() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
  int max_index() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  bool in_annulus(const Sphere<S>& sphere) const {
    const S shift = sphere.alpha - center_;
    const double dist = std::sqrt(to_double(S(shift * shift + sphere.beta_sq)));
    return dist > inner_ && dist < outer_;
  }

  /// For a real centre every (x - y)^n is slice preserving with real stem,
  /// obtained by repeated stem multiplication.
  Stem<S> stem(const Sphere<S>& sphere) const {
    if (!in_annulus(sphere)) throw SliceError(ErrorCode::OutOfAnnulus, "point outside the Laurent annulus");
    const S shift = sphere.alpha - center_;
    Element<S> vs(algebra_), ds(algebra_);
    auto accumulate = [&](int n, const S& v, const S& d) {
      auto it = coeffs_.find(n);
      if (it != coeffs_.end()) {
        vs += it->second * v;
        ds += it->second * d;
      }
    };
    auto step = [&](S& v, S& d, const S& a, const S& b) {
      S nv = v * a - sphere.beta_sq * d * b;
      S nd = v * b + d * a;
      v = nv;
      d = nd;
    };
    if (max_index() >= 0) {
      S v(1), d(0);
      for (int n = 0; n <= max_index(); ++n) {
        if (n >= min_index()) accumulate(n, v, d);
        step(v, d, shift, S(1));
      }
    }
    if (min_index() < 0) {
      const S den = shift * shift + sphere.beta_sq;
      if (den == 0) throw SliceError(ErrorCode::OutOfAnnulus, "evaluation at the Laurent centre");
      const S ia = shift / den;
      const S ib = S(-1) / den;
      S v = ia, d = ib;
      for (int n = -1; n >= min_index(); --n) {
        accumulate(n, v, d);
        step(v, d, ia, ib);
      }
    }
    return {vs, ds};
  }

  Element<S> operator()(const Element<S>& x) const { return assemble(stem(sphere_of(x)), x); }

 private:
  AlgebraId algebra_;
  S center_;
  std::map<int, Element<S>> coeffs_;
  double inner_;
  double outer_;
};

template <Scalar S>
Element<S> laurent_evaluate(const StarLaurent<S>& series, const Element<S>& x) {
  require_same_algebra(series.algebra(), x.algebra());
  return series(x);
}

}  // namespace slicefn
