#pragma once

// Arithmetic in R, C, H and O built from the Cayley-Dickson doubling
//   (a + l b)(c + l d) = ac - d b^c + l(a^c d + c b),   (a + l b)^c = a^c - l b.
// Coordinates are taken in the canonical basis e0..e7 with e0 = 1,
// e1 = i, e2 = j, e3 = k = ij and e_{4+t} = l e_t.

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "slicefn/error.hpp"
#include "slicefn/scalar.hpp"

namespace slicefn {

/// One of R (level 0), C (1), H (2), O (3); dimension 2^level.
struct AlgebraId {
  int level = 3;

  constexpr int dim() const { return 1 << level; }
  constexpr char symbol() const { return "RCHO"[level]; }
  constexpr bool operator==(const AlgebraId&) const = default;

  static constexpr AlgebraId real() { return {0}; }
  static constexpr AlgebraId complex() { return {1}; }
  static constexpr AlgebraId quaternion() { return {2}; }
  static constexpr AlgebraId octonion() { return {3}; }

  static AlgebraId from_symbol(char c) {
    switch (c) {
      case 'R': return real();
      case 'C': return complex();
      case 'H': return quaternion();
      case 'O': return octonion();
      default: throw SliceError(ErrorCode::InvalidArgument, std::string("unknown algebra '") + c + "'");
    }
  }
};

inline void require_same_algebra(AlgebraId a, AlgebraId b) {
  if (a != b) {
    throw SliceError(ErrorCode::AlgebraMismatch,
                     std::string("operands live in ") + a.symbol() + " and " + b.symbol());
  }
}

namespace detail {

// Natural doubling coordinates, used only to build the tables below.
inline std::vector<int> cd_conj(const std::vector<int>& x) {
  if (x.size() == 1) return x;
  std::size_t h = x.size() / 2;
  std::vector<int> out(x.begin(), x.begin() + h);
  out = cd_conj(out);
  for (std::size_t t = h; t < x.size(); ++t) out.push_back(-x[t]);
  return out;
}

inline std::vector<int> cd_mul(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() == 1) return {x[0] * y[0]};
  std::size_t h = x.size() / 2;
  std::vector<int> a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  std::vector<int> c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  auto ac = cd_mul(a, c);
  auto dbc = cd_mul(d, cd_conj(b));
  auto acd = cd_mul(cd_conj(a), d);
  auto cb = cd_mul(c, b);
  std::vector<int> out(x.size());
  for (std::size_t t = 0; t < h; ++t) {
    out[t] = ac[t] - dbc[t];
    out[h + t] = acd[t] + cb[t];
  }
  return out;
}

}  // namespace detail

/// e_a e_b = sign[a][b] e_{index[a][b]}.
struct MulTable {
  std::array<std::array<std::int8_t, 8>, 8> index{};
  std::array<std::array<std::int8_t, 8>, 8> sign{};
};

/// Memoized per level. The natural doubling coordinate of ji is flipped so
/// that e3 = ij (and e7 = l k), matching the usual quaternion labelling.
inline const MulTable& mul_table(int level) {
  static const std::array<MulTable, 4> tables = [] {
    std::array<MulTable, 4> out{};
    for (int lv = 0; lv < 4; ++lv) {
      const int n = 1 << lv;
      auto flip = [lv](int t) { return (lv >= 2 && (t == 3 || t == 7)) ? -1 : 1; };
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          std::vector<int> ea(n, 0), eb(n, 0);
          ea[a] = flip(a);
          eb[b] = flip(b);
          auto p = detail::cd_mul(ea, eb);
          for (int c = 0; c < n; ++c) {
            if (p[c] != 0) {
              out[lv].index[a][b] = static_cast<std::int8_t>(c);
              out[lv].sign[a][b] = static_cast<std::int8_t>(p[c] * flip(c));
            }
          }
        }
      }
    }
    return out;
  }();
  return tables.at(level);
}

template <Scalar S>
class Element {
 public:
  Element() : Element(AlgebraId::octonion()) {}
  explicit Element(AlgebraId algebra) : algebra_(algebra) {
    for (auto& c : coords_) c = S(0);
  }
  Element(AlgebraId algebra, std::initializer_list<S> coords) : Element(algebra) {
    if (static_cast<int>(coords.size()) > algebra.dim()) {
      throw SliceError(ErrorCode::InvalidArgument, "too many coordinates for algebra");
    }
    int t = 0;
    for (const auto& c : coords) coords_[t++] = c;
  }
  Element(AlgebraId algebra, std::span<const S> coords) : Element(algebra) {
    if (static_cast<int>(coords.size()) != algebra.dim()) {
      throw SliceError(ErrorCode::InvalidArgument, "coordinate count does not match algebra");
    }
    for (int t = 0; t < algebra.dim(); ++t) coords_[t] = coords[t];
  }

  static Element real(AlgebraId algebra, const S& value) {
    Element e(algebra);
    e.coords_[0] = value;
    return e;
  }
  static Element basis(AlgebraId algebra, int index) {
    if (index < 0 || index >= algebra.dim()) {
      throw SliceError(ErrorCode::InvalidArgument, "basis index out of range");
    }
    Element e(algebra);
    e.coords_[index] = S(1);
    return e;
  }

  AlgebraId algebra() const { return algebra_; }
  int dim() const { return algebra_.dim(); }
  std::span<const S> coords() const { return {coords_.data(), static_cast<std::size_t>(dim())}; }
  const S& operator[](int t) const { return coords_[t]; }
  S& operator[](int t) { return coords_[t]; }

  bool is_zero() const {
    for (int t = 0; t < dim(); ++t)
      if (coords_[t] != 0) return false;
    return true;
  }

  Element operator-() const {
    Element out(algebra_);
    for (int t = 0; t < dim(); ++t) out.coords_[t] = -coords_[t];
    return out;
  }
  Element& operator+=(const Element& o) {
    require_same_algebra(algebra_, o.algebra_);
    for (int t = 0; t < dim(); ++t) coords_[t] += o.coords_[t];
    return *this;
  }
  Element& operator-=(const Element& o) {
    require_same_algebra(algebra_, o.algebra_);
    for (int t = 0; t < dim(); ++t) coords_[t] -= o.coords_[t];
    return *this;
  }
  Element& operator*=(const S& s) {
    for (int t = 0; t < dim(); ++t) coords_[t] *= s;
    return *this;
  }
  Element& operator/=(const S& s) {
    for (int t = 0; t < dim(); ++t) coords_[t] /= s;
    return *this;
  }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(Element a, const S& s) { return a *= s; }
  friend Element operator*(const S& s, Element a) { return a *= s; }
  friend Element operator/(Element a, const S& s) { return a /= s; }

  friend Element operator*(const Element& a, const Element& b) {
    require_same_algebra(a.algebra_, b.algebra_);
    const MulTable& table = mul_table(a.algebra_.level);
    const int n = a.dim();
    Element out(a.algebra_);
    if constexpr (std::is_same_v<S, Rational>) {
      // Integer numerators over common denominators, reduced once per coordinate.
      using boost::multiprecision::denominator;
      using boost::multiprecision::numerator;
      auto lift = [n](const Element& e, BigInt& den) {
        den = 1;
        for (int t = 0; t < n; ++t) den = lcm(den, BigInt(denominator(e.coords_[t])));
        std::array<BigInt, 8> num;
        for (int t = 0; t < n; ++t) num[t] = numerator(e.coords_[t]) * (den / denominator(e.coords_[t]));
        return num;
      };
      BigInt da, db;
      const auto A = lift(a, da);
      const auto B = lift(b, db);
      std::array<BigInt, 8> acc;
      for (int p = 0; p < n; ++p) {
        if (A[p] == 0) continue;
        for (int q = 0; q < n; ++q) {
          if (B[q] == 0) continue;
          auto* out_c = acc[table.index[p][q]].backend().data();
          if (table.sign[p][q] > 0)
            mpz_addmul(out_c, A[p].backend().data(), B[q].backend().data());
          else
            mpz_submul(out_c, A[p].backend().data(), B[q].backend().data());
        }
      }
      const BigInt d = da * db;
      for (int t = 0; t < n; ++t)
        if (acc[t] != 0) out.coords_[t] = Rational(acc[t], d);
      return out;
    }
    for (int p = 0; p < n; ++p) {
      if (a.coords_[p] == 0) continue;
      for (int q = 0; q < n; ++q) {
        if (b.coords_[q] == 0) continue;
        S term = a.coords_[p] * b.coords_[q];
        if (table.sign[p][q] > 0)
          out.coords_[table.index[p][q]] += term;
        else
          out.coords_[table.index[p][q]] -= term;
      }
    }
    return out;
  }

  friend bool operator==(const Element& a, const Element& b) {
    if (a.algebra_ != b.algebra_) return false;
    for (int t = 0; t < a.dim(); ++t)
      if (a.coords_[t] != b.coords_[t]) return false;
    return true;
  }

 private:
  AlgebraId algebra_;
  std::array<S, 8> coords_;
};

using Octonion = Element<double>;

template <Scalar T, Scalar S>
Element<T> element_cast(const Element<S>& e) {
  Element<T> out(e.algebra());
  for (int t = 0; t < e.dim(); ++t) {
    if constexpr (std::is_same_v<T, S>)
      out[t] = e[t];
    else if constexpr (std::is_same_v<T, double>)
      out[t] = to_double(e[t]);
    else
      out[t] = from_double<T>(e[t]);
  }
  return out;
}

template <Scalar S>
Element<S> conj(const Element<S>& a) {
  Element<S> out = -a;
  out[0] = a[0];
  return out;
}

template <Scalar S>
S trace(const Element<S>& a) {
  return S(2) * a[0];
}

/// n(a) = a a^c, the squared Euclidean norm.
template <Scalar S>
S norm(const Element<S>& a) {
  S sum(0);
  for (int t = 0; t < a.dim(); ++t) sum += a[t] * a[t];
  return sum;
}

/// Euclidean inner product <a, b> = t(a b^c) / 2.
template <Scalar S>
S dot(const Element<S>& a, const Element<S>& b) {
  require_same_algebra(a.algebra(), b.algebra());
  S sum(0);
  for (int t = 0; t < a.dim(); ++t) sum += a[t] * b[t];
  return sum;
}

template <Scalar S>
double modulus(const Element<S>& a) {
  return std::sqrt(to_double(norm(a)));
}

template <Scalar S>
Element<S> re(const Element<S>& a) {
  return Element<S>::real(a.algebra(), a[0]);
}

template <Scalar S>
Element<S> im(const Element<S>& a) {
  Element<S> out = a;
  out[0] = S(0);
  return out;
}

template <Scalar S>
bool is_real(const Element<S>& a, double tol = 0.0) {
  for (int t = 1; t < a.dim(); ++t)
    if (!near_zero(a[t], tol)) return false;
  return true;
}

/// Largest coordinate difference; zero in exact mode iff a == b.
template <Scalar S>
double max_abs_diff(const Element<S>& a, const Element<S>& b) {
  require_same_algebra(a.algebra(), b.algebra());
  double m = 0.0;
  for (int t = 0; t < a.dim(); ++t) m = std::max(m, std::abs(to_double(S(a[t] - b[t]))));
  return m;
}

inline constexpr double kNormZeroTolerance = 1e-12;

template <Scalar S>
Element<S> inverse(const Element<S>& a) {
  S n = norm(a);
  if (near_zero(n, kNormZeroTolerance)) {
    throw SliceError(ErrorCode::ZeroNotInvertible, "element has vanishing norm");
  }
  return conj(a) / n;
}

template <Scalar S>
Element<S> associator(const Element<S>& a, const Element<S>& b, const Element<S>& c) {
  return (a * b) * c - a * (b * c);
}

template <Scalar S>
Element<S> commutator(const Element<S>& a, const Element<S>& b) {
  return a * b - b * a;
}

inline constexpr double kUnitTolerance = 1e-9;

template <Scalar S>
bool is_imaginary_unit(const Element<S>& a, double tol = kUnitTolerance) {
  return near_zero(a[0], tol) && near_zero(S(norm(a) - S(1)), tol);
}

/// x = alpha + beta J with beta >= 0. Real inputs are flagged degenerate and
/// carry J = e1.
template <Scalar S>
struct SphereDecomposition {
  S alpha;
  S beta;
  Element<S> unit;
  bool degenerate = false;
};

template <Scalar S>
SphereDecomposition<S> sphere_decompose(const Element<S>& x) {
  const AlgebraId alg = x.algebra();
  Element<S> v = im(x);
  S beta_sq = norm(v);
  if (beta_sq == 0) {
    if (alg.level == 0) {
      return {x[0], S(0), Element<S>(alg), true};
    }
    return {x[0], S(0), Element<S>::basis(alg, 1), true};
  }
  S beta = scalar_sqrt(beta_sq);
  return {x[0], beta, v / beta, false};
}

/// phi_J(a + ib) = a + bJ.
template <Scalar S>
Element<S> embed_complex(const S& a, const S& b, const Element<S>& unit) {
  return Element<S>::real(unit.algebra(), a) + unit * b;
}

/// Orthonormal basis {1, J, J1, J J1, J2, J J2, J3, J J3} (four elements in H,
/// two in C). Built by Gram-Schmidt over e0..e7 and closed under left
/// multiplication by J.
template <Scalar S>
std::vector<Element<S>> splitting_basis(const Element<S>& unit) {
  const AlgebraId alg = unit.algebra();
  if (alg.level == 0 || !is_imaginary_unit(unit)) {
    throw SliceError(ErrorCode::NotImaginaryUnit, "splitting basis needs t(J)=0 and n(J)=1");
  }
  std::vector<Element<S>> basis{Element<S>::real(alg, S(1)), unit};
  for (int seed = 1; seed < alg.dim() && static_cast<int>(basis.size()) < alg.dim(); ++seed) {
    Element<S> v = Element<S>::basis(alg, seed);
    for (const auto& b : basis) v -= b * dot(v, b);
    S n = norm(v);
    if (near_zero(n, 1e-12)) continue;
    Element<S> next = v / scalar_sqrt(n);
    basis.push_back(next);
    basis.push_back(unit * next);
  }
  return basis;
}

template <Scalar S>
std::string to_string(const Element<S>& a) {
  static const char* names[8] = {"", "i", "j", "k", "l", "li", "lj", "lk"};
  std::string out;
  for (int t = 0; t < a.dim(); ++t) {
    if (a[t] == 0) continue;
    std::string c = ScalarTraits<S>::to_string(a[t]);
    if (!out.empty()) out += (c[0] == '-') ? " " : " + ";
    out += c;
    if (t > 0) out += std::string("*") + names[t];
  }
  return out.empty() ? "0" : out;
}

}  // namespace slicefn
