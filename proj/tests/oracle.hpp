#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "slicefn/cayley_dickson.hpp"

namespace oracle {

using Vec = std::vector<double>;

inline Vec conj(const Vec& x) {
  if (x.size() == 1) return x;
  const std::size_t h = x.size() / 2;
  Vec out = conj(Vec(x.begin(), x.begin() + h));
  for (std::size_t t = h; t < x.size(); ++t) out.push_back(-x[t]);
  return out;
}

// (a + l b)(c + l d) = ac - d b^c + l(a^c d + c b)
inline Vec mul(const Vec& x, const Vec& y) {
  if (x.size() == 1) return {x[0] * y[0]};
  const std::size_t h = x.size() / 2;
  Vec a(x.begin(), x.begin() + h), b(x.begin() + h, x.end());
  Vec c(y.begin(), y.begin() + h), d(y.begin() + h, y.end());
  Vec p = mul(a, c), q = mul(d, conj(b)), r = mul(conj(a), d), s = mul(c, b);
  Vec out(x.size());
  for (std::size_t t = 0; t < h; ++t) {
    out[t] = p[t] - q[t];
    out[h + t] = r[t] + s[t];
  }
  return out;
}

// Library coordinates use k = ij and lk, which are minus the natural e3, e7.
inline Vec relabel(Vec v) {
  if (v.size() >= 4) v[3] = -v[3];
  if (v.size() >= 8) v[7] = -v[7];
  return v;
}

inline Vec coords(const slicefn::Element<double>& e) {
  return relabel(Vec(e.coords().begin(), e.coords().end()));
}

inline slicefn::Element<double> element(slicefn::AlgebraId alg, const Vec& natural) {
  Vec v = relabel(natural);
  return slicefn::Element<double>(alg, std::span<const double>(v.data(), v.size()));
}

inline slicefn::Element<double> product(const slicefn::Element<double>& a, const slicefn::Element<double>& b) {
  return element(a.algebra(), mul(coords(a), coords(b)));
}

inline slicefn::Element<double> inverse(const slicefn::Element<double>& a) {
  Vec v = coords(a);
  double n = 0.0;
  for (double c : v) n += c * c;
  Vec w = conj(v);
  for (auto& c : w) c /= n;
  return element(a.algebra(), w);
}

inline double distance(const slicefn::Element<double>& a, const slicefn::Element<double>& b) {
  double s = 0.0;
  for (int t = 0; t < a.dim(); ++t) s += (a[t] - b[t]) * (a[t] - b[t]);
  return std::sqrt(s);
}

inline double size(const slicefn::Element<double>& a) {
  double s = 0.0;
  for (int t = 0; t < a.dim(); ++t) s += a[t] * a[t];
  return std::sqrt(s);
}

// sum_n x^n a_n with left-to-right powers (powers of one element associate).
inline slicefn::Element<double> poly_eval(const std::vector<slicefn::Element<double>>& cs,
                                          const slicefn::Element<double>& x) {
  slicefn::Element<double> out(x.algebra());
  slicefn::Element<double> pw = slicefn::Element<double>::real(x.algebra(), 1.0);
  for (const auto& c : cs) {
    out += product(pw, c);
    pw = product(pw, x);
  }
  return out;
}

// Coefficient convolution c_n = sum_{a+b=n} p_a q_b.
inline std::vector<slicefn::Element<double>> convolve(const std::vector<slicefn::Element<double>>& p,
                                                      const std::vector<slicefn::Element<double>>& q) {
  if (p.empty() || q.empty()) return {};
  std::vector<slicefn::Element<double>> out(p.size() + q.size() - 1, slicefn::Element<double>(p[0].algebra()));
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < q.size(); ++b) out[a + b] += product(p[a], q[b]);
  return out;
}

}  // namespace oracle
