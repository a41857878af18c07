#pragma once

#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "slicefn/modulus.hpp"
#include "slicefn/singularities.hpp"
#include "slicefn/zeros.hpp"

namespace slicefn {

using Json = nlohmann::ordered_json;

template <Scalar S>
Json scalar_json(const S& s) {
  if constexpr (ScalarTraits<S>::exact)
    return ScalarTraits<S>::to_string(s);
  else
    return s;
}

template <Scalar S>
Json element_json(const Element<S>& e) {
  Json coords = Json::array();
  for (int t = 0; t < e.algebra().dim(); ++t) coords.push_back(scalar_json(e[t]));
  return Json{{"coords", coords}, {"text", to_string(e)}};
}

template <Scalar S>
Json polynomial_json(const StarPolynomial<S>& p) {
  Json cs = Json::array();
  for (const auto& c : p.coeffs()) cs.push_back(element_json(c));
  return Json{{"degree", p.degree()}, {"coefficients", cs}};
}

template <Scalar S>
Json function_json(const SliceFunction<S>& f) {
  if (auto p = f.template as<StarPolynomial<S>>()) {
    Json j = polynomial_json(*p);
    j["form"] = "polynomial";
    return j;
  }
  if (auto q = f.template as<SemiregularForm<S>>()) {
    return Json{{"form", "semiregular"},
                {"numerator", polynomial_json(q->numerator())},
                {"denominator", polynomial_json(q->denominator())}};
  }
  if (auto l = f.template as<StarLaurent<S>>()) {
    Json cs = Json::object();
    for (const auto& [n, a] : l->coeffs()) cs[std::to_string(n)] = element_json(a);
    return Json{{"form", "laurent"}, {"center", scalar_json(l->center())}, {"coefficients", cs}};
  }
  return Json{{"form", "sampled"}};
}

template <Scalar S>
Json sphere_json(const Sphere<S>& s) {
  return Json{{"alpha", scalar_json(s.alpha)}, {"beta_sq", scalar_json(s.beta_sq)}};
}

template <Scalar S>
Json zero_class_json(const SphereZeroClass<S>& z) {
  Json j{{"tag", zero_tag_name(z.tag)}, {"sphere", sphere_json(z.sphere)}};
  if (z.point && z.tag == ZeroTag::Point) j["point"] = element_json(*z.point);
  if (z.tag == ZeroTag::Whole) j["verified"] = z.verified;
  return j;
}

inline Json zero_hit_json(const ZeroHit& h) {
  Json j{{"alpha", h.alpha}, {"beta", h.beta}, {"tag", zero_tag_name(h.tag)}, {"isolation_radius", h.isolation_radius}};
  if (h.point) j["point"] = element_json(*h.point);
  return j;
}

inline Json extrema_json(const SphereExtrema& e) {
  Json j{{"alpha", e.alpha},
         {"beta", e.beta},
         {"constant_modulus", e.constant_modulus},
         {"max_value", e.max_value},
         {"min_value", e.min_value},
         {"algebra_membership_check", e.algebra_membership_check},
         {"grid_size", e.grid_size},
         {"grid_max", e.grid_max},
         {"grid_min", e.grid_min},
         {"grid_check", e.grid_check}};
  if (e.max_point) j["max_point"] = element_json(*e.max_point);
  if (e.min_point) j["min_point"] = element_json(*e.min_point);
  return j;
}

inline Json laurent_json(const SphericalLaurent& s) {
  Json terms = Json::array();
  for (const auto& [k, t] : s.terms) terms.push_back(Json{{"k", k}, {"u", element_json(t.u)}, {"v", element_json(t.v)}});
  return Json{{"center", element_json(s.center)}, {"rho", s.rho}, {"nodes", s.nodes}, {"terms", terms}};
}

inline Json order_json(const Order& o) {
  if (o.value) return *o.value;
  return Json{{"infinite", true}, {"probe_bound", o.bound}};
}

inline Json singularity_json(const SingularityReport& r) {
  Json growth = Json::array();
  for (const auto& g : r.growth) {
    growth.push_back(Json{{"point", element_json(g.point)}, {"k", g.k}, {"radii", g.radii}, {"sups", g.sups},
                          {"slope", g.slope}});
  }
  Json j{{"center", element_json(r.center)},
         {"class", singularity_class_name(r.klass)},
         {"spherical_order", order_json(r.spherical_order)},
         {"order_at_center", order_json(r.order_at_y)}};
  if (r.order_at_conjugate) j["order_at_conjugate"] = order_json(*r.order_at_conjugate);
  j["k_max"] = r.k_max;
  if (r.exceptional_point) {
    j["exceptional_point"] = element_json(*r.exceptional_point);
    j["exceptional_point_order"] = *r.exceptional_point_order;
    j["exceptional_zero_order"] = *r.exceptional_zero_order;
  }
  j["coefficients"] = laurent_json(r.coefficients);
  j["growth"] = growth;
  return j;
}

inline void flatten_json(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    for (std::size_t n = 0; n < j.size(); ++n) flatten_json(j[n], prefix + "." + std::to_string(n), out);
  } else {
    out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

/// key,value lines for nested reports.
inline std::string to_csv(const Json& j) {
  std::ostringstream out;
  out << "key,value\n";
  flatten_json(j, "", out);
  return out.str();
}

}  // namespace slicefn
