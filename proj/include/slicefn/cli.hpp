#pragma once

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slicefn/expression.hpp"
#include "slicefn/io.hpp"

namespace slicefn {

enum ExitCode { kExitOk = 0, kExitParse = 2, kExitMath = 3, kExitInconclusive = 4 };

struct CliOptions {
  std::string command;
  std::string algebra = "O";
  std::string mode = "rational";
  std::uint64_t seed = 0;
  std::string out = "json";
  double tol = 1e-9;

  std::string expr;
  std::string expr2;
  std::string series;
  std::string at;
  std::string center;
  std::string sphere;
  std::string rect = "-3,3,0,3";
  std::string unit;
  std::string kind = "ball";
  int grid = 64;
  int na = 41;
  int nb = 21;
  double radius = 0.0;
  int targets = 32;
  int samples = 100000;
  double eps = 0.15;
  int kmin = -3;
  int kmax = 12;
  double rho = 0.0;
  int nodes = 512;
  bool inverse = false;
};

namespace detail {

inline std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

inline Rect parse_rect(const std::string& text) {
  auto parts = split_commas(text);
  if (parts.size() != 4) throw ParseFailure(ErrorCode::ParseError, 0, "rect needs four comma-separated numbers");
  return Rect{std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3])};
}

template <Scalar S>
Sphere<S> parse_sphere(const std::string& text) {
  auto parts = split_commas(text);
  if (parts.size() != 2) throw ParseFailure(ErrorCode::ParseError, 0, "sphere is given as alpha,beta_sq");
  return Sphere<S>{parse_scalar<S>(parts[0]), parse_scalar<S>(parts[1])};
}

/// sum_{n <= terms} x^{-n} / n! around 0, named "exp-inverse:N".
template <Scalar S>
SliceFunction<S> named_series(const std::string& name, AlgebraId alg) {
  const std::string prefix = "exp-inverse";
  if (name.rfind(prefix, 0) != 0) throw ParseFailure(ErrorCode::ParseError, 0, "unknown series '" + name + "'");
  int terms = 40;
  if (name.size() > prefix.size()) {
    if (name[prefix.size()] != ':') throw ParseFailure(ErrorCode::ParseError, prefix.size(), "expected ':'");
    terms = std::stoi(name.substr(prefix.size() + 1));
  }
  std::map<int, Element<S>> cs;
  S fact(1);
  for (int n = 0; n <= terms; ++n) {
    if (n > 0) fact = fact * S(n);
    cs.emplace(-n, Element<S>::real(alg, S(S(1) / fact)));
  }
  return SliceFunction<S>(StarLaurent<S>(alg, S(0), std::move(cs)));
}

template <Scalar S>
SliceFunction<S> source_function(const CliOptions& o, AlgebraId alg) {
  if (!o.series.empty()) return named_series<S>(o.series, alg);
  if (o.expr.empty()) throw ParseFailure(ErrorCode::ParseError, 0, "--expr is required");
  return parse_function<S>(o.expr, alg);
}

template <Scalar S>
Element<S> required_point(const std::string& text, const std::string& flag, AlgebraId alg) {
  if (text.empty()) throw ParseFailure(ErrorCode::ParseError, 0, flag + " is required");
  return parse_point<S>(text, alg);
}

template <Scalar S>
Json with_value(Json j, const SliceFunction<S>& f, const CliOptions& o, AlgebraId alg) {
  if (!o.at.empty()) {
    const Element<S> x = parse_point<S>(o.at, alg);
    j["at"] = element_json(x);
    j["value"] = element_json(f(x));
  }
  return j;
}

template <Scalar S>
std::string table_csv(const SliceFunction<S>& f, const Rect& rect, int na, int nb, Json& rows) {
  std::ostringstream csv;
  csv << "alpha,beta,abs_f,abs_min,abs_max\n";
  const AlgebraId alg = f.algebra();
  const auto eval = double_evaluator(f);
  rows = Json::array();
  for (int a = 0; a < na; ++a) {
    for (int b = 0; b < nb; ++b) {
      const double alpha = rect.alpha0 + (rect.alpha1 - rect.alpha0) * (na > 1 ? double(a) / (na - 1) : 0.0);
      const double beta = rect.beta0 + (rect.beta1 - rect.beta0) * (nb > 1 ? double(b) / (nb - 1) : 0.0);
      Element<double> x = Element<double>::real(alg, alpha);
      if (alg.level > 0) x[1] = beta;
      double value, lo, hi;
      try {
        value = std::sqrt(norm(eval(x)));
        lo = hi = value;
        if (beta > 0.0 && alg.level > 0) {
          Element<S> y(alg);
          y[0] = from_double<S>(alpha);
          y[1] = from_double<S>(beta);
          auto ex = sphere_extrema(f, y);
          lo = ex.min_value;
          hi = ex.max_value;
        }
      } catch (const SliceError&) {
        continue;
      }
      csv << alpha << ',' << beta << ',' << value << ',' << lo << ',' << hi << '\n';
      rows.push_back(Json{{"alpha", alpha}, {"beta", beta}, {"abs_f", value}, {"abs_min", lo}, {"abs_max", hi}});
    }
  }
  return csv.str();
}

template <Scalar S>
Json run_command(const CliOptions& o, AlgebraId alg, std::string& csv_override) {
  const std::string& c = o.command;
  if (c == "eval") {
    auto f = source_function<S>(o, alg);
    const Element<S> x = required_point<S>(o.at, "--at", alg);
    return Json{{"at", element_json(x)}, {"value", element_json(f(x))}};
  }
  if (c == "product") {
    auto f = source_function<S>(o, alg);
    if (o.expr2.empty()) throw ParseFailure(ErrorCode::ParseError, 0, "--expr2 is required");
    auto g = parse_function<S>(o.expr2, alg);
    return with_value(Json{{"product", function_json(slice_product(f, g))}}, slice_product(f, g), o, alg);
  }
  if (c == "conj") {
    auto f = slice_conjugate(source_function<S>(o, alg));
    return with_value(Json{{"conjugate", function_json(f)}}, f, o, alg);
  }
  if (c == "normal") {
    auto f = normal(source_function<S>(o, alg));
    return with_value(Json{{"normal", function_json(f)}}, f, o, alg);
  }
  if (c == "reciprocal") {
    auto f = source_function<S>(o, alg);
    auto r = star_reciprocal(f);
    Json j{{"reciprocal", function_json(r)}};
    if (!o.at.empty()) {
      const Element<S> x = parse_point<S>(o.at, alg);
      j["at"] = element_json(x);
      j["value"] = element_json(r(x));
      j["via_phi"] = element_json(reciprocal_via_phi(f, x));
    }
    return j;
  }
  if (c == "tf") {
    auto f = source_function<S>(o, alg);
    const Element<S> x = required_point<S>(o.at, "--at", alg);
    Json j{{"at", element_json(x)}};
    if (o.inverse) {
      j["t_f_inverse"] = element_json(t_f_inverse(f, x));
      return j;
    }
    j["t_f"] = element_json(t_f(f, x));
    j["t_f_special"] = element_json(t_f_special(f, x));
    j["associator_magnitude"] = associator_magnitude(f, x);
    j["associator_status"] = associator_status_name(associator_status(f, x));
    return j;
  }
  if (c == "zeros") {
    auto f = source_function<S>(o, alg);
    if (!o.sphere.empty()) return Json{{"sphere_zeros", zero_class_json(classify_sphere_zeros(f, parse_sphere<S>(o.sphere), o.tol))}};
    Json hits = Json::array();
    for (const auto& h : zero_scan(f, parse_rect(o.rect), o.grid)) hits.push_back(zero_hit_json(h));
    return Json{{"rect", o.rect}, {"zeros", hits}};
  }
  if (c == "camshaft") {
    auto f = source_function<S>(o, alg);
    if (o.expr2.empty()) throw ParseFailure(ErrorCode::ParseError, 0, "--expr2 is required");
    auto g = parse_function<S>(o.expr2, alg);
    const Sphere<S> s = !o.sphere.empty() ? parse_sphere<S>(o.sphere) : sphere_of(required_point<S>(o.at, "--at", alg));
    auto r = camshaft_zero(f, g, s);
    Json j{{"case", r.case_id}, {"zero", zero_class_json(r.zero)}, {"consistent", r.consistent},
           {"discrepancy", r.discrepancy}};
    if (r.case_id == 4 && r.zero.tag == ZeroTag::Point) {
      auto [w2, w3] = camshaft_alternatives(f, g, s);
      j["case2_formula"] = element_json(w2);
      j["case3_formula"] = element_json(w3);
    }
    return j;
  }
  if (c == "extrema") {
    auto f = source_function<S>(o, alg);
    const Element<S> y = required_point<S>(o.at, "--at", alg);
    Json j = extrema_json(sphere_extrema(f, y));
    if (o.radius > 0.0) {
      auto p = local_extremum_probe(f, y, o.radius, 4096, o.seed);
      j["local_probe"] = Json{{"verdict", extremum_verdict_name(p.verdict)}, {"constant", p.constant},
                              {"center_value", p.center_value}, {"max_excess", p.max_excess},
                              {"max_deficit", p.max_deficit}, {"samples", p.samples}, {"seed", p.seed}};
    }
    return j;
  }
  if (c == "openmap") {
    auto f = source_function<S>(o, alg);
    const Element<S> x0 = required_point<S>(o.at, "--at", alg);
    const double radius = o.radius > 0.0 ? o.radius : 0.5;
    if (!o.unit.empty()) {
      auto w = non_open_witness(f, x0, radius, parse_point<S>(o.unit, alg), 4096, o.seed);
      return Json{{"slice_distance", w.slice_distance}, {"ball_misses_slice", w.ball_misses_slice},
                  {"slice_preserving", w.slice_preserving}, {"samples", w.samples},
                  {"hits_off_real", w.hits_off_real}, {"not_open", w.not_open}};
    }
    CompactSpec spec{o.kind == "tube" ? CompactKind::Tube : CompactKind::Ball, radius};
    auto r = open_image_epsilon(f, x0, spec, o.targets, o.seed);
    return Json{{"epsilon", r.epsilon}, {"boundary_min", r.boundary_min}, {"boundary_samples", r.boundary_samples},
                {"targets", r.targets}, {"attained", r.attained}, {"coverage", r.coverage},
                {"worst_residual", r.worst_residual}, {"starts", r.starts}, {"seed", r.seed}};
  }
  if (c == "laurent") {
    auto f = source_function<S>(o, alg);
    const Element<S> y = required_point<S>(o.center, "--center", alg);
    ContourConfig cfg;
    cfg.rho = o.rho;
    cfg.nodes = o.nodes;
    cfg.tolerance = o.tol;
    const int khi = std::max(o.kmin, 2);
    auto s = spherical_laurent_extract(f, y, o.kmin, khi, cfg);
    Json j = laurent_json(s);
    std::ostringstream csv;
    csv << "k,component,";
    for (int t = 0; t < alg.dim(); ++t) csv << 'e' << t << (t + 1 < alg.dim() ? "," : "\n");
    for (const auto& [k, term] : s.terms) {
      for (const auto& [name, e] : {std::pair{"u", term.u}, std::pair{"v", term.v}}) {
        csv << k << ',' << name << ',';
        for (int t = 0; t < alg.dim(); ++t) csv << e[t] << (t + 1 < alg.dim() ? "," : "\n");
      }
    }
    csv_override = csv.str();
    return j;
  }
  if (c == "classify") {
    auto f = source_function<S>(o, alg);
    const Element<S> y = required_point<S>(o.center, "--center", alg);
    ContourConfig cfg;
    cfg.rho = o.rho;
    cfg.nodes = o.nodes;
    return singularity_json(classify_singularity(f, y, o.kmax, RadiiConfig{}, cfg));
  }
  if (c == "density") {
    auto f = source_function<S>(o, alg);
    const Element<S> y = required_point<S>(o.center, "--center", alg);
    DensityConfig cfg;
    cfg.samples = o.samples;
    cfg.targets = o.targets;
    cfg.eps = o.eps;
    cfg.seed = o.seed;
    auto r = density_probe(f, y, cfg);
    return Json{{"coverage", r.coverage}, {"covered", r.covered}, {"targets", r.targets}, {"samples", r.samples},
                {"failed_samples", r.failed_samples}, {"planar_reduction", r.planar_reduction}, {"eps", cfg.eps},
                {"seed", r.seed}};
  }
  if (c == "table") {
    auto f = source_function<S>(o, alg);
    Json rows;
    csv_override = table_csv(f, parse_rect(o.rect), o.na, o.nb, rows);
    return Json{{"rows", rows}};
  }
  throw ParseFailure(ErrorCode::ParseError, 0, "unknown command '" + c + "'");
}

inline Json error_json(std::string_view code, const std::string& message, std::optional<std::size_t> position = {}) {
  Json e{{"code", code}, {"message", message}};
  if (position) e["position"] = *position;
  return Json{{"error", e}};
}

}  // namespace detail

/// Parses arguments (without the program name), runs one subcommand and
/// writes the report to out. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliOptions o;
  CLI::App app{"Slice functions over the complex numbers, quaternions and octonions"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--algebra", o.algebra, "C, H or O")->check(CLI::IsMember({"C", "H", "O"}));
  app.add_option("--mode", o.mode, "rational or double")->check(CLI::IsMember({"rational", "double"}));
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--tol", o.tol, "tolerance");

  struct Spec {
    const char* name;
    const char* help;
  };
  const std::vector<Spec> specs{
      {"eval", "evaluate f at a point"},
      {"product", "slice product f.g"},
      {"conj", "slice conjugate"},
      {"normal", "normal function N(f)"},
      {"reciprocal", "slice reciprocal"},
      {"tf", "sphere transformation T_f"},
      {"zeros", "zero set of f"},
      {"camshaft", "zero of f.g on a sphere"},
      {"extrema", "modulus extrema on a sphere"},
      {"openmap", "open mapping probe"},
      {"laurent", "spherical Laurent coefficients"},
      {"classify", "classify a spherical singularity"},
      {"density", "Casorati-Weierstrass density probe"},
      {"table", "modulus table over a slice grid"},
  };
  for (const auto& s : specs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--expr", o.expr, "expression in x");
    sub->add_option("--expr2", o.expr2, "second expression");
    sub->add_option("--series", o.series, "named series, e.g. exp-inverse:40");
    sub->add_option("--at", o.at, "point");
    sub->add_option("--center", o.center, "centre of the sphere");
    sub->add_option("--sphere", o.sphere, "alpha,beta_sq");
    sub->add_option("--rect", o.rect, "alpha0,alpha1,beta0,beta1");
    sub->add_option("--unit", o.unit, "imaginary unit");
    sub->add_option("--kind", o.kind, "ball or tube")->check(CLI::IsMember({"ball", "tube"}));
    sub->add_option("--grid", o.grid, "grid density");
    sub->add_option("--na", o.na, "alpha nodes");
    sub->add_option("--nb", o.nb, "beta nodes");
    sub->add_option("--radius", o.radius, "radius");
    sub->add_option("--targets", o.targets, "number of targets");
    sub->add_option("--samples", o.samples, "number of samples");
    sub->add_option("--eps", o.eps, "coverage radius");
    sub->add_option("--kmin", o.kmin, "lowest coefficient index");
    sub->add_option("--kmax", o.kmax, "probe bound");
    sub->add_option("--rho", o.rho, "contour radius");
    sub->add_option("--nodes", o.nodes, "quadrature nodes");
    sub->add_flag("--inverse", o.inverse, "apply the inverse transformation");
    sub->callback([&o, name = std::string(s.name)] { o.command = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    out << detail::error_json("ParseError", e.what()).dump(2) << '\n';
    err << e.what() << '\n';
    return kExitParse;
  }

  const AlgebraId alg = AlgebraId::from_symbol(o.algebra[0]);
  Json report{{"command", o.command}, {"algebra", o.algebra}, {"mode", o.mode}, {"seed", o.seed}};
  std::string csv;
  try {
    if (o.mode == "rational")
      report["result"] = detail::run_command<Rational>(o, alg, csv);
    else
      report["result"] = detail::run_command<double>(o, alg, csv);
  } catch (const ParseFailure& e) {
    out << detail::error_json(error_name(e.code()), e.what(), e.position()).dump(2) << '\n';
    return kExitParse;
  } catch (const SliceError& e) {
    out << detail::error_json(error_name(e.code()), e.what()).dump(2) << '\n';
    const bool inconclusive = e.code() == ErrorCode::ProbeInconclusive || e.code() == ErrorCode::NonConvergentWindow;
    return inconclusive ? kExitInconclusive : kExitMath;
  } catch (const std::invalid_argument& e) {
    out << detail::error_json("ParseError", std::string("malformed number: ") + e.what()).dump(2) << '\n';
    return kExitParse;
  } catch (const std::out_of_range& e) {
    out << detail::error_json("ParseError", std::string("number out of range: ") + e.what()).dump(2) << '\n';
    return kExitParse;
  }
  if (o.out == "csv")
    out << (csv.empty() ? to_csv(report) : csv);
  else
    out << report.dump(2) << '\n';
  return kExitOk;
}

}  // namespace slicefn
