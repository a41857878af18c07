#include <iostream>

#include "slicefn/slicefn.hpp"

using namespace slicefn;

int main() {
  const AlgebraId O = AlgebraId::octonion();
  const Sphere<Rational> unit{Rational(0), Rational(1)};

  // Only g has a zero on the unit sphere; the zero of f.g sits elsewhere.
  auto f = parse_function<Rational>("x - 1 - j", O);
  auto g = parse_function<Rational>("x - i", O);
  auto fg = slice_product(f, g);

  auto r = camshaft_zero(f, g, unit);
  std::cout << "case " << r.case_id << ", zero of f.g at " << to_string(*r.zero.point) << '\n';
  std::cout << "(f.g) there:      " << to_string(fg(*r.zero.point)) << '\n';
  std::cout << "(f.g)(i):         " << to_string(fg(Element<Rational>::basis(O, 1))) << '\n';

  // Both factors vanish on the sphere.
  auto f2 = parse_function<Rational>("x - j", O);
  auto r2 = camshaft_zero(f2, g, unit);
  auto [w2, w3] = camshaft_alternatives(f2, g, unit);
  std::cout << "case " << r2.case_id << ", zero at " << to_string(*r2.zero.point) << " (formulas give "
            << to_string(w2) << " and " << to_string(w3) << ")\n";

  // Scan a slice for the zeros of f.g.
  for (const auto& z : zero_scan(fg, Rect{-2, 2, 0, 2}))
    std::cout << "scan: alpha=" << z.alpha << " beta=" << z.beta << " " << zero_tag_name(z.tag) << '\n';
}
