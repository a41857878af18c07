#include <iostream>

#include "slicefn/slicefn.hpp"

using namespace slicefn;

int main() {
  const AlgebraId O = AlgebraId::octonion();
  auto e = [&](int t) { return Element<Rational>::basis(O, t); };

  // h(x) = l + 2xi and p(x) = xj, exact rational arithmetic.
  auto h = parse_function<Rational>("l + 2*x*i", O);
  auto p = parse_function<Rational>("x*j", O);

  std::cout << "N(h) at j:        " << to_string(normal(h)(e(2))) << '\n';
  std::cout << "T_h(j):           " << to_string(t_f(h, e(2))) << '\n';
  std::cout << "h^-(j):           " << to_string(star_reciprocal(h)(e(2))) << '\n';

  const auto li = e(5);
  auto q = slice_product(star_reciprocal(h), p);
  const auto t = t_f(h, li);
  std::cout << "(h^- . p)(li):    " << to_string(q(li)) << '\n';
  std::cout << "h(T)^-1 p(T):     " << to_string(inverse(h(t)) * p(t)) << '\n';
  std::cout << "h(li)^-1 p(li):   " << to_string(inverse(h(li)) * p(li)) << '\n';
  // Output: -k for the star product, while h(J)^-1 p(J) has modulus 1 only at J = li, where it is +k.

  const auto c = Element<Rational>::real(O, Rational(1)) + e(2);
  auto hc = slice_product(h, constant_function(c));
  std::cout << "(h.c)(l):         " << to_string(hc(e(4))) << '\n';
  std::cout << "h(lj) c:          " << to_string(h(e(6)) * c) << '\n';
  std::cout << "h(l) c:           " << to_string(h(e(4)) * c) << '\n';
}
