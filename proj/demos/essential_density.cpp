#include <iostream>

#include "slicefn/slicefn.hpp"

using namespace slicefn;

int main() {
  const AlgebraId O = AlgebraId::octonion();
  const Element<double> origin(O);
  SliceFunction<double> f(truncated_exp_inverse(O, 40));

  auto rep = classify_singularity(f, origin);
  std::cout << singularity_class_name(rep.klass) << ", spherical order " << rep.spherical_order.to_string() << '\n';

  DensityConfig cfg;
  cfg.seed = 1;
  for (int samples : {1000, 10000, 100000, 1000000}) {
    cfg.samples = samples;
    auto d = density_probe(f, origin, cfg);
    std::cout << samples << " samples: coverage " << d.coverage << " of " << d.targets << " targets\n";
  }

  // A pole for comparison: the image near i stays away from small values.
  SliceFunction<double> g(std::get<SemiregularForm<double>>(star_power(Element<double>::basis(O, 1), -1)));
  cfg.samples = 20000;
  cfg.targets = 500;
  std::cout << "pole: coverage " << density_probe(g, Element<double>::basis(O, 1), cfg).coverage << '\n';
}
