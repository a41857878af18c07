#include <gtest/gtest.h>

#include "support.hpp"

using namespace slicefn;

namespace {

const AlgebraId O = AlgebraId::octonion();

Element<double> ed(int t) { return Element<double>::basis(O, t); }
Element<double> rd(double v) { return Element<double>::real(O, v); }

SliceFunction<double> inverse_binomial() {
  return SliceFunction<double>(std::get<SemiregularForm<double>>(star_power(ed(1), -1)));
}

double term_size(const LaurentTerm& t) { return std::max(oracle::size(t.u), oracle::size(t.v)); }

}  // namespace

TEST(Singularities, Distances) {
  EXPECT_NEAR(sigma(ed(1), ed(1) * 2.0), 1.0, 1e-15);
  EXPECT_NEAR(sigma(ed(1), ed(2)), 2.0, 1e-15);
  EXPECT_NEAR(tau(ed(1), ed(2)), 0.0, 1e-15);
  EXPECT_NEAR(u_dist(ed(2), ed(1)), 0.0, 1e-15);
  Rng rng(71);
  for (int n = 0; n < 100; ++n) {
    auto x = random_element<double>(O, rng), y = random_element<double>(O, rng);
    EXPECT_GE(sigma(x, y) + 1e-12, tau(x, y));
    auto y2 = Element<double>::real(O, y[0]) + random_unit<double>(O, rng) * oracle::size(im(y));
    EXPECT_NEAR(u_dist(x, y), u_dist(conj(x), y), 1e-10);
    EXPECT_NEAR(u_dist(x, y), u_dist(x, y2), 1e-10);
    auto J = random_unit<double>(O, rng);
    auto a = Element<double>::real(O, 0.3) + J * 1.2, b = Element<double>::real(O, -0.4) + J * 0.5;
    EXPECT_NEAR(sigma(a, b), oracle::distance(a, b), 1e-12);
    EXPECT_NEAR(tau(a, b), oracle::distance(a, b), 1e-12);
  }
}

TEST(Singularities, ExtractionOfInverseBinomial) {
  auto L = spherical_laurent_extract(inverse_binomial(), ed(1), -4, 3);
  for (const auto& [k, t] : L.terms) {
    if (k == -1) {
      EXPECT_LT(oracle::distance(t.u, rd(1.0)), 1e-8);
      EXPECT_LT(oracle::distance(t.v, ed(1)), 1e-8);
    } else {
      EXPECT_LT(term_size(t), 1e-8) << "k = " << k;
    }
  }
}

TEST(Singularities, ExtractionOfInverseDelta) {
  SliceFunction<double> f(SemiregularForm<double>(StarPolynomial<double>::constant(rd(1.0)), delta_poly(ed(1))));
  auto L = spherical_laurent_extract(f, ed(1), -2, 1);
  EXPECT_LT(oracle::size(L.terms.at(-1).u), 1e-8);
  EXPECT_LT(oracle::distance(L.terms.at(-1).v, rd(1.0)), 1e-8);
}

TEST(Singularities, PolynomialsHaveNoNegativeTerms) {
  Rng rng(72);
  for (int n = 0; n < 10; ++n) {
    SliceFunction<double> f(random_polynomial<double>(O, 4, rng));
    auto y = Element<double>::real(O, rng.uniform(-1, 1)) + random_unit<double>(O, rng) * rng.uniform(0.5, 1.5);
    auto L = spherical_laurent_extract(f, y, -4, 2);
    for (const auto& [k, t] : L.terms)
      if (k < 0) EXPECT_LT(term_size(t), 1e-8);
  }
}

TEST(Singularities, ContourHomotopyAndReconstruction) {
  Rng rng(73);
  for (int n = 0; n < 10; ++n) {
    const int m = int(rng.integer(1, 2));
    SemiregularForm<double> q(random_polynomial<double>(O, 3, rng), star_pow(delta_poly(ed(1)), m));
    SliceFunction<double> f(q);
    ContourConfig a, b;
    a.rho = 0.4;
    b.rho = 0.2;
    auto La = spherical_laurent_extract(f, ed(1), -m - 1, 3, a);
    auto Lb = spherical_laurent_extract(f, ed(1), -m - 1, 3, b);
    for (const auto& [k, t] : La.terms) {
      EXPECT_LT(oracle::distance(t.u, Lb.terms.at(k).u), 1e-7);
      EXPECT_LT(oracle::distance(t.v, Lb.terms.at(k).v), 1e-7);
    }
    for (int s = 0; s < 20; ++s) {
      auto x = Element<double>::real(O, rng.uniform(-0.1, 0.1)) + random_unit<double>(O, rng) * rng.uniform(0.85, 1.15);
      if (u_dist(x, ed(1)) < 0.05) continue;
      auto fx = f(x);
      EXPECT_LT(oracle::distance(laurent_reconstruct(La, x), fx), 1e-6 * (1.0 + oracle::size(fx)));
    }
  }
}

TEST(Singularities, ContourThroughSingularity) {
  ContourConfig cfg;
  cfg.rho = 2.5;
  try {
    spherical_laurent_extract(inverse_binomial(), ed(1), -2, 1, cfg);
    FAIL();
  } catch (const SliceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ContourThroughSingularity);
  }
}

TEST(Singularities, PoleOfInverseBinomial) {
  auto rep = classify_singularity(inverse_binomial(), ed(1));
  EXPECT_EQ(rep.klass, SingularityClass::Pole);
  EXPECT_EQ(rep.order_at_y.value, 1);
  EXPECT_EQ(rep.order_at_conjugate->value, 0);
  EXPECT_EQ(rep.spherical_order.value, 2);
  ASSERT_TRUE(rep.exceptional_point.has_value());
  EXPECT_LT(oracle::distance(*rep.exceptional_point, -ed(1)), 1e-12);
  EXPECT_EQ(rep.exceptional_point_order, 0);
  EXPECT_EQ(rep.exceptional_zero_order, 1);
}

TEST(Singularities, RemovableQuotient) {
  SliceFunction<double> f(SemiregularForm<double>(StarPolynomial<double>::from_real(O, {1.0, 0.0, 1.0}),
                                                  delta_poly(ed(1))));
  auto rep = classify_singularity(f, ed(1));
  EXPECT_EQ(rep.klass, SingularityClass::Removable);
  EXPECT_EQ(rep.spherical_order.value, 0);
  EXPECT_EQ(rep.order_at_y.value, 0);
}

TEST(Singularities, DoublePoleOnSphere) {
  SliceFunction<double> f(SemiregularForm<double>(StarPolynomial<double>::constant(ed(4)),
                                                  star_pow(delta_poly(ed(1)), 2)));
  auto rep = classify_singularity(f, ed(2));
  EXPECT_EQ(rep.klass, SingularityClass::Pole);
  EXPECT_EQ(rep.spherical_order.value, 4);
  EXPECT_EQ(rep.order_at_y.value, 2);
  EXPECT_EQ(rep.order_at_conjugate->value, 2);
}

TEST(Singularities, RealPole) {
  StarLaurent<double> f(O, 0.0, {{-3, ed(5)}, {0, rd(1.0)}});
  auto rep = classify_singularity(SliceFunction<double>(f), rd(0.0));
  EXPECT_EQ(rep.klass, SingularityClass::Pole);
  EXPECT_EQ(rep.order_at_y.value, 3);
  EXPECT_EQ(rep.spherical_order.value, 4);
}

TEST(Singularities, EssentialTruncatedExponential) {
  SliceFunction<double> f(truncated_exp_inverse(O));
  auto rep = classify_singularity(f, rd(0.0));
  EXPECT_EQ(rep.klass, SingularityClass::Essential);
  EXPECT_FALSE(rep.order_at_y.finite());
  EXPECT_FALSE(rep.spherical_order.finite());
  EXPECT_EQ(rep.spherical_order.bound, 24);
}

TEST(Singularities, SemiregularArithmetic) {
  Rng rng(74);
  for (int n = 0; n < 20; ++n) {
    SemiregularForm<double> F(random_polynomial<double>(O, 2, rng), delta_poly(ed(1)));
    auto G = semiregular_reciprocal(F);
    auto one = slice_product(SliceFunction<double>(F), SliceFunction<double>(G));
    auto x = random_element<double>(O, rng);
    try {
      EXPECT_LT(oracle::distance(one(x), rd(1.0)), 1e-9);
    } catch (const SliceError& e) {
      EXPECT_EQ(e.code(), ErrorCode::PoleProximity);
    }
  }
  auto r = semiregular_reciprocal(SemiregularForm<double>(StarPolynomial<double>(O, {-ed(1), rd(1.0)})));
  EXPECT_EQ(r.numerator(), StarPolynomial<double>(O, {ed(1), rd(1.0)}));
  EXPECT_EQ(r.denominator(), delta_poly(ed(1)));
}

TEST(Singularities, DensityOfEssentialImage) {
  DensityConfig cfg;
  cfg.samples = 200000;
  cfg.targets = 500;
  auto rep = density_probe(SliceFunction<double>(truncated_exp_inverse(O)), rd(0.0), cfg);
  EXPECT_TRUE(rep.planar_reduction);
  EXPECT_GE(rep.coverage, 0.9);
}

TEST(Singularities, DensityOfPoleAvoidsSmallValues) {
  DensityConfig cfg;
  cfg.samples = 20000;
  cfg.targets = 300;
  auto rep = density_probe(inverse_binomial(), ed(1), cfg);
  EXPECT_FALSE(rep.planar_reduction);
  EXPECT_LT(rep.coverage, 0.5);
}
