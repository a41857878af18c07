#include <gtest/gtest.h>

#include "support.hpp"

using namespace slicefn;

namespace {

const AlgebraId O = AlgebraId::octonion();
const AlgebraId H = AlgebraId::quaternion();

Element<double> ed(int t) { return Element<double>::basis(O, t); }
Element<double> rd(double v) { return Element<double>::real(O, v); }

SliceFunction<double> example_g() {
  return slice_sum(constant_function(ed(1) * 3.0),
                   slice_product(variable_function<double>(O), unit_switch_function(ed(1))));
}

}  // namespace

TEST(Modulus, BinomialOnUnitSphere) {
  SliceFunction<double> f(StarPolynomial<double>(O, {-ed(1), rd(1.0)}));
  auto e = sphere_extrema(f, ed(2));
  EXPECT_FALSE(e.constant_modulus);
  EXPECT_NEAR(e.max_value, 2.0, 1e-12);
  EXPECT_NEAR(e.min_value, 0.0, 1e-12);
  EXPECT_LT(oracle::distance(*e.min_point, ed(1)), 1e-12);
  EXPECT_LT(oracle::distance(*e.max_point, -ed(1)), 1e-12);
  EXPECT_TRUE(e.grid_check);
  EXPECT_TRUE(e.algebra_membership_check);
}

TEST(Modulus, IdentityHasConstantModulus) {
  auto e = sphere_extrema(variable_function<double>(O), ed(3));
  EXPECT_TRUE(e.constant_modulus);
  EXPECT_NEAR(e.max_value, 1.0, 1e-12);
}

TEST(Modulus, FormulaBoundsGridSearch) {
  Rng rng(61);
  for (int n = 0; n < 100; ++n) {
    AlgebraId alg = n % 2 ? O : H;
    SliceFunction<double> f(random_polynomial<double>(alg, int(rng.integer(1, 4)), rng));
    auto y = Element<double>::real(alg, rng.uniform(-1, 1)) + random_unit<double>(alg, rng) * rng.uniform(0.2, 1.5);
    auto e = sphere_extrema(f, y);
    EXPECT_TRUE(e.grid_check);
    if (!e.constant_modulus) {
      EXPECT_TRUE(e.algebra_membership_check);
      EXPECT_NEAR(oracle::size(f(*e.max_point)), e.max_value, 1e-9 * (1.0 + e.max_value));
      EXPECT_NEAR(oracle::size(f(*e.min_point)), e.min_value, 1e-9 * (1.0 + e.max_value));
    }
  }
}

TEST(Modulus, ZeroIsUniqueGridMinimizer) {
  Rng rng(62);
  auto y = Element<double>::real(O, 0.5) + random_unit<double>(O, rng) * 0.75;
  auto p = star_mul(StarPolynomial<double>(O, {-y, rd(1.0)}), random_polynomial<double>(O, 2, rng));
  SliceFunction<double> f(p);
  auto e = sphere_extrema(f, y);
  EXPECT_NEAR(e.min_value, 0.0, 1e-9);
  EXPECT_LT(oracle::distance(*e.min_point, y), 1e-9);
}

TEST(Modulus, ExampleIdentity) {
  auto g = example_g();
  auto f = unit_switch_function(ed(1));
  Rng rng(63);
  for (int n = 0; n < 200; ++n) {
    auto x = random_element<double>(O, rng, -2, 2);
    double lhs = norm(g(x)) - 9.0;
    double rhs = (norm(x) - 3.0 * oracle::size(im(x))) * norm(f(x));
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST(Modulus, ExampleLocalMaximum) {
  auto rep = local_extremum_probe(example_g(), ed(1), 0.3, 4096, 1);
  EXPECT_EQ(rep.verdict, ExtremumVerdict::IsLocalMax);
  EXPECT_NEAR(rep.center_value, 3.0, 1e-12);
  EXPECT_FALSE(rep.constant);
}

TEST(Modulus, OpenMappingGivesNeither) {
  Rng rng(64);
  for (int n = 0; n < 5; ++n) {
    SliceFunction<double> f(random_polynomial<double>(O, 2, rng));
    auto rep = local_extremum_probe(f, rd(0.3), 0.1, 2048, n);
    EXPECT_EQ(rep.verdict, ExtremumVerdict::Neither);
  }
}

TEST(Modulus, ConstantIsReportedAsMax) {
  auto rep = local_extremum_probe(constant_function(ed(2)), rd(0.0), 0.5, 512);
  EXPECT_EQ(rep.verdict, ExtremumVerdict::IsLocalMax);
  EXPECT_TRUE(rep.constant);
}

TEST(Modulus, FailedSamplesAreAmbiguous) {
  auto rep = local_extremum_probe(unit_switch_function(ed(1)), ed(2) * 0.05, 0.2, 512);
  EXPECT_GT(rep.failed_samples, 0);
  EXPECT_TRUE(rep.verdict == ExtremumVerdict::SaddleAmbiguous || rep.verdict == ExtremumVerdict::Neither);
}

TEST(Modulus, OpenImageOfSquare) {
  SliceFunction<double> f(StarPolynomial<double>::from_real(O, {0.0, 0.0, 1.0}));
  auto rep = open_image_epsilon(f, rd(1.0), CompactSpec{CompactKind::Ball, 0.5}, 32, 3);
  EXPECT_GT(rep.epsilon, 0.0);
  EXPECT_DOUBLE_EQ(rep.coverage, 1.0);
}

TEST(Modulus, OpenImageOnTube) {
  SliceFunction<double> f(StarPolynomial<double>(H, {Element<double>(H), Element<double>::real(H, 1.0),
                                                     Element<double>::basis(H, 2)}));
  auto rep = open_image_epsilon(f, Element<double>::real(H, 1.0) + Element<double>::basis(H, 1) * 0.5,
                                CompactSpec{CompactKind::Tube, 0.2}, 16, 4);
  EXPECT_GT(rep.epsilon, 0.0);
  EXPECT_GE(rep.coverage, 0.9);
}

TEST(Modulus, ConstantHasDegenerateEpsilon) {
  try {
    open_image_epsilon(constant_function(ed(1)), rd(0.0), CompactSpec{});
    FAIL();
  } catch (const SliceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateEpsilon);
  }
}

TEST(Modulus, NonOpenWitness) {
  SliceFunction<double> f(StarPolynomial<double>::from_real(O, {0.0, 0.0, 1.0}));
  auto w = non_open_witness(f, ed(1), 1.0, ed(3), 4096, 5);
  EXPECT_TRUE(w.ball_misses_slice);
  EXPECT_TRUE(w.slice_preserving);
  EXPECT_EQ(w.hits_off_real, 0);
  EXPECT_TRUE(w.not_open);
  auto other = non_open_witness(f, ed(1), 1.0, ed(1), 256, 5);
  EXPECT_FALSE(other.not_open);
}
