#include <gtest/gtest.h>

#include "oracle.hpp"
#include "slicefn/random.hpp"

using namespace slicefn;

namespace {

const AlgebraId O = AlgebraId::octonion();
const AlgebraId H = AlgebraId::quaternion();

Element<Rational> eq(int t) { return Element<Rational>::basis(O, t); }

}  // namespace

TEST(CayleyDickson, QuaternionUnitsFollowHamilton) {
  auto i = Element<double>::basis(H, 1), j = Element<double>::basis(H, 2), k = Element<double>::basis(H, 3);
  auto m1 = Element<double>::real(H, -1.0);
  EXPECT_EQ(i * j, k);
  EXPECT_EQ(j * k, i);
  EXPECT_EQ(k * i, j);
  EXPECT_EQ(i * i, m1);
  EXPECT_EQ(i * j * k, m1);
  EXPECT_EQ(commutator(i, j), k * 2.0);
}

TEST(CayleyDickson, OctonionNamedUnits) {
  EXPECT_EQ(eq(4) * eq(1), eq(5));
  EXPECT_EQ(eq(4) * eq(2), eq(6));
  EXPECT_EQ(eq(4) * eq(3), eq(7));
  for (int t = 1; t < 8; ++t) EXPECT_EQ(eq(t) * eq(t), Element<Rational>::real(O, Rational(-1)));
}

TEST(CayleyDickson, TableMatchesRecursionOracle) {
  Rng rng(11);
  for (int lv = 1; lv <= 3; ++lv) {
    AlgebraId alg{lv};
    for (int n = 0; n < 200; ++n) {
      auto a = random_element<double>(alg, rng), b = random_element<double>(alg, rng);
      EXPECT_LT(oracle::distance(a * b, oracle::product(a, b)), 1e-12);
    }
  }
}

TEST(CayleyDickson, OctonionsAreNotAssociative) {
  auto a = associator(eq(1), eq(2), eq(4));
  EXPECT_FALSE(a.is_zero());
  EXPECT_EQ(a, eq(7) * Rational(-2));
}

TEST(CayleyDickson, NormConjugationTrace) {
  Rng rng(3);
  for (int n = 0; n < 100; ++n) {
    auto a = random_element<Rational>(O, rng), b = random_element<Rational>(O, rng);
    EXPECT_EQ(norm(a * b), norm(a) * norm(b));
    EXPECT_EQ(conj(a * b), conj(b) * conj(a));
    EXPECT_EQ(a * conj(a), Element<Rational>::real(O, norm(a)));
    EXPECT_EQ(trace(commutator(a, b)), 0);
    EXPECT_EQ(a * inverse(a), Element<Rational>::real(O, Rational(1)));
  }
}

TEST(CayleyDickson, AlternativeLaws) {
  Rng rng(5);
  for (int n = 0; n < 100; ++n) {
    auto a = random_element<Rational>(O, rng), b = random_element<Rational>(O, rng);
    EXPECT_TRUE(associator(a, a, b).is_zero());
    EXPECT_TRUE(associator(a, b, b).is_zero());
    EXPECT_TRUE(associator(a, b, a).is_zero());
  }
}

TEST(CayleyDickson, ZeroHasNoInverse) {
  EXPECT_THROW(inverse(Element<double>(O)), SliceError);
}

TEST(CayleyDickson, MixedAlgebrasAreRejected) {
  try {
    auto p = Element<double>::basis(H, 1) * Element<double>::basis(O, 1);
    (void)p;
    FAIL();
  } catch (const SliceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlgebraMismatch);
  }
}

TEST(CayleyDickson, SphereDecomposition) {
  Element<Rational> x(O, {Rational(1), Rational(3), Rational(0), Rational(4)});
  auto d = sphere_decompose(x);
  EXPECT_EQ(d.alpha, 1);
  EXPECT_EQ(d.beta, 5);
  EXPECT_TRUE(is_imaginary_unit(d.unit));
}

TEST(CayleyDickson, RandomUnitsAreExactUnits) {
  Rng rng(9);
  for (int n = 0; n < 50; ++n) {
    auto u = random_unit<Rational>(O, rng);
    EXPECT_EQ(trace(u), 0);
    EXPECT_EQ(norm(u), 1);
    EXPECT_EQ(u * u, Element<Rational>::real(O, Rational(-1)));
  }
}

TEST(CayleyDickson, SplittingBasisIsOrthonormal) {
  auto J = Element<double>::basis(O, 5);
  auto basis = splitting_basis(J);
  ASSERT_EQ(basis.size(), 8u);
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) EXPECT_NEAR(dot(basis[a], basis[b]), a == b ? 1.0 : 0.0, 1e-12);
}
