#include <gtest/gtest.h>

#include "support.hpp"

using namespace slicefn;

namespace {

const AlgebraId O = AlgebraId::octonion();

Element<Rational> eq(int t) { return Element<Rational>::basis(O, t); }
Element<Rational> rq(long long v) { return Element<Rational>::real(O, Rational(v)); }
SliceFunction<Rational> binomial(const Element<Rational>& y) { return StarPolynomial<Rational>(O, {-y, rq(1)}); }
const Sphere<Rational> unit_sphere{Rational(0), Rational(1)};

}  // namespace

TEST(Zeros, BinomialHasPointZero) {
  auto z = classify_sphere_zeros(binomial(eq(1)), unit_sphere);
  EXPECT_EQ(z.tag, ZeroTag::Point);
  EXPECT_EQ(*z.point, eq(1));
}

TEST(Zeros, DeltaVanishesOnWholeSphere) {
  auto z = classify_sphere_zeros(SliceFunction<Rational>(delta_poly(eq(1))), unit_sphere);
  EXPECT_EQ(z.tag, ZeroTag::Whole);
  EXPECT_TRUE(z.verified);
}

TEST(Zeros, ExampleZeroOnHalfSphere) {
  SliceFunction<Rational> h(StarPolynomial<Rational>(O, {eq(4), eq(1) * Rational(2)}));
  auto z = classify_sphere_zeros(h, Sphere<Rational>{Rational(0), Rational(1, 4)});
  ASSERT_EQ(z.tag, ZeroTag::Point);
  EXPECT_EQ(*z.point, eq(5) / Rational(2));
  EXPECT_TRUE(h(*z.point).is_zero());
  EXPECT_EQ(classify_sphere_zeros(h, unit_sphere).tag, ZeroTag::Empty);
}

TEST(Zeros, TrichotomyCouplesWithConjugate) {
  Rng rng(41);
  for (int n = 0; n < 200; ++n) {
    auto y = support::random_sphere_point(O, rng);
    SliceFunction<Rational> f(support::vanishing_on(y, int(rng.integer(0, 2)), rng));
    auto s = n % 2 ? sphere_of(y) : Sphere<Rational>{Rational(rng.integer(-4, 4), 4), Rational(rng.integer(1, 9), 4)};
    auto a = classify_sphere_zeros(f, s), b = classify_sphere_zeros(slice_conjugate(f), s);
    EXPECT_EQ(a.tag, b.tag);
    if (a.tag == ZeroTag::Point) EXPECT_TRUE(f(*a.point).is_zero());
  }
}

TEST(Zeros, ProductSphereClosure) {
  Rng rng(42);
  for (int n = 0; n < 100; ++n) {
    auto y = support::random_sphere_point(O, rng);
    SliceFunction<Rational> f(support::vanishing_on(y, 1, rng));
    SliceFunction<Rational> g(random_polynomial<Rational>(O, 2, rng));
    for (const auto& s : {sphere_of(y), Sphere<Rational>{Rational(1, 3), Rational(2)}}) {
      bool either = classify_sphere_zeros(f, s).tag != ZeroTag::Empty || classify_sphere_zeros(g, s).tag != ZeroTag::Empty;
      EXPECT_EQ(either, classify_sphere_zeros(slice_product(f, g), s).tag != ZeroTag::Empty);
      EXPECT_EQ(either, classify_sphere_zeros(slice_product(g, f), s).tag != ZeroTag::Empty);
    }
  }
}

TEST(Zeros, CamshaftWholeCase) {
  auto r = camshaft_zero(SliceFunction<Rational>(delta_poly(eq(1))), binomial(eq(2)), unit_sphere);
  EXPECT_EQ(r.case_id, 1);
  EXPECT_EQ(r.zero.tag, ZeroTag::Whole);
}

TEST(Zeros, CamshaftBothPoints) {
  auto f = binomial(eq(1)), g = binomial(eq(2));
  auto r = camshaft_zero(f, g, unit_sphere);
  EXPECT_EQ(r.case_id, 4);
  ASSERT_EQ(r.zero.tag, ZeroTag::Point);
  EXPECT_EQ(*r.zero.point, eq(1));
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(slice_product(f, g)(eq(1)).is_zero());
}

TEST(Zeros, CamshaftPointMatchesSphereSearch) {
  auto f = binomial(eq(1)), g = binomial(rq(1) + eq(2));
  auto r = camshaft_zero(f, g, unit_sphere);
  EXPECT_EQ(r.case_id, 2);
  ASSERT_EQ(r.zero.tag, ZeroTag::Point);
  auto fg = *slice_product(f, g).as<StarPolynomial<Rational>>();
  EXPECT_TRUE(fg(*r.zero.point).is_zero());
  auto w = support::argmin_on_sphere(support::direct(polynomial_cast<double>(fg)), 0.0, 1.0, O, 7);
  EXPECT_LT(oracle::distance(w, element_cast<double>(*r.zero.point)), 1e-6);
}

TEST(Zeros, CaseFourAgreesWithOtherFormulas) {
  Rng rng(43);
  int seen = 0;
  for (int n = 0; n < 50; ++n) {
    auto y = support::random_sphere_point(O, rng);
    auto z = Element<Rational>::real(O, y[0]) + random_unit<Rational>(O, rng) * scalar_sqrt(norm(im(y)));
    SliceFunction<Rational> f(support::vanishing_on(y, 1, rng)), g(support::vanishing_on(z, 1, rng));
    auto r = camshaft_zero(f, g, sphere_of(y));
    if (r.case_id != 4 || r.zero.tag != ZeroTag::Point) continue;
    ++seen;
    auto [w2, w3] = camshaft_alternatives(f, g, sphere_of(y));
    EXPECT_EQ(w2, *r.zero.point);
    EXPECT_EQ(w3, *r.zero.point);
    EXPECT_TRUE(slice_product(f, g)(*r.zero.point).is_zero());
  }
  EXPECT_GT(seen, 10);
}

TEST(Zeros, CaseMismatchIsReported) {
  try {
    camshaft_zero(binomial(eq(1)), binomial(eq(2)), unit_sphere, ZeroTag::Empty);
    FAIL();
  } catch (const SliceError& e) {
    EXPECT_EQ(e.code(), ErrorCode::CaseMismatch);
  }
}

TEST(Zeros, RealZerosAreAbsorbed) {
  Rng rng(44);
  for (int n = 0; n < 20; ++n) {
    auto r = rq(rng.integer(-3, 3));
    SliceFunction<Rational> f(support::vanishing_on(r, 1, rng)), g(random_polynomial<Rational>(O, 2, rng));
    EXPECT_TRUE(slice_product(f, g)(r).is_zero());
    EXPECT_TRUE(slice_product(g, f)(r).is_zero());
  }
}

TEST(Zeros, NormalZeroOnSphere) {
  EXPECT_TRUE(normal_zero_on_sphere(binomial(eq(1)), unit_sphere));
  EXPECT_FALSE(normal_zero_on_sphere(binomial(eq(1)), Sphere<Rational>{Rational(1), Rational(1)}));
  auto u = unit_switch_function(eq(1));
  EXPECT_TRUE(normal_zero_on_sphere(u, Sphere<Rational>{Rational(2), Rational(9)}));
}

TEST(Zeros, ScanOfProduct) {
  auto fg = slice_product(binomial(eq(1)), binomial(eq(2)));
  auto hits = zero_scan(fg, Rect{-2, 2, 0, 2});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_NEAR(hits[0].alpha, 0.0, 1e-9);
  EXPECT_NEAR(hits[0].beta, 1.0, 1e-9);
  EXPECT_EQ(hits[0].tag, ZeroTag::Point);
  EXPECT_LT(oracle::distance(*hits[0].point, Element<double>::basis(O, 1)), 1e-9);
}

TEST(Zeros, ScanOfDeltaAndConstant) {
  auto hits = zero_scan(SliceFunction<Rational>(delta_poly(eq(1))), Rect{-2, 2, 0, 2});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_EQ(hits[0].tag, ZeroTag::Whole);
  EXPECT_TRUE(zero_scan(SliceFunction<Rational>(StarPolynomial<Rational>::constant(rq(1))), Rect{-2, 2, 0, 2}).empty());
}

TEST(Zeros, ScanOfSampledFunction) {
  SliceFunction<double> f(StarPolynomial<double>(O, {-Element<double>::basis(O, 2), Element<double>::real(O, 1.0)}));
  SliceFunction<double> g(sample_stem(f, Rect{-2, 2, 0, 2}, 81, 41));
  auto hits = zero_scan(g, Rect{-2, 2, 0, 2});
  ASSERT_FALSE(hits.empty());
  EXPECT_NEAR(hits[0].beta, 1.0, 1e-3);
}
