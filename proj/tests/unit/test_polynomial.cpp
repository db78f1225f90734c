#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ultrajet/error.hpp"
#include "ultrajet/partition.hpp"
#include "ultrajet/piecewise_polynomial.hpp"
#include "ultrajet/polynomial.hpp"

using namespace ultrajet;

TEST(Polynomial, EvaluateAndDifferentiate) {
  Polynomial p(1.0, {1.0, 2.0, 3.0});  // 1 + 2u + 3u^2, u = y - 1
  EXPECT_DOUBLE_EQ(p(2.0), 6.0);
  EXPECT_DOUBLE_EQ(p.derivative_at(2.0, 1), 8.0);
  EXPECT_DOUBLE_EQ(p.derivative_at(2.0, 2), 6.0);
  EXPECT_DOUBLE_EQ(p.derivative_at(2.0, 3), 0.0);
  EXPECT_DOUBLE_EQ(p.derivative(1)(2.0), 8.0);
}

TEST(Polynomial, RecenterKeepsValues) {
  Polynomial p(0.0, {1.0, -3.0, 0.5, 2.0, -1.0});
  auto q = p.recentered(0.75);
  for (double y : {-1.0, 0.0, 0.3, 1.7})
    for (std::size_t a = 0; a <= 4; ++a) EXPECT_NEAR(q.derivative_at(y, a), p.derivative_at(y, a), 1e-12);
}

TEST(Polynomial, SubtractionAndValuation) {
  Polynomial a(0.5, {1.0, 2.0, 3.0, 4.0});
  Polynomial b(0.5, {1.0, 2.0});
  auto d = a - b;
  EXPECT_EQ(d.valuation(), 2u);
  EXPECT_TRUE((a - a).is_zero());
}

TEST(Polynomial, RootsAndSupremum) {
  // (y - 0.2)(y - 0.5)(y - 0.9) expanded at 0.
  Polynomial p(0.0, {-0.09, 0.73, -1.6, 1.0});
  auto r = real_roots(p, 0.0, 1.0);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r[0], 0.2, 1e-12);
  EXPECT_NEAR(r[1], 0.5, 1e-12);
  EXPECT_NEAR(r[2], 0.9, 1e-12);
  // |p| on [0, 1] peaks at y = 0 (0.09) versus interior extrema (~0.0253, ~0.0365).
  EXPECT_NEAR(sup_abs(p, 0.0, 1.0), 0.09, 1e-12);
}

TEST(Spline, IndicatorIntegralAndOutside) {
  auto f = PiecewisePolynomial::indicator(-1.0, 2.0);
  EXPECT_DOUBLE_EQ(f.integral(), 3.0);
  EXPECT_EQ(f(-1.5), 0.0);
  EXPECT_EQ(f(0.0), 1.0);
  EXPECT_EQ(f(2.0), 0.0);
}

TEST(Spline, BoxConvolutionGivesHat) {
  // Indicator of width 1 convolved with a width-1 box: the hat on [-1, 1] with apex 1.
  auto hat = PiecewisePolynomial::indicator(-0.5, 0.5).box_convolve(1.0);
  EXPECT_NEAR(hat(0.0), 1.0, 1e-15);
  EXPECT_NEAR(hat(0.5), 0.5, 1e-15);
  EXPECT_NEAR(hat(-0.25), 0.75, 1e-15);
  EXPECT_NEAR(hat.integral(), 1.0, 1e-15);
  EXPECT_NEAR(hat.sup_norm(1), 1.0, 1e-15);
}

TEST(Spline, BumpIsOneOnCoreWithPerFoldBounds) {
  BumpSpec spec{-0.5, 0.5, 1.0 / 16.0, 8};
  auto b = build_bump(spec);
  EXPECT_EQ(b.degree(), 8u);
  for (double x : {-0.5, -0.25, 0.0, 0.3, 0.4999}) EXPECT_NEAR(b(x), 1.0, 1e-12);
  EXPECT_NEAR(b.support_lo(), -0.5625, 1e-15);
  EXPECT_NEAR(b.support_hi(), 0.5625, 1e-15);
  // Integral: indicator mass is preserved by unit-mass boxes.
  EXPECT_NEAR(b.integral(), 1.0 + 1.0 / 16.0, 1e-12);
  const double h = spec.fold_width();
  for (std::size_t beta = 0; beta <= 8; ++beta)
    EXPECT_LE(b.sup_norm(beta), std::pow(2.0 / h, static_cast<double>(beta)) * (1.0 + 1e-12)) << beta;
  EXPECT_LE(b.sup_norm(0), 1.0 + 1e-12);
  EXPECT_GE(b(0.53), 0.0);
}

TEST(Spline, SingleFoldSlopeIsInverseWidth) {
  BumpSpec spec{0.0, 1.0, 0.25, 1};
  auto b = build_bump(spec);
  EXPECT_NEAR(b.sup_norm(1), 1.0 / spec.fold_width(), 1e-12);
}

TEST(Spline, DegenerateMargin) {
  try {
    build_bump(BumpSpec{0.0, 1.0, 0.0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateSupport);
  }
}

TEST(Spline, AffineScalesDerivatives) {
  auto hat = PiecewisePolynomial::indicator(-0.5, 0.5).box_convolve(1.0);
  auto g = hat.affine(3.0, 0.5);  // g(y) = hat((y - 3) / 0.5)
  EXPECT_NEAR(g(3.25), hat(0.5), 1e-15);
  EXPECT_NEAR(g(3.25, 1), hat(0.5, 1) / 0.5, 1e-12);
}
