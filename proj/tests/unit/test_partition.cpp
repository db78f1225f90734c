#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ultrajet/error.hpp"
#include "ultrajet/partition.hpp"
#include "ultrajet/seq_calculus.hpp"
#include "ultrajet/whitney_cover.hpp"

using namespace ultrajet;

namespace {

WhitneyCover manual(std::vector<CoverInterval> iv) {
  WhitneyCover c;
  c.intervals = std::move(iv);
  c.r_cov = 10.0;
  c.d_lo = 0.0;
  return c;
}

// Fourth-order central difference.
double fd(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

TEST(Reciprocal, MatchesClosedForm) {
  // S(x) = 1 + x at x = 1: (1/S)^(n) = (-1)^n n! / 2^(n+1).
  auto R = reciprocal_derivs({2.0, 1.0, 0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(R[0], 0.5);
  EXPECT_DOUBLE_EQ(R[1], -0.25);
  EXPECT_DOUBLE_EQ(R[2], 0.25);
  EXPECT_DOUBLE_EQ(R[3], -0.375);
  EXPECT_DOUBLE_EQ(R[4], 0.75);
}

TEST(Partition, SingleIntervalIsOneOnCore) {
  Partition P(manual({{0.5, 1.0, 0}}), 4);
  for (double x : {0.0, 0.2, 0.5, 0.9, 0.999}) EXPECT_DOUBLE_EQ(P.phi(0, x), 1.0);
  EXPECT_EQ(P.phi(0, 1.2), 0.0);
}

TEST(Partition, OverlapSumsToOne) {
  Partition P(manual({{0.5, 1.0, 0}, {1.25, 0.5, 1}}), 6);
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.9 + 0.2 * i / 200.0;
    double s = 0.0;
    for (const auto& t : P.phi_derivs(x, 3)) s += t.derivs[0];
    EXPECT_NEAR(s, 1.0, 1e-12) << x;
    double ds = 0.0;
    for (const auto& t : P.phi_derivs(x, 3)) ds += t.derivs[2];
    EXPECT_NEAR(ds, 0.0, 1e-6) << x;
  }
}

TEST(Partition, SupportInsideExpandedInterval) {
  auto E = CompactSet1D::point(0.0);
  Partition P(build_cover(E, 0.5), 5);
  const auto& cover = P.cover();
  for (std::size_t i = 0; i < cover.intervals.size(); i += 7) {
    EXPECT_EQ(P.psi(i, cover.star_hi(i)), 0.0);
    EXPECT_EQ(P.psi(i, cover.star_lo(i) - 1e-15), 0.0);
    EXPECT_GT(P.psi(i, cover.intervals[i].center), 0.0);
  }
}

TEST(Partition, UncoveredPointThrows) {
  Partition P(manual({{0.5, 1.0, 0}}), 2);
  try {
    P.phi_derivs(3.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UncoveredPoint);
  }
}

TEST(Partition, LeibnizMatchesFiniteDifferences) {
  auto E = CompactSet1D({{-1.0, 0.0}, {1.0, 1.0}});
  Partition P(build_cover(E, 0.5), 8);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.05, 0.45);
  for (int n = 0; n < 10; ++n) {
    const double x = U(rng);
    const auto terms = P.phi_derivs(x, 4);
    const double ell = P.cover().intervals[terms.front().index].side;
    for (const auto& t : terms)
      for (std::size_t b = 1; b <= 4; ++b) {
        auto g = [&](double y) { return P.phi(t.index, y, b - 1); };
        const double num = fd(g, x, 1e-5 * ell);
        const double scale = std::max(std::abs(t.derivs[b]), std::pow(1.0 / ell, static_cast<double>(b)));
        EXPECT_NEAR(t.derivs[b], num, 1e-6 * scale) << "x=" << x << " beta=" << b;
      }
  }
}

TEST(Partition, DerivativeBoundFit) {
  auto E = CompactSet1D::point(0.0);
  Partition P(build_cover(E, 0.5), 8);
  // Gevrey-2 style rows: W_k = (k!)^2, s_k = k!.
  auto W = factorial_power(2.0, 40);
  auto s = factorial_power(1.0, 200);
  std::vector<double> xs;
  for (int j = 2; j <= 30; ++j) xs.push_back(std::ldexp(1.0, -j) * 1.37);
  auto rep = check_derivative_bound(P, E, W, s, 8, xs);
  EXPECT_TRUE(rep.per_fold_bound_holds);
  ASSERT_EQ(rep.m_per_beta.size(), 9u);
  EXPECT_LE(rep.m_per_beta[0], 1.0 + 1e-12);
  EXPECT_TRUE(std::isfinite(rep.M));
  EXPECT_NE(rep.trend, Trend::Diverging);
}
