#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ultrajet/error.hpp"
#include "ultrajet/ultrajet.hpp"
#include "ultrajet/weight_function.hpp"
#include "ultrajet/weight_matrix.hpp"

using namespace ultrajet;

namespace {

UltraJet exp_jet(std::size_t alpha_max) {
  CompactSet1D E({{0.0, 0.0}, {0.5, 0.5}});
  std::vector<double> v0(alpha_max + 1, 1.0), v1(alpha_max + 1, std::exp(0.5));
  return UltraJet(E, {0.0, 0.5}, {v0, v1});
}

// Matrix with v^xi_k = xi^k k! (divided), V^xi_k = xi^k (k!)^2.
WeightMatrix gevrey_two(std::size_t K) {
  std::vector<std::pair<double, WeightSequence>> rows;
  for (double xi : {1.0, 2.0, 4.0}) {
    std::vector<double> lm(K + 1);
    for (std::size_t k = 0; k <= K; ++k) lm[k] = k * std::log(xi) + std::lgamma(k + 1.0);
    rows.emplace_back(xi, WeightSequence::from_log_values(lm));
  }
  return WeightMatrix::from_divided(std::move(rows));
}

}  // namespace

TEST(UltraJet, RejectsPointsOutsideE) {
  EXPECT_THROW(UltraJet(CompactSet1D::point(0.0), {0.5}, {{1.0}}), Error);
  EXPECT_THROW(UltraJet(CompactSet1D::point(0.0), {0.0}, {{1.0, std::nan("")}}), Error);
}

TEST(Taylor, LinearExample) {
  UltraJet F(CompactSet1D::point(0.0), {0.0}, {{1.0, 2.0, 5.0}});
  auto T = taylor_poly(F, 0.0, 1);
  EXPECT_DOUBLE_EQ(T(0.5), 2.0);
  auto T0 = taylor_poly(F, 0.0, 0);
  EXPECT_DOUBLE_EQ(T0(3.0), 1.0);
  try {
    taylor_poly(F, 0.0, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderOverflow);
  }
}

TEST(Taylor, ReproducesJetAtBase) {
  auto V = gevrey_two(40);
  auto F = gevrey_jet(CompactSet1D::point(0.0), {0.0}, V.row(1.0).divided, 8);
  auto T = taylor_poly(F, 0.0, 8);
  for (std::size_t a = 0; a <= 8; ++a) EXPECT_NEAR(T.derivative_at(0.0, a), F.value(0.0, a), 1e-14 * F.value(0.0, a));
}

TEST(Remainder, VanishesOnPolynomialJets) {
  Polynomial P(0.0, {1.0, -2.0, 0.5, 3.0});
  CompactSet1D E({{0.0, 0.0}, {0.3, 0.3}, {1.0, 1.0}});
  auto F = polynomial_jet(E, {0.0, 0.3, 1.0}, P, 6);
  for (std::size_t k = 3; k <= 6; ++k)
    for (std::size_t a = 0; a <= k; ++a) EXPECT_NEAR(remainder(F, 0.0, 1.0, k, a), 0.0, 1e-12);
  EXPECT_EQ(remainder(F, 0.3, 0.3, 2, 1), 0.0);
}

TEST(Remainder, MatchesExpTaylorRemainder) {
  auto F = exp_jet(12);
  for (std::size_t k = 0; k <= 10; ++k) {
    double partial = 0.0, term = 1.0;
    for (std::size_t j = 0; j <= k; ++j) {
      if (j > 0) term *= 0.5 / static_cast<double>(j);
      partial += term;
    }
    EXPECT_NEAR(remainder(F, 0.0, 0.5, k, 0), std::exp(0.5) - partial, 1e-12);
  }
}

TEST(Remainder, IsLinear) {
  auto F = exp_jet(6);
  auto G = F.scaled(3.0);
  auto H = F.plus(G);
  EXPECT_NEAR(remainder(H, 0.0, 0.5, 3, 1), 4.0 * remainder(F, 0.0, 0.5, 3, 1), 1e-14);
}

TEST(Certify, ZeroJet) {
  UltraJet F(CompactSet1D::point(0.0), {0.0}, {std::vector<double>(31, 0.0)});
  auto c = certify(F, gevrey_two(40));
  EXPECT_EQ(c.C, 1.0);
  EXPECT_EQ(c.rho, 1.0);
}

TEST(Certify, GevreyJetPassesWithUnitConstants) {
  auto V = gevrey_two(40);
  auto F = gevrey_jet(CompactSet1D::point(0.0), {0.0}, V.row(2.0).divided, 30);
  auto c = certify(F, V);
  // The smallest row absorbs 2^k into rho.
  EXPECT_EQ(c.xi, 1.0);
  EXPECT_NEAR(c.rho, 2.0, 1e-12);
  auto c2 = certify(F, WeightMatrix::from_divided({{2.0, V.row(2.0).divided}}));
  EXPECT_NEAR(c2.C, 1.0, 1e-12);
  EXPECT_EQ(c2.rho, 1.0);
}

TEST(Certify, ScalingMultipliesC) {
  auto V = gevrey_two(40);
  auto F = gevrey_jet(CompactSet1D::point(0.0), {0.0}, V.row(1.0).divided, 30, 1.0, 3.0);
  auto a = certify(F, V);
  auto b = certify(F.scaled(5.0), V);
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.xi, b.xi);
  EXPECT_NEAR(b.C / a.C, 5.0, 1e-9);
}

TEST(Certify, TooFastJetIsNotInClass) {
  std::vector<double> v(41);
  for (std::size_t k = 0; k <= 40; ++k) v[k] = std::exp(std::min(700.0, 3.0 * std::lgamma(k + 1.0)));
  UltraJet F(CompactSet1D::point(0.0), {0.0}, {v});
  try {
    certify(F, gevrey_two(40));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotInClass);
  }
}

TEST(Certify, TwoPointExpJet) {
  auto F = exp_jet(20);
  auto c = certify(F, gevrey_two(40));
  EXPECT_GT(c.remainder_checks, 0u);
  EXPECT_LE(c.ratio_growth, 1.0 + 1e-12);
  EXPECT_LE(c.ratio_remainder, 1.0 + 1e-12);
}
