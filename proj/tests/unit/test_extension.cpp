#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ultrajet/error.hpp"
#include "ultrajet/extension.hpp"
#include "ultrajet/weight_function.hpp"

using namespace ultrajet;

namespace {

struct Fixture {
  WeightMatrix Sbar;
  WeightMatrix V;
  WeightMatrix W;
  double H;
};

// sigma = 2 t^{1/2} (the kappa transform of t^{1/2}), omega = t^{1/2}, both normalized.
const Fixture& fixture() {
  static const Fixture fx = [] {
    const std::vector<double> grid{0.5, 1.0, 2.0, 4.0, 8.0};
    auto S = associated_matrix(WeightFunction::power(0.5, 2.0, true), grid, 160);
    auto reg = strong_regularization(S);
    auto V = interleave_matrix(reg.matrix);
    auto W = associated_matrix(WeightFunction::power(0.5, 1.0, true), {2.0}, 40);
    const double H = sandwich_H(reg.matrix, V, 2.0, 80).H;
    return Fixture{reg.matrix, V, W, H};
  }();
  return fx;
}

ExtensionRows rows() { return extension_rows(fixture().Sbar, fixture().V, fixture().W, 1.0, 2.0); }

ExtensionPlan plan(double rho = 1.0, double L = 16.0) {
  ExtensionPlan p;
  p.L = L;
  p.p_fold = 10;
  p.xi = 1.0;
  p.C = 1.0;
  p.rho = rho;
  p.H = fixture().H;
  p.r_cov = 0.25;
  return p;
}

UltraJet gevrey(std::size_t alpha_max, double scale = 1.0) {
  return gevrey_jet(CompactSet1D::point(0.0), {0.0}, fixture().V.row(1.0).divided, alpha_max, 1.0, scale);
}

}  // namespace

TEST(LocalDegree, SquaredQuotientExamples) {
  auto s = factorial_power(2.0, 60);
  EXPECT_EQ(local_degree(s, 1.0, 0.25), 1u);
  EXPECT_EQ(local_degree(s, 1.0, 0.01), 17u);
  EXPECT_EQ(local_degree(s, 1.0, 2.0), 0u);
  auto c = local_degree_capped(s, 1.0, 0.01, 9);
  EXPECT_EQ(c.p, 9u);
  EXPECT_TRUE(c.capped);
}

TEST(Assemble, RejectsInvalidPlan) {
  try {
    assemble(gevrey(20), rows(), plan(2.0, 16.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PlanInvalid);
  }
}

TEST(Assemble, NeedsJetAtComponentEndpoints) {
  CompactSet1D E({{-1.0, 0.0}});
  UltraJet F(E, {0.0}, {std::vector<double>(11, 0.0)});
  EXPECT_THROW(assemble(F, rows(), plan()), Error);
}

TEST(Extension, ZeroJetGivesZero) {
  UltraJet F(CompactSet1D::point(0.0), {0.0}, {std::vector<double>(31, 0.0)});
  auto f = assemble(F, rows(), plan());
  for (double x : {0.001, -0.004, 0.01})
    for (std::size_t a = 0; a <= 6; ++a) EXPECT_EQ(f.eval_derivative(x, a), 0.0);
  auto rep = verify_bounds(f, region_samples(f, 50, 1), 8);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Extension, PolynomialJetIsReproduced) {
  Polynomial P(0.0, {2.0, -3.0});
  auto F = polynomial_jet(CompactSet1D::point(0.0), {0.0}, P, 40);
  auto f = assemble(F, rows(), plan());
  for (double x : region_samples(f, 200, 5)) {
    EXPECT_NEAR(f.eval_derivative(x, 0), P(x), 1e-12);
    EXPECT_NEAR(f.eval_derivative(x, 1), -3.0, 1e-9);
    EXPECT_NEAR(f.eval_derivative(x, 2), 0.0, 1e-6);
  }
}

TEST(Extension, ConstantJetHasVanishingDerivatives) {
  auto F = polynomial_jet(CompactSet1D::point(0.0), {0.0}, Polynomial(0.0, {4.0}), 30);
  auto f = assemble(F, rows(), plan());
  for (double x : {0.003, -0.0071})
    for (std::size_t a = 1; a <= 6; ++a) EXPECT_NEAR(f.eval_derivative(x, a), 0.0, 1e-9);
}

TEST(Extension, JetAgreementOnE) {
  auto F = gevrey(60);
  auto f = assemble(F, rows(), plan());
  for (std::size_t a = 0; a <= 8; ++a) EXPECT_EQ(f.eval_derivative(0.0, a), F.value(0.0, a));
}

TEST(Extension, LocalityAtMostThreeTerms) {
  auto f = assemble(gevrey(60), rows(), plan());
  for (double x : region_samples(f, 300, 9)) EXPECT_LE(f.terms(x, 0).size(), 3u);
}

TEST(Extension, OutsideRegionThrows) {
  auto f = assemble(gevrey(60), rows(), plan());
  try {
    f.eval_derivative(1.0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutsideRegion);
  }
}

TEST(Extension, DerivativesMatchFiniteDifferences) {
  auto f = assemble(gevrey(60), rows(), plan());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.2 * f.d_max(), 0.9 * f.d_max());
  for (int n = 0; n < 10; ++n) {
    const double x = (n % 2 ? -1.0 : 1.0) * U(rng);
    const double h = 1e-4 * std::abs(x);
    for (std::size_t a = 1; a <= 4; ++a) {
      auto g = [&](double y) { return f.eval_derivative(y, a - 1); };
      const double num = (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
      const double exact = f.eval_derivative(x, a);
      EXPECT_NEAR(exact, num, 1e-6 * std::max(1.0, std::abs(exact))) << "x=" << x << " alpha=" << a;
    }
  }
}

TEST(Extension, IsLinearInTheJet) {
  auto F = gevrey(40);
  auto G = polynomial_jet(CompactSet1D::point(0.0), {0.0}, Polynomial(0.0, {1.0, 2.0, -1.0}), 40);
  auto fF = assemble(F, rows(), plan());
  auto fG = assemble(G, rows(), plan());
  auto fS = assemble(F.plus(G), rows(), plan());
  for (double x : region_samples(fF, 40, 2))
    for (std::size_t a = 0; a <= 3; ++a) {
      const double sum = fF.eval_derivative(x, a) + fG.eval_derivative(x, a);
      EXPECT_NEAR(fS.eval_derivative(x, a), sum, 1e-12 * std::max(1.0, std::abs(sum)));
    }
}

TEST(Extension, TaylorDifferenceValuation) {
  auto f = assemble(gevrey(60), rows(), plan());
  std::size_t seen = 0;
  for (double x : region_samples(f, 300, 4)) {
    const auto loc = f.local(x);
    for (const auto& t : f.terms(x, 0)) {
      if (t.degree == loc.degree.p) {
        EXPECT_TRUE(t.diff_poly.is_zero());
        continue;
      }
      ++seen;
      EXPECT_EQ(t.diff_poly.valuation(), std::min(t.degree, loc.degree.p) + 1);
    }
  }
  EXPECT_GT(seen, 0u);
}

TEST(Bounds, GevreyJetPassesAllChecks) {
  auto f = assemble(gevrey(60), rows(), plan());
  auto rep = verify_bounds(f, region_samples(f, 200, 1), 8);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.pass) << c.name << " ratio=" << c.max_ratio;
  ASSERT_NE(rep.find("global"), nullptr);
  EXPECT_TRUE(std::isfinite(rep.find("global")->fitted));
}

TEST(Bounds, NegativeControlFlagged) {
  ExtensionPlan p = plan(64.0, 16.0);
  AssembleOptions opts;
  opts.allow_invalid_plan = true;
  auto f = assemble(gevrey(40, 64.0), rows(), p, opts);
  EXPECT_FALSE(f.plan_valid());
  auto rep = verify_bounds(f, region_samples(f, 200, 1), 8);
  EXPECT_FALSE(rep.all_pass());
}

TEST(Limits, GevreyErrorsDecrease) {
  auto f = assemble(gevrey(60), rows(), plan());
  auto lim = boundary_limits(f, 0.0, 6, 40);
  EXPECT_FALSE(lim.rows.empty());
  for (std::size_t a = 0; a <= 6; ++a) EXPECT_TRUE(lim.monotone[a]) << a;
  EXPECT_TRUE(lim.converges);
  EXPECT_TRUE(std::isfinite(lim.fitted));
}

TEST(Limits, ConstantJetZeroErrors) {
  auto F = polynomial_jet(CompactSet1D::point(0.0), {0.0}, Polynomial(0.0, {4.0}), 30);
  auto f = assemble(F, rows(), plan());
  auto lim = boundary_limits(f, 0.0, 4, 30);
  for (const auto& r : lim.rows)
    if (r.alpha >= 1) EXPECT_NEAR(r.error, 0.0, 1e-9);
}

TEST(Cutoff, VanishesFarAndKeepsJet) {
  ExtensionPlan p = plan();
  p.cutoff = true;
  auto F = gevrey(60);
  auto f = assemble(F, rows(), p);
  EXPECT_EQ(f.eval_derivative(0.9, 0), 0.0);
  EXPECT_EQ(f.eval_derivative(0.0, 3), F.value(0.0, 3));
  auto g = assemble(F, rows(), plan());
  const double x = f.d_max() / 4.0;
  EXPECT_NEAR(f.eval_derivative(x, 0), g.eval_derivative(x, 0), 1e-12 * std::abs(g.eval_derivative(x, 0)));
}
