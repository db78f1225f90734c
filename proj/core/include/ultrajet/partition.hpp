#pragma once

#include <cstddef>
#include <vector>

#include "ultrajet/piecewise_polynomial.hpp"
#include "ultrajet/seq_calculus.hpp"
#include "ultrajet/trend.hpp"
#include "ultrajet/whitney_cover.hpp"

namespace ultrajet {

struct BumpSpec {
  double core_lo = -0.5;
  double core_hi = 0.5;
  /// Support is [core_lo - margin, core_hi + margin].
  double margin = 1.0 / 16.0;
  /// Number of box folds; the bump is a degree-p spline of class C^{p-1}.
  std::size_t p = 1;
  double fold_width() const noexcept { return margin / static_cast<double>(p); }
};

/// Indicator of the core inflated by margin/2, convolved p times with boxes of
/// width margin/p. Equals 1 on the core; throws DegenerateSupport if margin <= 0.
PiecewisePolynomial build_bump(const BumpSpec& spec);

/// Derivative values of one partition function at a point, orders 0..beta_max.
struct LocalTerm {
  std::size_t index = 0;
  std::vector<double> derivs;
};

/// phi_i = psi_i / sum_j psi_j with psi_i the reference bump moved onto Q_i
/// (core Q_i, support Q_i* for the 9/8 expansion).
class Partition {
 public:
  Partition(WhitneyCover cover, std::size_t p);

  const WhitneyCover& cover() const noexcept { return cover_; }
  std::size_t p() const noexcept { return p_; }
  const PiecewisePolynomial& reference() const noexcept { return ref_; }

  /// Intervals whose bump support contains x.
  std::vector<std::size_t> active(double x) const;

  double psi(std::size_t i, double x, std::size_t beta = 0) const;
  /// Derivatives of sum_j psi_j at x, orders 0..beta_max.
  std::vector<double> sum_derivs(double x, std::size_t beta_max) const;

  /// phi_i^(beta)(x) for every active i. Throws UncoveredPoint when no bump
  /// is active at x or their sum vanishes.
  std::vector<LocalTerm> phi_derivs(double x, std::size_t beta_max) const;
  double phi(std::size_t i, double x, std::size_t beta = 0) const;

 private:
  WhitneyCover cover_;
  std::size_t p_;
  PiecewisePolynomial ref_;
};

/// Derivatives of 1/S from derivatives of S (S[0] != 0).
std::vector<double> reciprocal_derivs(const std::vector<double>& S);

struct DerivativeBoundReport {
  std::size_t beta_max = 0;
  /// Fitted constant per order: sup_x |phi_i^(beta)(x)| / (W_beta Pi(p, x)).
  std::vector<double> m_per_beta;
  double M = 0.0;
  /// Envelope parameter B from the fit grid giving the smallest M.
  double B = 1.0;
  Trend trend = Trend::Inconclusive;
  /// Exact sup-norms of psi_ref^(beta) against the per-fold bound (2/h)^beta.
  std::vector<double> reference_sup;
  bool per_fold_bound_holds = true;
};

/// W is a full row (W_beta), s_eta a divided log-convex row for the envelope
/// Pi(p, x) = (e / h_s(b_1 p d(x) / (9 A_2 B)))^{A_1 B / p}.
DerivativeBoundReport check_derivative_bound(const Partition& part, const CompactSet1D& E,
                                             const WeightSequence& W, const WeightSequence& s_eta,
                                             std::size_t beta_max, const std::vector<double>& samples,
                                             const ExtensionConstants& k = {});

}  // namespace ultrajet
