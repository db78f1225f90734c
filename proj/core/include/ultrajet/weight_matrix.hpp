#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ultrajet/seq_calculus.hpp"
#include "ultrajet/trend.hpp"

namespace ultrajet {

class WeightFunction;

/// One row M^xi of a weight matrix in both views: M_k and m_k = M_k / k!.
struct MatrixRow {
  double xi = 0.0;
  WeightSequence full;
  WeightSequence divided;
};

/// A finite, totally ordered family of weight sequences indexed by xi > 0.
class WeightMatrix {
 public:
  static WeightMatrix from_full(std::vector<std::pair<double, WeightSequence>> rows);
  static WeightMatrix from_divided(std::vector<std::pair<double, WeightSequence>> rows);

  const std::vector<MatrixRow>& rows() const noexcept { return rows_; }
  std::vector<double> xi_grid() const;
  std::size_t max_index() const noexcept { return rows_.front().full.max_index(); }

  /// Row lookup with relative tolerance 1e-12 on xi; nullptr if absent.
  const MatrixRow* find(double xi) const noexcept;
  /// Throws MissingRow if absent.
  const MatrixRow& row(double xi) const;

  /// sup_k (k!/M_k)^{1/k} over all rows: k! <= M_k holds up to this factor^k.
  double factorial_root_bound() const noexcept { return factorial_root_bound_; }

 private:
  explicit WeightMatrix(std::vector<MatrixRow> rows);

  std::vector<MatrixRow> rows_;
  double factorial_root_bound_ = 1.0;
};

/// Default parameter grid {1/4, 1/2, 1, 2, 4, 8}.
std::vector<double> default_xi_grid();

/// Rows S^xi_k = exp(phi*(xi k) / xi), k <= K.
WeightMatrix associated_matrix(const WeightFunction& w, const std::vector<double>& xi_grid, std::size_t K);

struct SandwichFit {
  double xi = 0.0;
  /// Row pairing factor; 0 when no pairing was available in the grid.
  double B = 0.0;
  /// A^{-1} s^{xi/B} <= sbar^xi.
  double A = 0.0;
  /// s^xi <= C^k sbar^{B xi}.
  double C = 0.0;
  Trend a_trend = Trend::Inconclusive;
  Trend c_trend = Trend::Inconclusive;
  bool verified = false;
};

struct Regularization {
  WeightMatrix matrix;
  std::vector<SandwichFit> sandwich;
};

/// Replaces each divided row by its log-convex minorant (the rows become
/// strongly log-convex) and fits the two-sided sandwich against the input.
/// Throws SandwichUnverifiable if no row admits a bounded fit.
Regularization strong_regularization(const WeightMatrix& S);

/// Fit of the sandwich for one xi and pairing factor B.
SandwichFit fit_sandwich(const WeightMatrix& S, const WeightMatrix& Sbar, double xi, double B);

/// v^xi_k = min_j sbar^{2xi}_j sbar^{2xi}_{k-j}, built from duplicated quotients.
MatrixRow interleave_row(const WeightMatrix& Sbar, double xi);

/// All rows xi whose partner 2 xi is stored.
WeightMatrix interleave_matrix(const WeightMatrix& Sbar);

struct DoublingReport {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<double> first_violation;
};

/// 2 Gamma_{sbar^{2xi}}(t) == Gamma_{v^xi}(t) at every grid t.
DoublingReport gamma_doubling_check(const WeightMatrix& Sbar, const WeightMatrix& V, double xi,
                                    const std::vector<double>& t_grid);

struct SandwichH {
  double H = 1.0;
  /// Constant for v^xi <= H^k sbar^{2xi}; 1 by the j = 0 split.
  double right_H = 1.0;
  std::size_t K = 0;
  /// H computed on [0, K] exceeds H on [0, K/2] by more than 2%.
  bool growing = false;
};

/// Smallest H >= 1 with sbar^xi_k <= H^k v^xi_k <= H^k sbar^{2xi}_k for k <= K.
SandwichH sandwich_H(const WeightMatrix& Sbar, const WeightMatrix& V, double xi, std::size_t K);

struct SuffixMinResult {
  /// nutilde_k / k for k >= 1; entry 0 is 1.
  std::vector<double> ratios;
  /// nutilde_k, with nutilde_0 = 1.
  std::vector<double> values;
};

/// nutilde_k / k = min_{l >= k} nu_l / l on the stored range. Throws
/// HypothesisViolated unless mu_j / j <= C nu_k / k for 1 <= j <= k.
SuffixMinResult suffix_min_regularize(const std::vector<double>& mu, const std::vector<double>& nu, double C);

enum class Verdict { Yes, No, Undecidable };
const char* to_string(Verdict v) noexcept;

/// Outcome of an "exists a partner row" search for one row.
struct QuantifierWitness {
  double xi = 0.0;
  std::optional<double> partner_xi;
  double constant = 0.0;
  Trend trend = Trend::Inconclusive;
};

struct QuantifiedCondition {
  Verdict verdict = Verdict::Undecidable;
  std::vector<QuantifierWitness> witnesses;
};

struct GoodnessReport {
  QuantifiedCondition r_good;
  QuantifiedCondition b_good;
  QuantifiedCondition condition_d;
  QuantifiedCondition condition_d_beurling;
  QuantifiedCondition moderate_growth;
  QuantifiedCondition moderate_growth_beurling;
  std::size_t K = 0;
};

GoodnessReport goodness(const WeightMatrix& M, std::size_t K);

struct InclusionReport {
  QuantifiedCondition roumieu;
  QuantifiedCondition beurling;
};

/// (M_k / N_k)^{1/k} bounded, with Roumieu (for all M exists N) and Beurling
/// (for all N exists M) quantifiers.
InclusionReport roumieu_inclusion(const WeightMatrix& M, const WeightMatrix& N);

}  // namespace ultrajet
