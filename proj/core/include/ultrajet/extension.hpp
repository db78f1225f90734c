#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ultrajet/partition.hpp"
#include "ultrajet/polynomial.hpp"
#include "ultrajet/seq_calculus.hpp"
#include "ultrajet/trend.hpp"
#include "ultrajet/ultrajet.hpp"
#include "ultrajet/weight_matrix.hpp"
#include "ultrajet/whitney_cover.hpp"

namespace ultrajet {

/// Rows used by the extension for one chosen xi.
struct ExtensionRows {
  double xi = 0.0;
  /// Divided rows sbar^{2 xi} (Taylor degrees) and sbar^{4 xi} (limit envelope).
  WeightSequence s2;
  WeightSequence s4;
  /// V^xi full and v^xi divided (growth of the jet).
  WeightSequence V;
  WeightSequence v;
  /// Full row W of the target class.
  WeightSequence W;
};

/// Picks sbar^{2xi}, sbar^{4xi} from Sbar, V^xi from V and W^{w_xi} from Wm.
ExtensionRows extension_rows(const WeightMatrix& Sbar, const WeightMatrix& V, const WeightMatrix& Wm, double xi,
                             double w_xi);

struct ExtensionPlan {
  double L = 16.0;
  std::size_t p_fold = 10;
  double xi = 1.0;
  /// Constants of the certified jet.
  double C = 1.0;
  double rho = 1.0;
  /// Thresholds: L must exceed max(C_0, C_1, C_2) * rho.
  double C_0 = 4.0;
  double C_1 = 12.0;
  double C_2 = 8.0;
  /// Sandwich constant from sandwich_H at 2 xi; K_3 = 3 H.
  double H = 1.0;
  double r_cov = 1.0;
  bool cutoff = false;

  double K_3() const noexcept { return 3.0 * H; }
  double K_1() const noexcept { return static_cast<double>(p_fold) / L; }
  double threshold() const noexcept;
  bool valid() const noexcept { return L > threshold(); }
};

struct LocalDegree {
  std::size_t p = 0;
  /// Gamma exceeded the cap, so p is the truncated degree.
  bool capped = false;
};

/// p(x) = max(2 Gamma_{s2}(L d) - 1, 0). Throws GammaAtCutoff past the stored row.
std::size_t local_degree(const WeightSequence& s2, double L, double d);
/// Same, with the degree limited to cap.
LocalDegree local_degree_capped(const WeightSequence& s2, double L, double d, std::size_t cap);

struct AssembleOptions {
  /// Build even when L fails the threshold (negative controls).
  bool allow_invalid_plan = false;
  CoverOptions cover{};
};

class ExtensionFunction {
 public:
  const UltraJet& jet() const noexcept { return F_; }
  const ExtensionPlan& plan() const noexcept { return plan_; }
  const ExtensionRows& rows() const noexcept { return rows_; }
  const Partition& partition() const noexcept { return part_; }
  const CompactSet1D& set() const noexcept { return F_.set(); }
  double d_max() const noexcept { return d_max_; }
  double d_min() const noexcept { return part_.cover().d_lo; }
  bool plan_valid() const noexcept { return plan_.valid(); }
  /// Number of intervals whose Taylor degree hit the jet order.
  std::size_t capped_intervals() const noexcept { return capped_; }

  /// x is in E at a stored base point, or 0 < d(x) < d_max above the finest scale.
  bool in_region(double x) const noexcept;

  /// f^(alpha)(x) for alpha = 0..alpha_max. Throws OutsideRegion.
  std::vector<double> derivatives(double x, std::size_t alpha_max) const;
  double eval_derivative(double x, std::size_t alpha) const;

  /// Local data at x off E: nearest point, degree, T_x.
  struct Local {
    double d = 0.0;
    double nearest = 0.0;
    LocalDegree degree;
    Polynomial T;
  };
  Local local(double x) const;

  struct Term {
    std::size_t index = 0;
    /// phi_i^(beta)(x), beta = 0..alpha_max.
    std::vector<double> phi;
    /// (T_i - T_x)^(beta)(x), beta = 0..alpha_max.
    std::vector<double> diff;
    /// Same difference as a polynomial (for valuation checks).
    Polynomial diff_poly;
    double d_center = 0.0;
    std::size_t degree = 0;
  };
  /// Partition terms at x with the Taylor differences.
  std::vector<Term> terms(double x, std::size_t alpha_max) const;

  /// Derivatives of (f - T_x) without the cut-off.
  std::vector<double> correction(double x, std::size_t alpha_max) const;

 private:
  friend ExtensionFunction assemble(const UltraJet&, const ExtensionRows&, const ExtensionPlan&,
                                    const AssembleOptions&);
  ExtensionFunction(UltraJet F, ExtensionRows rows, ExtensionPlan plan, Partition part);

  std::vector<double> uncut(double x, std::size_t alpha_max) const;
  std::vector<double> cutoff_derivs(double x, std::size_t alpha_max) const;

  UltraJet F_;
  ExtensionRows rows_;
  ExtensionPlan plan_;
  Partition part_;
  double d_max_ = 0.0;
  std::size_t capped_ = 0;
  std::vector<double> centers_nearest_;
  std::vector<double> centers_d_;
  std::vector<LocalDegree> degrees_;
  std::vector<Polynomial> taylor_;
  std::vector<PiecewisePolynomial> cut_;
};

/// Builds cover, partition and per-interval Taylor data. Throws PlanInvalid
/// when L <= max(C_0, C_1, C_2) rho unless allowed, and InvalidArgument when a
/// component endpoint of E carries no jet.
ExtensionFunction assemble(const UltraJet& F, const ExtensionRows& rows, const ExtensionPlan& plan,
                           const AssembleOptions& opts = {});

/// Dyadic points x = e +- 2^-j next to every component endpoint e (inside the
/// region) plus `uniform` seeded random points of the region.
std::vector<double> region_samples(const ExtensionFunction& f, std::size_t uniform, std::uint64_t seed,
                                   int j_max = 40);

struct BoundCheck {
  std::string name;
  std::size_t evaluated = 0;
  /// max lhs/rhs over samples, with the fitted constant when one is fitted.
  double max_ratio = 0.0;
  /// Fitted constant (M_1 or M); 0 if the bound has none.
  double fitted = 0.0;
  /// Per-order max ratio (or per-order fitted constant).
  std::vector<double> per_alpha;
  Trend alpha_trend = Trend::Inconclusive;
  Trend d_trend = Trend::Inconclusive;
  /// Sample x and order of the largest ratio.
  std::optional<std::pair<double, std::size_t>> worst;
  /// Right sides that used an h value truncated at the stored row end.
  std::size_t rhs_at_cutoff = 0;
  /// max_ratio <= 1 with the plan constants (meaningful for unfitted bounds).
  bool within_constant = false;
  bool pass = false;
};

struct BoundReport {
  std::vector<BoundCheck> checks;
  std::size_t alpha_max = 0;
  std::size_t samples = 0;
  bool plan_valid = true;
  std::size_t capped_intervals = 0;
  bool all_pass() const noexcept;
  const BoundCheck* find(const std::string& name) const noexcept;
};

/// Both sides of the Taylor growth, Taylor approximation, the two Taylor
/// difference bounds, the correction bound and the global bound at every sample.
BoundReport verify_bounds(const ExtensionFunction& f, const std::vector<double>& samples, std::size_t alpha_max);

struct LimitRow {
  int j = 0;
  double x = 0.0;
  double d = 0.0;
  std::size_t alpha = 0;
  double error = 0.0;
  double envelope = 0.0;
};

struct LimitReport {
  double base = 0.0;
  std::vector<LimitRow> rows;
  /// Per order: errors never increase along j (up to the rounding floor).
  std::vector<bool> monotone;
  /// max error / envelope, and the same over the second half of j.
  double fitted = 0.0;
  double fitted_tail = 0.0;
  /// j where the approach stopped at the finest scale, if it did.
  std::optional<int> precision_floor;
  bool converges = true;
};

/// e_j = |f^(alpha)(x_j) - F^alpha(a)| along x_j = a +- 2^-j.
LimitReport boundary_limits(const ExtensionFunction& f, double a, std::size_t alpha_max, int j_max = 40);

}  // namespace ultrajet
