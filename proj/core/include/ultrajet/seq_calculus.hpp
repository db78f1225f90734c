#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ultrajet {

/// A positive sequence m_0..m_K with m_0 = 1, stored in the log domain.
///
/// Log-values and log-quotients are both kept. The quotients are the primary
/// data for anything that compares them (log-convexity, the counting
/// function Gamma), so sequences built from quotients keep them bit-exact.
/// Values are immutable after construction.
class WeightSequence {
 public:
  static constexpr std::size_t kMinIndex = 16;

  static WeightSequence from_values(std::span<const double> m);
  static WeightSequence from_log_values(std::vector<double> log_m);
  /// log_q[k] = log(m_k / m_{k-1}) for k = 1..K; log_q[0] is ignored.
  static WeightSequence from_log_quotients(std::vector<double> log_q);

  std::size_t max_index() const noexcept { return log_m_.size() - 1; }
  std::size_t size() const noexcept { return log_m_.size(); }

  double log_value(std::size_t k) const { return log_m_.at(k); }
  double value(std::size_t k) const;
  double log_quotient(std::size_t k) const;
  double quotient(std::size_t k) const;

  std::span<const double> log_values() const noexcept { return log_m_; }
  /// Entry 0 is 0 and carries no meaning.
  std::span<const double> log_quotients() const noexcept { return log_q_; }

  /// True iff the quotients are nondecreasing (exact comparison).
  bool log_convex() const noexcept { return log_convex_; }

  /// Prefix of length k+1 (k >= kMinIndex).
  WeightSequence truncated(std::size_t k) const;

 private:
  WeightSequence(std::vector<double> log_m, std::vector<double> log_q);
  friend WeightSequence log_convex_minorant(const WeightSequence& m);

  std::vector<double> log_m_;
  std::vector<double> log_q_;
  bool log_convex_ = false;
};

/// Abscissae for the transforms plus the enumeration cutoff.
struct SeqTransformGrid {
  std::vector<double> t;
  std::size_t k_cutoff = 0;

  static SeqTransformGrid geometric(double lo, double hi, std::size_t points, std::size_t k_cutoff);
};

/// Geometric grid lo..hi with the given number of points (endpoints included).
std::vector<double> geometric_grid(double lo, double hi, std::size_t points);

/// omega_m(t) = sup_k log(t^k / m_k), enumerated over k <= K.
/// Throws SupremumAtCutoff if the maximiser is K.
double omega_of_m(const WeightSequence& m, double t);

/// h_m(t) = inf_k m_k t^k, h_m(0) = 0. Throws InfimumAtCutoff if the minimiser is K.
double h_of_m(const WeightSequence& m, double t);

struct BoundedValue {
  double value = 0.0;
  /// The extremum was attained at the last stored index, so value is only a
  /// one-sided bound of the untruncated transform.
  bool at_cutoff = false;
};

/// h_m(t) evaluated on the stored range without throwing; at_cutoff marks an
/// upper bound.
BoundedValue h_of_m_bounded(const WeightSequence& m, double t);

/// log h_m(t) on the stored range (t > 0); avoids underflow for small t.
BoundedValue log_h_of_m_bounded(const WeightSequence& m, double t);

/// Gamma_m(t) = min{k : m_{k+1}/m_k >= 1/t}; m must be log-convex.
/// Throws GammaAtCutoff when no stored quotient qualifies.
std::size_t gamma_of_m(const WeightSequence& m, double t);

/// min(Gamma_m(t), cap); never reaches past index cap + 1.
std::size_t gamma_of_m_capped(const WeightSequence& m, double t, std::size_t cap);

/// Relative tolerance under which q_{k+1} and 1/t count as tied in Gamma.
inline constexpr double kGammaTieTolerance = 1e-13;

/// Log-convex minorant: lower convex hull of the points (k, log m_k).
WeightSequence log_convex_minorant(const WeightSequence& m);

/// Sequence (k!)^power as a weight sequence with exact quotient logs.
WeightSequence factorial_power(double power, std::size_t K);

}  // namespace ultrajet
