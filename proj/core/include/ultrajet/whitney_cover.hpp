#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

namespace ultrajet {

/// Finite union of disjoint closed intervals [a_i, b_i], sorted; points allowed.
class CompactSet1D {
 public:
  /// Sorts the components and rejects empty input, a > b, or overlaps.
  explicit CompactSet1D(std::vector<std::pair<double, double>> components);
  static CompactSet1D point(double a) { return CompactSet1D({{a, a}}); }

  const std::vector<std::pair<double, double>>& components() const noexcept { return comps_; }
  double lo() const noexcept { return comps_.front().first; }
  double hi() const noexcept { return comps_.back().second; }
  bool contains(double x) const noexcept;

  /// Distance from E to the closed interval [u, v].
  double distance_to_interval(double u, double v) const noexcept;

 private:
  std::vector<std::pair<double, double>> comps_;
};

struct NearestPoint {
  double distance = 0.0;
  double nearest = 0.0;
};

/// d(x, E) and a minimizing point; ties go to the smaller coordinate.
NearestPoint distance_and_nearest(const CompactSet1D& E, double x) noexcept;

struct CoverInterval {
  double center = 0.0;
  double side = 0.0;
  /// Dyadic level: side = 2^-generation.
  int generation = 0;
  double lo() const noexcept { return center - 0.5 * side; }
  double hi() const noexcept { return center + 0.5 * side; }
};

struct CoverOptions {
  /// Levels below the coarsest one; clamped so dyadic endpoints stay exact.
  int max_depth = 48;
  double expansion = 9.0 / 8.0;
};

/// Dyadic intervals off E with side <= d(center) < 2.5 side, covering
/// {x : d_lo <= d(x) < r_cov}.
struct WhitneyCover {
  std::vector<CoverInterval> intervals;
  double expansion = 9.0 / 8.0;
  double r_cov = 0.0;
  /// Smallest distance guaranteed to be covered (finest scale limit).
  double d_lo = 0.0;

  double star_lo(std::size_t i) const noexcept { return intervals[i].center - 0.5 * expansion * intervals[i].side; }
  double star_hi(std::size_t i) const noexcept { return intervals[i].center + 0.5 * expansion * intervals[i].side; }
  bool in_star(std::size_t i, double x) const noexcept { return x >= star_lo(i) && x <= star_hi(i); }
  /// Indices i with x in Q_i*.
  std::vector<std::size_t> stars_containing(double x) const;
  /// Same cover with a different expansion factor (used for negative controls).
  WhitneyCover with_expansion(double e) const;
};

/// Throws EmptyCover if r_cov is below the finest generated scale.
WhitneyCover build_cover(const CompactSet1D& E, double r_cov, const CoverOptions& opts = {});

struct StarDistanceReport {
  bool holds = true;
  std::size_t checked = 0;
  /// min over checks of d(x_i) / (d(x)/2); >= 1 when the lower bound holds.
  double worst_lower = 0.0;
  /// max over checks of d(x_i) / (3 d(x)); <= 1 when the upper bound holds.
  double worst_upper = 0.0;
  /// Q_i* meets E somewhere on the samples.
  bool touches_E = false;
  std::optional<std::pair<std::size_t, double>> first_violation;
};

/// (1/2) d(x) <= d(x_i) <= 3 d(x) at every sample x lying in some Q_i*.
StarDistanceReport verify_star_distances(const CompactSet1D& E, const WhitneyCover& cover,
                                         const std::vector<double>& samples);

struct CoverageReport {
  std::size_t sampled = 0;
  std::size_t max_overlap = 0;
  std::size_t uncovered = 0;
  std::optional<double> first_uncovered;
};

/// Overlap of the Q_i* and coverage by the Q_i at samples inside the covered region.
CoverageReport check_coverage(const CompactSet1D& E, const WhitneyCover& cover, const std::vector<double>& samples);

/// Samples spread over the covered region: for every interval, `per_interval`
/// points in Q_i* (endpoints included), sorted and deduplicated.
std::vector<double> cover_samples(const WhitneyCover& cover, std::size_t per_interval);

/// Cover and partition constants realized by this construction.
struct ExtensionConstants {
  double r_0 = 0.0;
  double B_1 = 3.0;
  double b_1 = 1.0;
  double A_1 = 1.0;
  double A_2 = 16.0;
};

ExtensionConstants extension_constants(const WhitneyCover& cover);

/// CSV with header center,side,generation.
void write_cover_csv(std::ostream& os, const WhitneyCover& cover);

}  // namespace ultrajet
