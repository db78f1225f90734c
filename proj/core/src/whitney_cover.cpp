#include "ultrajet/whitney_cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "ultrajet/error.hpp"

namespace ultrajet {

CompactSet1D::CompactSet1D(std::vector<std::pair<double, double>> components) : comps_(std::move(components)) {
  if (comps_.empty()) throw Error(ErrorKind::InvalidArgument, "compact set needs at least one component");
  std::sort(comps_.begin(), comps_.end());
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto [a, b] = comps_[i];
    if (!std::isfinite(a) || !std::isfinite(b) || a > b)
      throw Error(ErrorKind::InvalidArgument, "component needs finite a <= b");
    if (i > 0 && !(comps_[i - 1].second < a))
      throw Error(ErrorKind::InvalidArgument, "components must be disjoint");
  }
}

bool CompactSet1D::contains(double x) const noexcept {
  return std::any_of(comps_.begin(), comps_.end(), [x](const auto& c) { return c.first <= x && x <= c.second; });
}

double CompactSet1D::distance_to_interval(double u, double v) const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : comps_) d = std::min(d, std::max({0.0, a - v, u - b}));
  return d;
}

NearestPoint distance_and_nearest(const CompactSet1D& E, double x) noexcept {
  NearestPoint best{std::numeric_limits<double>::infinity(), 0.0};
  // Components are sorted, so strict improvement keeps the smaller point on ties.
  for (const auto& [a, b] : E.components()) {
    const double p = std::clamp(x, a, b);
    const double d = std::abs(x - p);
    if (d < best.distance) best = {d, p};
  }
  return best;
}

std::vector<std::size_t> WhitneyCover::stars_containing(double x) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < intervals.size(); ++i)
    if (in_star(i, x)) out.push_back(i);
  return out;
}

WhitneyCover WhitneyCover::with_expansion(double e) const {
  WhitneyCover c = *this;
  c.expansion = e;
  return c;
}

namespace {

struct Builder {
  const CompactSet1D& E;
  double r_cov;
  int finest;
  std::vector<CoverInterval>& out;

  // Interval [k side, (k+1) side] at level gen.
  void visit(double k, int gen) {
    const double side = std::ldexp(1.0, -gen);
    const double u = k * side, v = u + side;
    if (E.distance_to_interval(u, v) >= r_cov) return;
    const double c = u + 0.5 * side;
    if (distance_and_nearest(E, c).distance >= side) {
      out.push_back({c, side, gen});
      return;
    }
    if (gen >= finest) return;
    // Nothing inside E can ever be accepted.
    for (const auto& [a, b] : E.components())
      if (a <= u && v <= b) return;
    visit(2.0 * k, gen + 1);
    visit(2.0 * k + 1.0, gen + 1);
  }
};

}  // namespace

WhitneyCover build_cover(const CompactSet1D& E, double r_cov, const CoverOptions& opts) {
  if (!(r_cov > 0.0) || !std::isfinite(r_cov)) throw Error(ErrorKind::InvalidArgument, "r_cov must be positive");
  if (!(opts.expansion >= 1.0)) throw Error(ErrorKind::InvalidArgument, "expansion must be >= 1");

  // Coarsest side: smallest power of two >= 2 r_cov.
  const int top = -static_cast<int>(std::ceil(std::log2(2.0 * r_cov)));
  int finest = top + std::max(1, opts.max_depth);
  // Keep k * side exact: the finest side must exceed 2^-50 of the coordinate scale.
  const double scale = std::max({1.0, std::abs(E.lo() - 2.0 * r_cov), std::abs(E.hi() + 2.0 * r_cov)});
  const int scale_exp = std::ilogb(scale);
  finest = std::min(finest, 50 - scale_exp);

  WhitneyCover cover;
  cover.expansion = opts.expansion;
  cover.r_cov = r_cov;
  cover.d_lo = 1.5 * std::ldexp(1.0, -finest);
  if (cover.d_lo >= r_cov)
    throw Error(ErrorKind::EmptyCover, "r_cov = " + std::to_string(r_cov) + " is below the finest scale");

  const double side = std::ldexp(1.0, -top);
  const double k_lo = std::floor((E.lo() - r_cov) / side);
  const double k_hi = std::ceil((E.hi() + r_cov) / side);
  Builder b{E, r_cov, finest, cover.intervals};
  for (double k = k_lo; k <= k_hi; k += 1.0) b.visit(k, top);

  if (cover.intervals.empty()) throw Error(ErrorKind::EmptyCover, "no Whitney interval generated");
  std::sort(cover.intervals.begin(), cover.intervals.end(),
            [](const CoverInterval& x, const CoverInterval& y) { return x.center < y.center; });
  return cover;
}

StarDistanceReport verify_star_distances(const CompactSet1D& E, const WhitneyCover& cover,
                                         const std::vector<double>& samples) {
  StarDistanceReport rep;
  rep.worst_lower = std::numeric_limits<double>::infinity();
  for (double x : samples) {
    const double dx = distance_and_nearest(E, x).distance;
    for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
      if (!cover.in_star(i, x)) continue;
      ++rep.checked;
      const double di = distance_and_nearest(E, cover.intervals[i].center).distance;
      if (dx == 0.0) rep.touches_E = true;
      const double lower = dx > 0.0 ? di / (0.5 * dx) : std::numeric_limits<double>::infinity();
      const double upper = dx > 0.0 ? di / (3.0 * dx) : std::numeric_limits<double>::infinity();
      rep.worst_lower = std::min(rep.worst_lower, lower);
      rep.worst_upper = std::max(rep.worst_upper, upper);
      if (!(0.5 * dx <= di && di <= 3.0 * dx)) {
        rep.holds = false;
        if (!rep.first_violation) rep.first_violation = std::make_pair(i, x);
      }
    }
  }
  if (rep.checked == 0) rep.worst_lower = 0.0;
  return rep;
}

CoverageReport check_coverage(const CompactSet1D& E, const WhitneyCover& cover, const std::vector<double>& samples) {
  CoverageReport rep;
  for (double x : samples) {
    const double dx = distance_and_nearest(E, x).distance;
    if (dx < cover.d_lo || dx >= cover.r_cov) continue;
    ++rep.sampled;
    std::size_t stars = 0;
    bool inside = false;
    for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
      if (cover.in_star(i, x)) ++stars;
      const auto& q = cover.intervals[i];
      if (x >= q.lo() && x <= q.hi()) inside = true;
    }
    rep.max_overlap = std::max(rep.max_overlap, stars);
    if (!inside) {
      ++rep.uncovered;
      if (!rep.first_uncovered) rep.first_uncovered = x;
    }
  }
  return rep;
}

std::vector<double> cover_samples(const WhitneyCover& cover, std::size_t per_interval) {
  std::vector<double> xs;
  const std::size_t n = std::max<std::size_t>(per_interval, 2);
  xs.reserve(n * cover.intervals.size());
  for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
    const double lo = cover.star_lo(i), hi = cover.star_hi(i);
    for (std::size_t j = 0; j < n; ++j)
      xs.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

ExtensionConstants extension_constants(const WhitneyCover& cover) {
  ExtensionConstants k;
  k.r_0 = cover.r_cov;
  return k;
}

void write_cover_csv(std::ostream& os, const WhitneyCover& cover) {
  os << "center,side,generation\n";
  os.precision(17);
  for (const auto& q : cover.intervals) os << q.center << ',' << q.side << ',' << q.generation << '\n';
}

}  // namespace ultrajet
