#include "ultrajet/ultrajet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ultrajet/error.hpp"

namespace ultrajet {

UltraJet::UltraJet(CompactSet1D E, std::vector<double> points, std::vector<std::vector<double>> values)
    : E_(std::move(E)), points_(std::move(points)), values_(std::move(values)) {
  if (points_.empty() || points_.size() != values_.size())
    throw Error(ErrorKind::InvalidArgument, "jet needs one value list per base point");
  alpha_max_ = values_.front().size();
  if (alpha_max_ == 0) throw Error(ErrorKind::InvalidArgument, "jet needs at least F^0");
  --alpha_max_;
  // Sort base points together with their values.
  std::vector<std::size_t> order(points_.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
  std::vector<double> p;
  std::vector<std::vector<double>> v;
  for (std::size_t i : order) {
    if (!E_.contains(points_[i]))
      throw Error(ErrorKind::InvalidArgument, "base point " + std::to_string(points_[i]) + " is not in E");
    if (values_[i].size() != alpha_max_ + 1)
      throw Error(ErrorKind::InvalidArgument, "all base points need the same jet length");
    for (double x : values_[i])
      if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "jet values must be finite");
    if (!p.empty() && p.back() == points_[i]) throw Error(ErrorKind::InvalidArgument, "duplicate base point");
    p.push_back(points_[i]);
    v.push_back(std::move(values_[i]));
  }
  points_ = std::move(p);
  values_ = std::move(v);
}

std::optional<std::size_t> UltraJet::find(double a) const noexcept {
  auto it = std::lower_bound(points_.begin(), points_.end(), a);
  if (it == points_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

double UltraJet::value(double a, std::size_t alpha) const {
  const auto i = find(a);
  if (!i) throw Error(ErrorKind::InvalidArgument, "no stored jet at " + std::to_string(a));
  if (alpha > alpha_max_)
    throw Error(ErrorKind::OrderOverflow, "order " + std::to_string(alpha) + " exceeds alpha_max");
  return values_[*i][alpha];
}

UltraJet UltraJet::scaled(double c) const {
  auto v = values_;
  for (auto& row : v)
    for (double& x : row) x *= c;
  return UltraJet(E_, points_, std::move(v));
}

UltraJet UltraJet::plus(const UltraJet& other) const {
  if (other.points_ != points_ || other.alpha_max_ != alpha_max_)
    throw Error(ErrorKind::InvalidArgument, "jets must share base points and order");
  auto v = values_;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t a = 0; a <= alpha_max_; ++a) v[i][a] += other.values_[i][a];
  return UltraJet(E_, points_, std::move(v));
}

Polynomial taylor_poly(const UltraJet& F, double a, std::size_t p) {
  if (p > F.alpha_max())
    throw Error(ErrorKind::OrderOverflow,
                "Taylor degree " + std::to_string(p) + " exceeds alpha_max " + std::to_string(F.alpha_max()));
  const auto i = F.find(a);
  if (!i) throw Error(ErrorKind::InvalidArgument, "no stored jet at " + std::to_string(a));
  const auto& v = F.values_at(*i);
  std::vector<double> c(p + 1);
  double fact = 1.0;
  for (std::size_t j = 0; j <= p; ++j) {
    if (j > 0) fact *= static_cast<double>(j);
    c[j] = v[j] / fact;
  }
  return Polynomial(a, std::move(c));
}

namespace {

// Remainder together with the magnitude of the terms it was formed from.
std::pair<double, double> remainder_with_scale(const UltraJet& F, double a, double b, std::size_t k,
                                               std::size_t alpha) {
  if (k + 1 > F.alpha_max() + 1 || alpha > k)
    throw Error(ErrorKind::OrderOverflow, "remainder needs alpha <= k <= alpha_max");
  const auto& va = F.values_at(*F.find(a));
  const double fb = F.value(b, alpha);
  const double h = b - a;
  // (T_a^k F)^(alpha)(b) = sum_{j <= k - alpha} F^{alpha+j}(a) h^j / j!
  double sum = 0.0, scale = std::abs(fb);
  double w = 1.0;
  for (std::size_t j = 0; alpha + j <= k; ++j) {
    if (j > 0) w *= h / static_cast<double>(j);
    const double term = va[alpha + j] * w;
    sum += term;
    scale += std::abs(term);
  }
  return {fb - sum, scale};
}

}  // namespace

double remainder(const UltraJet& F, double a, double b, std::size_t k, std::size_t alpha) {
  if (k > F.alpha_max()) throw Error(ErrorKind::OrderOverflow, "k exceeds alpha_max");
  if (!F.find(a) || !F.find(b)) throw Error(ErrorKind::InvalidArgument, "remainder needs stored base points");
  return remainder_with_scale(F, a, b, k, alpha).first;
}

JetCertificate certify(const UltraJet& F, const WeightMatrix& V, const CertifyOptions& opts) {
  const std::size_t N = std::min(F.alpha_max(), V.max_index());
  const double ninf = -std::numeric_limits<double>::infinity();
  const auto& pts = F.points();

  struct Tuple {
    double log_lhs;
    std::size_t order;  // power of rho
    bool remainder;
  };

  std::string witness;
  for (const auto& row : V.rows()) {
    // Log excess per order with rho = 1: lhs - rhs.
    std::vector<double> excess(N + 1, ninf);
    std::vector<Tuple> tuples;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& v = F.values_at(i);
      for (std::size_t a = 0; a <= N; ++a) {
        if (v[a] == 0.0) continue;
        const double e = std::log(std::abs(v[a])) - row.full.log_value(a);
        excess[a] = std::max(excess[a], e);
      }
    }
    std::size_t rem_checks = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (i == j) continue;
        const double dist = std::abs(pts[j] - pts[i]);
        for (std::size_t k = 0; k + 1 <= N; ++k)
          for (std::size_t al = 0; al <= k; ++al) {
            ++rem_checks;
            auto [r, scale] = remainder_with_scale(F, pts[i], pts[j], k, al);
            const double floor = opts.rounding_ulps * std::numeric_limits<double>::epsilon() * scale;
            const double mag = std::abs(r) - floor;
            if (!(mag > 0.0)) continue;
            const double rhs = std::lgamma(static_cast<double>(al) + 1.0) + row.divided.log_value(k + 1) +
                               static_cast<double>(k + 1 - al) * std::log(dist);
            excess[k + 1] = std::max(excess[k + 1], std::log(mag) - rhs);
          }
      }

    const bool zero = std::all_of(excess.begin(), excess.end(), [&](double e) { return e == ninf; });
    if (zero) return JetCertificate{row.xi, 1.0, 1.0, 0.0, 0.0, rem_checks};

    const double step = std::log(2.0) / static_cast<double>(opts.rho_steps_per_octave);
    const std::size_t steps = static_cast<std::size_t>(std::ceil(std::log(opts.rho_max) / step));
    // Smallest grid step whose running max over [M/2, M] is bounded, for orders <= M.
    auto fit = [&](std::size_t M, std::vector<double>& run) -> std::optional<std::size_t> {
      for (std::size_t s = 0; s <= steps; ++s) {
        const double log_rho = static_cast<double>(s) * step;
        run.assign(M + 1, ninf);
        double acc = ninf;
        for (std::size_t n = 0; n <= M; ++n) {
          acc = std::max(acc, excess[n] - static_cast<double>(n) * log_rho);
          run[n] = acc;
        }
        const std::size_t lo = M / 2;
        if (run[lo] == ninf) continue;
        if (classify_log_trend(std::span<const double>(run).subspan(lo), opts.trend) == Trend::Bounded) return s;
      }
      return std::nullopt;
    };
    std::vector<double> run;
    const auto s_full = fit(N, run);
    if (s_full) {
      // The required rho must not keep growing with the order.
      if (N >= 16) {
        std::vector<double> run_half;
        const auto s_half = fit(N / 2, run_half);
        if (s_half && *s_full > *s_half + 2) {
          witness = "xi = " + std::to_string(row.xi) + ": required rho grows from " +
                    std::to_string(std::exp(static_cast<double>(*s_half) * step)) + " at order " +
                    std::to_string(N / 2) + " to " + std::to_string(std::exp(static_cast<double>(*s_full) * step)) +
                    " at order " + std::to_string(N);
          continue;
        }
      }
      const double log_rho = static_cast<double>(*s_full) * step;
      JetCertificate cert;
      cert.xi = row.xi;
      cert.rho = std::exp(log_rho);
      cert.C = std::exp(std::max(0.0, run[N]));
      cert.remainder_checks = rem_checks;
      // Ratios with the fitted constants, from the excess per order (growth and remainder share it).
      cert.ratio_growth = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t a = 0; a <= N; ++a) {
          const double v = F.values_at(i)[a];
          if (v == 0.0) continue;
          const double r = std::log(std::abs(v)) - row.full.log_value(a) - static_cast<double>(a) * log_rho;
          cert.ratio_growth = std::max(cert.ratio_growth, std::exp(r) / cert.C);
        }
      cert.ratio_remainder = std::exp(run[N]) / cert.C;
      return cert;
    }
    double top = ninf;
    for (std::size_t n = N / 2; n <= N; ++n)
      if (excess[n] != ninf) top = std::max(top, excess[n] / std::max<double>(1.0, static_cast<double>(n)));
    witness = "xi = " + std::to_string(row.xi) + ": excess^(1/n) reaches " + std::to_string(std::exp(top)) +
              " at orders up to " + std::to_string(N) + ", above rho_max";
  }
  throw Error(ErrorKind::NotInClass, "no stored row certifies the jet (" + witness + ")");
}

UltraJet gevrey_jet(const CompactSet1D& E, const std::vector<double>& points, const WeightSequence& v_divided,
                    std::size_t alpha_max, double c, double scale) {
  if (alpha_max > v_divided.max_index()) throw Error(ErrorKind::OrderOverflow, "row shorter than alpha_max");
  std::vector<double> vals(alpha_max + 1);
  for (std::size_t k = 0; k <= alpha_max; ++k)
    vals[k] = c * std::exp(static_cast<double>(k) * std::log(scale) + std::lgamma(static_cast<double>(k) + 1.0) +
                           v_divided.log_value(k));
  return UltraJet(E, points, std::vector<std::vector<double>>(points.size(), vals));
}

UltraJet polynomial_jet(const CompactSet1D& E, const std::vector<double>& points, const Polynomial& P,
                        std::size_t alpha_max) {
  std::vector<std::vector<double>> vals;
  for (double a : points) {
    std::vector<double> v(alpha_max + 1);
    for (std::size_t k = 0; k <= alpha_max; ++k) v[k] = P.derivative_at(a, k);
    vals.push_back(std::move(v));
  }
  return UltraJet(E, points, std::move(vals));
}

}  // namespace ultrajet
