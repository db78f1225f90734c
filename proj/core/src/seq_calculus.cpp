#include "ultrajet/seq_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ultrajet/error.hpp"

namespace ultrajet {

namespace {

void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) throw Error(kind, what);
}

}  // namespace

WeightSequence::WeightSequence(std::vector<double> log_m, std::vector<double> log_q)
    : log_m_(std::move(log_m)), log_q_(std::move(log_q)) {
  require(log_m_.size() == log_q_.size(), ErrorKind::InvalidArgument, "value/quotient length mismatch");
  require(log_m_.size() >= kMinIndex + 1, ErrorKind::InvalidArgument,
          "weight sequence needs K >= 16, got K = " + std::to_string(log_m_.size() - 1));
  require(log_m_[0] == 0.0, ErrorKind::InvalidArgument, "weight sequence must satisfy m_0 = 1");
  for (double v : log_m_) require(std::isfinite(v), ErrorKind::InvalidArgument, "non-finite log value");
  for (double v : log_q_) require(std::isfinite(v), ErrorKind::InvalidArgument, "non-finite log quotient");
  log_q_[0] = 0.0;

  const std::size_t K = log_m_.size() - 1;
  const std::size_t half = K / 2;
  require(log_m_[K] / static_cast<double>(K) > log_m_[half] / static_cast<double>(half),
          ErrorKind::InvalidArgument, "m_k^{1/k} does not escape on the stored range");

  log_convex_ = true;
  for (std::size_t k = 2; k <= K; ++k) {
    if (log_q_[k] < log_q_[k - 1]) {
      log_convex_ = false;
      break;
    }
  }
}

WeightSequence WeightSequence::from_values(std::span<const double> m) {
  std::vector<double> log_m(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    require(m[k] > 0.0, ErrorKind::InvalidArgument, "weight sequence entries must be positive");
    log_m[k] = std::log(m[k]);
  }
  return from_log_values(std::move(log_m));
}

WeightSequence WeightSequence::from_log_values(std::vector<double> log_m) {
  std::vector<double> log_q(log_m.size(), 0.0);
  for (std::size_t k = 1; k < log_m.size(); ++k) log_q[k] = log_m[k] - log_m[k - 1];
  return WeightSequence(std::move(log_m), std::move(log_q));
}

WeightSequence WeightSequence::from_log_quotients(std::vector<double> log_q) {
  std::vector<double> log_m(log_q.size(), 0.0);
  for (std::size_t k = 1; k < log_q.size(); ++k) log_m[k] = log_m[k - 1] + log_q[k];
  return WeightSequence(std::move(log_m), std::move(log_q));
}

double WeightSequence::value(std::size_t k) const { return std::exp(log_m_.at(k)); }

double WeightSequence::log_quotient(std::size_t k) const {
  require(k >= 1 && k < log_q_.size(), ErrorKind::InvalidArgument, "quotient index out of range");
  return log_q_[k];
}

double WeightSequence::quotient(std::size_t k) const { return std::exp(log_quotient(k)); }

WeightSequence WeightSequence::truncated(std::size_t k) const {
  require(k <= max_index(), ErrorKind::InvalidArgument, "truncation beyond stored range");
  return WeightSequence(std::vector<double>(log_m_.begin(), log_m_.begin() + k + 1),
                        std::vector<double>(log_q_.begin(), log_q_.begin() + k + 1));
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  require(lo > 0.0 && hi > lo && points >= 2, ErrorKind::InvalidArgument, "bad geometric grid");
  std::vector<double> t(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) t[i] = lo * std::exp(step * static_cast<double>(i));
  t.front() = lo;
  t.back() = hi;
  return t;
}

SeqTransformGrid SeqTransformGrid::geometric(double lo, double hi, std::size_t points,
                                             std::size_t k_cutoff) {
  return SeqTransformGrid{geometric_grid(lo, hi, points), k_cutoff};
}

double omega_of_m(const WeightSequence& m, double t) {
  require(t > 0.0, ErrorKind::InvalidArgument, "omega_m needs t > 0");
  const double lt = std::log(t);
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t k = 1; k <= m.max_index(); ++k) {
    const double v = static_cast<double>(k) * lt - m.log_value(k);
    if (v > best) {
      best = v;
      arg = k;
    }
  }
  if (arg == m.max_index())
    throw Error(ErrorKind::SupremumAtCutoff, "sup in omega_m attained at K for t = " + std::to_string(t));
  return best;
}

BoundedValue h_of_m_bounded(const WeightSequence& m, double t) {
  require(t >= 0.0, ErrorKind::InvalidArgument, "h_m needs t >= 0");
  if (t == 0.0) return {0.0, false};
  const auto r = log_h_of_m_bounded(m, t);
  return {std::exp(r.value), r.at_cutoff};
}

BoundedValue log_h_of_m_bounded(const WeightSequence& m, double t) {
  require(t > 0.0, ErrorKind::InvalidArgument, "log h_m needs t > 0");
  const double lt = std::log(t);
  double best = 0.0;
  std::size_t arg = 0;
  for (std::size_t k = 1; k <= m.max_index(); ++k) {
    const double v = m.log_value(k) + static_cast<double>(k) * lt;
    if (v < best) {
      best = v;
      arg = k;
    }
  }
  return {best, arg == m.max_index()};
}

double h_of_m(const WeightSequence& m, double t) {
  const auto r = h_of_m_bounded(m, t);
  if (r.at_cutoff)
    throw Error(ErrorKind::InfimumAtCutoff, "inf in h_m attained at K for t = " + std::to_string(t));
  return r.value;
}

namespace {

// Smallest k <= limit with q_{k+1} >= 1/t, or limit + 1 if none.
std::size_t first_gamma_index(const WeightSequence& m, double t, std::size_t limit) {
  require(t > 0.0, ErrorKind::InvalidArgument, "Gamma_m needs t > 0");
  require(m.log_convex(), ErrorKind::NotLogConvex, "Gamma_m needs a log-convex sequence");
  const double target = -std::log(t);
  const double tol = kGammaTieTolerance * std::max(1.0, std::abs(target));
  const auto q = m.log_quotients();
  for (std::size_t k = 0; k <= limit; ++k) {
    if (q[k + 1] >= target - tol) return k;
  }
  return limit + 1;
}

}  // namespace

std::size_t gamma_of_m(const WeightSequence& m, double t) {
  const std::size_t limit = m.max_index() - 1;
  const std::size_t k = first_gamma_index(m, t, limit);
  if (k > limit)
    throw Error(ErrorKind::GammaAtCutoff, "no stored quotient reaches 1/t for t = " + std::to_string(t));
  return k;
}

std::size_t gamma_of_m_capped(const WeightSequence& m, double t, std::size_t cap) {
  const std::size_t limit = std::min(cap, m.max_index() - 1);
  const std::size_t k = first_gamma_index(m, t, limit);
  if (k > limit) {
    if (limit < cap)
      throw Error(ErrorKind::GammaAtCutoff, "cap exceeds stored range for t = " + std::to_string(t));
    return cap;
  }
  return k;
}

WeightSequence log_convex_minorant(const WeightSequence& m) {
  if (m.log_convex()) return m;
  const std::size_t K = m.max_index();
  const auto y = m.log_values();

  // Andrew's monotone chain, lower hull only; x-coordinates are the indices.
  std::vector<std::size_t> hull;
  hull.reserve(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    while (hull.size() >= 2) {
      const std::size_t o = hull[hull.size() - 2];
      const std::size_t a = hull.back();
      const double cross = static_cast<double>(a - o) * (y[k] - y[o]) -
                           (y[a] - y[o]) * static_cast<double>(k - o);
      if (cross <= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }

  std::vector<double> log_m(K + 1, 0.0);
  std::vector<double> log_q(K + 1, 0.0);
  double prev_slope = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    const std::size_t i = hull[s];
    const std::size_t j = hull[s + 1];
    double slope = (y[j] - y[i]) / static_cast<double>(j - i);
    slope = std::max(slope, prev_slope);
    prev_slope = slope;
    log_m[i] = y[i];
    for (std::size_t k = i + 1; k <= j; ++k) {
      log_q[k] = slope;
      log_m[k] = (k == j) ? y[j] : std::min(y[i] + static_cast<double>(k - i) * slope, y[k]);
    }
  }
  return WeightSequence(std::move(log_m), std::move(log_q));
}

WeightSequence factorial_power(double power, std::size_t K) {
  std::vector<double> log_q(K + 1, 0.0);
  for (std::size_t k = 1; k <= K; ++k) log_q[k] = power * std::log(static_cast<double>(k));
  return WeightSequence::from_log_quotients(std::move(log_q));
}

}  // namespace ultrajet
