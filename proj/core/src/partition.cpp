#include "ultrajet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ultrajet/error.hpp"

namespace ultrajet {

PiecewisePolynomial build_bump(const BumpSpec& spec) {
  if (!(spec.margin > 0.0)) throw Error(ErrorKind::DegenerateSupport, "bump margin must be positive");
  if (spec.p < 1) throw Error(ErrorKind::InvalidArgument, "bump needs p >= 1");
  if (!(spec.core_lo <= spec.core_hi)) throw Error(ErrorKind::DegenerateSupport, "bump core is empty");
  auto f = PiecewisePolynomial::indicator(spec.core_lo - 0.5 * spec.margin, spec.core_hi + 0.5 * spec.margin);
  const double h = spec.fold_width();
  for (std::size_t j = 0; j < spec.p; ++j) f = f.box_convolve(h);
  return f;
}

namespace {

// Reference spline on [-9/16, 9/16], identically 1 on [-1/2, 1/2].
constexpr double kRefHalfSupport = 9.0 / 16.0;

double binom(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return r;
}

}  // namespace

Partition::Partition(WhitneyCover cover, std::size_t p)
    : cover_(std::move(cover)), p_(p), ref_(build_bump(BumpSpec{-0.5, 0.5, 1.0 / 16.0, p})) {
  if (cover_.intervals.empty()) throw Error(ErrorKind::EmptyCover, "partition needs a nonempty cover");
}

std::vector<std::size_t> Partition::active(double x) const {
  const auto& iv = cover_.intervals;
  // Neighbours of the interval nearest to x suffice: the support reaches l/16 past Q_i.
  auto it = std::upper_bound(iv.begin(), iv.end(), x,
                             [](double v, const CoverInterval& q) { return v < q.center; });
  const std::size_t pos = static_cast<std::size_t>(it - iv.begin());
  const std::size_t lo = pos >= 3 ? pos - 3 : 0;
  const std::size_t hi = std::min(iv.size(), pos + 3);
  std::vector<std::size_t> out;
  for (std::size_t i = lo; i < hi; ++i)
    if (std::abs(x - iv[i].center) < kRefHalfSupport * iv[i].side) out.push_back(i);
  return out;
}

double Partition::psi(std::size_t i, double x, std::size_t beta) const {
  const auto& q = cover_.intervals.at(i);
  return ref_((x - q.center) / q.side, beta) * std::pow(q.side, -static_cast<double>(beta));
}

std::vector<double> Partition::sum_derivs(double x, std::size_t beta_max) const {
  std::vector<double> s(beta_max + 1, 0.0);
  for (std::size_t i : active(x))
    for (std::size_t b = 0; b <= beta_max; ++b) s[b] += psi(i, x, b);
  return s;
}

std::vector<double> reciprocal_derivs(const std::vector<double>& S) {
  if (S.empty() || S[0] == 0.0) throw Error(ErrorKind::InvalidArgument, "reciprocal of a vanishing function");
  std::vector<double> R(S.size(), 0.0);
  R[0] = 1.0 / S[0];
  // (S R)^(n) = 0 for n >= 1.
  for (std::size_t n = 1; n < S.size(); ++n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j) acc += binom(n, j) * S[j] * R[n - j];
    R[n] = -acc / S[0];
  }
  return R;
}

std::vector<LocalTerm> Partition::phi_derivs(double x, std::size_t beta_max) const {
  const auto idx = active(x);
  if (idx.empty())
    throw Error(ErrorKind::UncoveredPoint, "no bump is active at x = " + std::to_string(x));
  std::vector<std::vector<double>> psis(idx.size(), std::vector<double>(beta_max + 1, 0.0));
  std::vector<double> S(beta_max + 1, 0.0);
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b <= beta_max; ++b) {
      psis[a][b] = psi(idx[a], x, b);
      S[b] += psis[a][b];
    }
  if (!(S[0] > 0.0))
    throw Error(ErrorKind::UncoveredPoint, "sum of bumps vanishes at x = " + std::to_string(x));
  const auto R = reciprocal_derivs(S);
  std::vector<LocalTerm> out;
  out.reserve(idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a) {
    LocalTerm t{idx[a], std::vector<double>(beta_max + 1, 0.0)};
    for (std::size_t n = 0; n <= beta_max; ++n) {
      double acc = 0.0;
      for (std::size_t j = 0; j <= n; ++j) acc += binom(n, j) * psis[a][j] * R[n - j];
      t.derivs[n] = acc;
    }
    out.push_back(std::move(t));
  }
  return out;
}

double Partition::phi(std::size_t i, double x, std::size_t beta) const {
  const auto& q = cover_.intervals.at(i);
  if (!(std::abs(x - q.center) < kRefHalfSupport * q.side)) return 0.0;
  for (const auto& t : phi_derivs(x, beta))
    if (t.index == i) return t.derivs[beta];
  return 0.0;
}

DerivativeBoundReport check_derivative_bound(const Partition& part, const CompactSet1D& E,
                                             const WeightSequence& W, const WeightSequence& s_eta,
                                             std::size_t beta_max, const std::vector<double>& samples,
                                             const ExtensionConstants& k) {
  if (beta_max > part.p()) throw Error(ErrorKind::InvalidArgument, "beta_max must not exceed p");
  if (beta_max > W.max_index()) throw Error(ErrorKind::InvalidArgument, "W row is shorter than beta_max");
  DerivativeBoundReport rep;
  rep.beta_max = beta_max;

  // Reference bump against the per-fold bound, on the unit scale.
  const double h = 1.0 / (16.0 * static_cast<double>(part.p()));
  for (std::size_t b = 0; b <= beta_max; ++b) {
    const double sup = part.reference().sup_norm(b);
    rep.reference_sup.push_back(sup);
    if (sup > std::pow(2.0 / h, static_cast<double>(b)) * (1.0 + 1e-12)) rep.per_fold_bound_holds = false;
  }

  // Local terms per sample, computed once.
  struct Point {
    double d;
    std::vector<LocalTerm> terms;
  };
  std::vector<Point> pts;
  for (double x : samples) {
    const double d = distance_and_nearest(E, x).distance;
    if (d < part.cover().d_lo || d >= part.cover().r_cov) continue;
    pts.push_back({d, part.phi_derivs(x, beta_max)});
  }

  const double p = static_cast<double>(part.p());
  double best_M = std::numeric_limits<double>::infinity();
  for (double B : {1.0, 2.0, 4.0, 8.0}) {
    std::vector<double> m(beta_max + 1, 0.0);
    for (const auto& pt : pts) {
      const double t = k.b_1 * p * pt.d / (9.0 * k.A_2 * B);
      const double log_pi = (k.A_1 * B / p) * (1.0 - log_h_of_m_bounded(s_eta, t).value);
      for (const auto& term : pt.terms)
        for (std::size_t b = 0; b <= beta_max; ++b) {
          const double v = std::abs(term.derivs[b]);
          if (v == 0.0) continue;
          m[b] = std::max(m[b], std::exp(std::log(v) - W.log_value(b) - log_pi));
        }
    }
    const double M = *std::max_element(m.begin(), m.end());
    if (M < best_M) {
      best_M = M;
      rep.m_per_beta = m;
      rep.B = B;
    }
  }
  rep.M = best_M;
  // Stability in beta: running max over the upper half of the orders.
  std::vector<double> run;
  double acc = -std::numeric_limits<double>::infinity();
  for (double v : rep.m_per_beta) {
    acc = std::max(acc, std::log(std::max(v, std::numeric_limits<double>::min())));
    run.push_back(acc);
  }
  if (run.size() >= 3) {
    const std::size_t lo = run.size() / 2;
    rep.trend = classify_log_trend(std::span<const double>(run).subspan(lo));
  } else {
    rep.trend = Trend::Bounded;
  }
  return rep;
}

}  // namespace ultrajet
