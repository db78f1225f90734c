#include "ultrajet/weight_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "ultrajet/error.hpp"
#include "ultrajet/weight_function.hpp"

namespace ultrajet {

namespace {

constexpr double kXiTol = 1e-12;
constexpr double kOrderTol = 1e-12;

bool same_xi(double a, double b) { return std::abs(a - b) <= kXiTol * std::max(std::abs(a), std::abs(b)); }

WeightSequence divided_from_full(const WeightSequence& full) {
  auto q = std::vector<double>(full.log_quotients().begin(), full.log_quotients().end());
  for (std::size_t k = 1; k < q.size(); ++k) q[k] -= std::log(static_cast<double>(k));
  return WeightSequence::from_log_quotients(std::move(q));
}

WeightSequence full_from_divided(const WeightSequence& divided) {
  auto q = std::vector<double>(divided.log_quotients().begin(), divided.log_quotients().end());
  for (std::size_t k = 1; k < q.size(); ++k) q[k] += std::log(static_cast<double>(k));
  return WeightSequence::from_log_quotients(std::move(q));
}

// Sup over the window [K/2, K] of a series indexed 1..K, as a log trend.
Trend tail_trend(const std::vector<double>& series, std::size_t K) {
  const std::size_t lo = std::max<std::size_t>(1, K / 2);
  return classify_log_trend(std::span<const double>(series).subspan(lo, K - lo + 1));
}

std::vector<double> running_max(std::vector<double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);
  return v;
}

}  // namespace

WeightMatrix::WeightMatrix(std::vector<MatrixRow> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw Error(ErrorKind::InvalidArgument, "weight matrix needs at least one row");
  std::sort(rows_.begin(), rows_.end(), [](const MatrixRow& a, const MatrixRow& b) { return a.xi < b.xi; });
  const std::size_t K = rows_.front().full.max_index();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const auto& row = rows_[r];
    if (!(row.xi > 0.0)) throw Error(ErrorKind::InvalidArgument, "matrix parameters must be positive");
    if (row.full.max_index() != K) throw Error(ErrorKind::InvalidArgument, "matrix rows differ in length");
    if (r > 0) {
      if (same_xi(row.xi, rows_[r - 1].xi)) throw Error(ErrorKind::InvalidArgument, "duplicate matrix parameter");
      const auto lo = rows_[r - 1].full.log_values();
      const auto hi = row.full.log_values();
      for (std::size_t k = 0; k <= K; ++k) {
        if (lo[k] > hi[k] + kOrderTol * (1.0 + std::abs(hi[k])))
          throw Error(ErrorKind::NotTotallyOrdered,
                      "rows xi = " + std::to_string(rows_[r - 1].xi) + " and " + std::to_string(row.xi) +
                          " are not ordered at k = " + std::to_string(k));
      }
    }
  }

  // k! <= M_k up to equivalence: (k!/M_k)^{1/k} must stay bounded.
  double worst = 0.0;
  for (const auto& row : rows_) {
    std::vector<double> root(K + 1, 0.0);
    for (std::size_t k = 1; k <= K; ++k) {
      root[k] = (std::lgamma(static_cast<double>(k) + 1.0) - row.full.log_value(k)) / static_cast<double>(k);
      worst = std::max(worst, root[k]);
    }
    if (root[K] > 0.0 && tail_trend(root, K) == Trend::Diverging)
      throw Error(ErrorKind::InvalidArgument,
                  "(k!/M_k)^{1/k} is unbounded on row xi = " + std::to_string(row.xi));
  }
  factorial_root_bound_ = std::exp(worst);
}

WeightMatrix WeightMatrix::from_full(std::vector<std::pair<double, WeightSequence>> rows) {
  std::vector<MatrixRow> out;
  out.reserve(rows.size());
  for (auto& [xi, seq] : rows) {
    auto divided = divided_from_full(seq);
    out.push_back(MatrixRow{xi, std::move(seq), std::move(divided)});
  }
  return WeightMatrix(std::move(out));
}

WeightMatrix WeightMatrix::from_divided(std::vector<std::pair<double, WeightSequence>> rows) {
  std::vector<MatrixRow> out;
  out.reserve(rows.size());
  for (auto& [xi, seq] : rows) {
    auto full = full_from_divided(seq);
    out.push_back(MatrixRow{xi, std::move(full), std::move(seq)});
  }
  return WeightMatrix(std::move(out));
}

std::vector<double> WeightMatrix::xi_grid() const {
  std::vector<double> xs;
  xs.reserve(rows_.size());
  for (const auto& r : rows_) xs.push_back(r.xi);
  return xs;
}

const MatrixRow* WeightMatrix::find(double xi) const noexcept {
  for (const auto& r : rows_)
    if (same_xi(r.xi, xi)) return &r;
  return nullptr;
}

const MatrixRow& WeightMatrix::row(double xi) const {
  const auto* r = find(xi);
  if (!r) throw Error(ErrorKind::MissingRow, "no row for xi = " + std::to_string(xi));
  return *r;
}

std::vector<double> default_xi_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}; }

WeightMatrix associated_matrix(const WeightFunction& w, const std::vector<double>& xi_grid, std::size_t K) {
  std::vector<std::pair<double, WeightSequence>> rows;
  rows.reserve(xi_grid.size());
  for (double xi : xi_grid) {
    if (!(xi > 0.0)) throw Error(ErrorKind::InvalidArgument, "xi must be positive");
    std::vector<double> log_s(K + 1, 0.0);
    for (std::size_t k = 1; k <= K; ++k) log_s[k] = young_conjugate(w, xi * static_cast<double>(k)) / xi;
    // phi*(0) = 0 only under normalization; the row is anchored at S_0 = 1 regardless.
    log_s[0] = 0.0;
    rows.emplace_back(xi, WeightSequence::from_log_values(std::move(log_s)));
  }
  return WeightMatrix::from_full(std::move(rows));
}

SandwichFit fit_sandwich(const WeightMatrix& S, const WeightMatrix& Sbar, double xi, double B) {
  const auto& lower = S.row(xi / B).divided;
  const auto& mid = Sbar.row(xi).divided;
  const auto& upper_src = S.row(xi).divided;
  const auto& upper = Sbar.row(B * xi).divided;
  const std::size_t K = mid.max_index();

  std::vector<double> log_a(K + 1, -std::numeric_limits<double>::infinity());
  std::vector<double> log_c(K + 1, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k <= K; ++k) {
    log_a[k] = lower.log_value(k) - mid.log_value(k);
    if (k >= 1) log_c[k] = (upper_src.log_value(k) - upper.log_value(k)) / static_cast<double>(k);
  }
  log_c[0] = log_c[1];
  const auto a_run = running_max(log_a);
  const auto c_run = running_max(log_c);

  SandwichFit fit;
  fit.xi = xi;
  fit.B = B;
  fit.A = std::exp(std::max(0.0, a_run[K]));
  fit.C = std::exp(std::max(0.0, c_run[K]));
  fit.a_trend = tail_trend(a_run, K);
  fit.c_trend = tail_trend(c_run, K);
  fit.verified = fit.a_trend == Trend::Bounded && fit.c_trend == Trend::Bounded;
  return fit;
}

Regularization strong_regularization(const WeightMatrix& S) {
  std::vector<std::pair<double, WeightSequence>> rows;
  for (const auto& r : S.rows()) rows.emplace_back(r.xi, log_convex_minorant(r.divided));
  WeightMatrix bar = WeightMatrix::from_divided(std::move(rows));

  std::vector<SandwichFit> fits;
  bool any_candidate = false;
  bool any_verified = false;
  for (const auto& r : S.rows()) {
    SandwichFit chosen;
    chosen.xi = r.xi;
    for (double B = 2.0; S.find(r.xi / B) && S.find(r.xi * B); B *= 2.0) {
      any_candidate = true;
      auto fit = fit_sandwich(S, bar, r.xi, B);
      chosen = fit;
      if (fit.verified) break;
    }
    any_verified = any_verified || chosen.verified;
    fits.push_back(chosen);
  }
  if (any_candidate && !any_verified)
    throw Error(ErrorKind::SandwichUnverifiable, "no row pairing admits bounded sandwich constants");
  return Regularization{std::move(bar), std::move(fits)};
}

MatrixRow interleave_row(const WeightMatrix& Sbar, double xi) {
  const auto* partner = Sbar.find(2.0 * xi);
  if (!partner) throw Error(ErrorKind::MissingRow, "interleave needs row 2*xi = " + std::to_string(2.0 * xi));
  const auto& s = partner->divided;
  if (!s.log_convex()) throw Error(ErrorKind::NotLogConvex, "interleave needs a log-convex row");
  const std::size_t K = s.max_index();
  const auto sq = s.log_quotients();
  std::vector<double> q(K + 1, 0.0);
  // Quotient k of v repeats quotient ceil(k/2) of sbar^{2 xi}.
  for (std::size_t k = 1; k <= K; ++k) q[k] = sq[(k + 1) / 2];
  auto divided = WeightSequence::from_log_quotients(std::move(q));
  auto full = full_from_divided(divided);
  return MatrixRow{xi, std::move(full), std::move(divided)};
}

WeightMatrix interleave_matrix(const WeightMatrix& Sbar) {
  std::vector<std::pair<double, WeightSequence>> rows;
  for (const auto& r : Sbar.rows())
    if (Sbar.find(2.0 * r.xi)) rows.emplace_back(r.xi, interleave_row(Sbar, r.xi).divided);
  if (rows.empty()) throw Error(ErrorKind::MissingRow, "no row has its 2*xi partner");
  return WeightMatrix::from_divided(std::move(rows));
}

DoublingReport gamma_doubling_check(const WeightMatrix& Sbar, const WeightMatrix& V, double xi,
                                    const std::vector<double>& t_grid) {
  const auto& s = Sbar.row(2.0 * xi).divided;
  const auto& v = V.row(xi).divided;
  DoublingReport rep;
  for (double t : t_grid) {
    const std::size_t gs = gamma_of_m(s, t);
    const std::size_t gv = gamma_of_m(v, t);
    ++rep.checked;
    if (2 * gs != gv) {
      rep.holds = false;
      rep.first_violation = t;
      break;
    }
  }
  return rep;
}

SandwichH sandwich_H(const WeightMatrix& Sbar, const WeightMatrix& V, double xi, std::size_t K) {
  const auto& s = Sbar.row(xi).divided;
  const auto& v = V.row(xi).divided;
  const auto& s2 = Sbar.row(2.0 * xi).divided;
  K = std::min({K, s.max_index(), v.max_index()});
  double log_h = 0.0;
  double log_h_half = 0.0;
  double log_right = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    const double left = (s.log_value(k) - v.log_value(k)) / kk;
    const double right = (v.log_value(k) - s2.log_value(k)) / kk;
    log_h = std::max({log_h, left, right});
    log_right = std::max(log_right, right);
    if (k <= K / 2) log_h_half = log_h;
  }
  SandwichH out;
  out.H = std::exp(log_h);
  out.right_H = std::exp(log_right);
  out.K = K;
  out.growing = log_h - log_h_half > std::log1p(0.02);
  return out;
}

SuffixMinResult suffix_min_regularize(const std::vector<double>& mu, const std::vector<double>& nu, double C) {
  if (mu.size() != nu.size() || mu.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "suffix minimum inputs must have equal length >= 2");
  if (mu[0] != 1.0 || nu[0] != 1.0) throw Error(ErrorKind::InvalidArgument, "suffix minimum needs mu_0 = nu_0 = 1");
  if (!(C > 0.0)) throw Error(ErrorKind::InvalidArgument, "suffix minimum needs C > 0");
  for (std::size_t k = 1; k < mu.size(); ++k)
    if (mu[k] < mu[k - 1] || nu[k] < nu[k - 1])
      throw Error(ErrorKind::InvalidArgument, "suffix minimum inputs must be nondecreasing");

  const std::size_t K = nu.size() - 1;
  double prefix = 0.0;
  for (std::size_t k = 1; k <= K; ++k) {
    prefix = std::max(prefix, mu[k] / static_cast<double>(k));
    if (prefix > C * (nu[k] / static_cast<double>(k)) * (1.0 + 1e-12))
      throw Error(ErrorKind::HypothesisViolated,
                  "mu_j/j <= C nu_k/k fails at k = " + std::to_string(k));
  }

  SuffixMinResult out;
  out.ratios.assign(K + 1, 1.0);
  out.values.assign(K + 1, 1.0);
  double best = std::numeric_limits<double>::infinity();
  std::size_t arg = K;
  for (std::size_t k = K; k >= 1; --k) {
    const double r = nu[k] / static_cast<double>(k);
    if (r <= best) {
      best = r;
      arg = k;
    }
    out.ratios[k] = best;
    out.values[k] = (arg == k) ? nu[k] : std::min(nu[k], static_cast<double>(k) * best);
  }
  return out;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Undecidable: return "not decidable on stored grid";
  }
  return "unknown";
}

namespace {

// c_k = max_{j <= k} a_j - b_k (log domain, k = 1..K); optionally pointwise (j = k).
QuantifierWitness dominate(const std::vector<double>& a, const std::vector<double>& b, std::size_t K,
                           bool prefix) {
  std::vector<double> c(K + 1, 0.0);
  double pm = -std::numeric_limits<double>::infinity();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= K; ++k) {
    pm = prefix ? std::max(pm, a[k]) : a[k];
    c[k] = pm - b[k];
    worst = std::max(worst, c[k]);
  }
  c[0] = c[1];
  QuantifierWitness w;
  w.constant = std::exp(worst);
  w.trend = tail_trend(c, K);
  return w;
}

enum class Direction { Up, Down };

// For every row pick the nearest partner (scanning Up or Down from it) whose
// domination constant stays bounded.
QuantifiedCondition search(const WeightMatrix& M, std::size_t K, Direction dir, bool prefix, bool self_is_left,
                           const std::function<std::vector<double>(const MatrixRow&)>& left,
                           const std::function<std::vector<double>(const MatrixRow&)>& right) {
  QuantifiedCondition out;
  out.verdict = Verdict::Yes;
  const auto& rows = M.rows();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    QuantifierWitness best;
    best.xi = rows[r].xi;
    const auto self_series = self_is_left ? left(rows[r]) : right(rows[r]);
    for (std::size_t step = 0; step < rows.size(); ++step) {
      if (dir == Direction::Up && r + step >= rows.size()) break;
      if (dir == Direction::Down && step > r) break;
      const auto& partner = rows[dir == Direction::Up ? r + step : r - step];
      auto w = self_is_left ? dominate(self_series, right(partner), K, prefix)
                            : dominate(left(partner), self_series, K, prefix);
      w.xi = rows[r].xi;
      if (w.trend == Trend::Bounded) {
        w.partner_xi = partner.xi;
        best = w;
        break;
      }
      if (step == 0) best = w;
    }
    if (!best.partner_xi) out.verdict = Verdict::Undecidable;
    out.witnesses.push_back(best);
  }
  return out;
}

std::vector<double> quotient_over_index(const MatrixRow& r) {
  const auto q = r.full.log_quotients();
  std::vector<double> out(q.size(), 0.0);
  for (std::size_t k = 1; k < q.size(); ++k) out[k] = q[k] - std::log(static_cast<double>(k));
  return out;
}

std::vector<double> full_quotient(const MatrixRow& r) {
  const auto q = r.full.log_quotients();
  return std::vector<double>(q.begin(), q.end());
}

std::vector<double> divided_root(const MatrixRow& r) {
  const auto v = r.divided.log_values();
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k) out[k] = v[k] / static_cast<double>(k);
  return out;
}

std::vector<double> full_root(const MatrixRow& r) {
  const auto v = r.full.log_values();
  std::vector<double> out(v.size(), 0.0);
  for (std::size_t k = 1; k < v.size(); ++k) out[k] = v[k] / static_cast<double>(k);
  return out;
}

}  // namespace

GoodnessReport goodness(const WeightMatrix& M, std::size_t K) {
  K = std::min(K, M.max_index());
  if (K < 4) throw Error(ErrorKind::InvalidArgument, "goodness needs K >= 4");
  GoodnessReport rep;
  rep.K = K;
  // Roumieu: for all M exists N >= M. Beurling: for all N exists M <= N.
  rep.r_good = search(M, K, Direction::Up, true, true, quotient_over_index, quotient_over_index);
  rep.b_good = search(M, K, Direction::Down, true, false, quotient_over_index, quotient_over_index);
  rep.condition_d = search(M, K, Direction::Up, true, true, divided_root, divided_root);
  rep.condition_d_beurling = search(M, K, Direction::Down, true, false, divided_root, divided_root);
  rep.moderate_growth = search(M, K, Direction::Up, false, true, full_quotient, full_root);
  rep.moderate_growth_beurling = search(M, K, Direction::Down, false, false, full_quotient, full_root);
  return rep;
}

namespace {

QuantifiedCondition inclusion_search(const WeightMatrix& from, const WeightMatrix& to, std::size_t K,
                                     bool roumieu) {
  // Roumieu: every row of `from` needs a bounded partner in `to`.
  // Beurling: every row of `to` needs a bounded partner in `from`.
  const auto& subjects = roumieu ? from.rows() : to.rows();
  const auto& partners = roumieu ? to.rows() : from.rows();
  QuantifiedCondition out;
  out.verdict = Verdict::Yes;
  bool any_no = false;
  for (const auto& subj : subjects) {
    QuantifierWitness best;
    best.xi = subj.xi;
    bool all_diverge = true;
    for (const auto& part : partners) {
      const auto& m = roumieu ? subj.full : part.full;
      const auto& n = roumieu ? part.full : subj.full;
      std::vector<double> r(K + 1, 0.0);
      double worst = 0.0;
      for (std::size_t k = 1; k <= K; ++k) {
        r[k] = (m.log_value(k) - n.log_value(k)) / static_cast<double>(k);
        worst = std::max(worst, r[k]);
      }
      r[0] = r[1];
      QuantifierWitness w;
      w.xi = subj.xi;
      w.constant = std::exp(worst);
      w.trend = tail_trend(r, K);
      if (w.trend == Trend::Bounded) {
        w.partner_xi = part.xi;
        best = w;
        all_diverge = false;
        break;
      }
      if (w.trend == Trend::Inconclusive) all_diverge = false;
      best = w;
    }
    if (!best.partner_xi) {
      if (all_diverge) {
        any_no = true;
      } else if (out.verdict == Verdict::Yes) {
        out.verdict = Verdict::Undecidable;
      }
    }
    out.witnesses.push_back(best);
  }
  if (any_no) out.verdict = Verdict::No;
  return out;
}

}  // namespace

InclusionReport roumieu_inclusion(const WeightMatrix& M, const WeightMatrix& N) {
  const std::size_t K = std::min(M.max_index(), N.max_index());
  return InclusionReport{inclusion_search(M, N, K, true), inclusion_search(M, N, K, false)};
}

}  // namespace ultrajet
