#include "ultrajet/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "ultrajet/error.hpp"

namespace ultrajet {

namespace {

double binom(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t j = 1; j <= k; ++j) r = r * static_cast<double>(n - k + j) / static_cast<double>(j);
  return r;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Largest M the fitted bounds may use before the growth counts as unbounded.
constexpr double kMaxFittedM = 1e8;

}  // namespace

ExtensionRows extension_rows(const WeightMatrix& Sbar, const WeightMatrix& V, const WeightMatrix& Wm, double xi,
                             double w_xi) {
  const auto& vr = V.row(xi);
  return ExtensionRows{xi, Sbar.row(2.0 * xi).divided, Sbar.row(4.0 * xi).divided, vr.full, vr.divided,
                       Wm.row(w_xi).full};
}

double ExtensionPlan::threshold() const noexcept { return std::max({C_0, C_1, C_2}) * rho; }

std::size_t local_degree(const WeightSequence& s2, double L, double d) {
  if (!(L > 0.0) || !(d > 0.0)) throw Error(ErrorKind::InvalidArgument, "local degree needs L > 0 and d > 0");
  const std::size_t g = gamma_of_m(s2, L * d);
  return g == 0 ? 0 : 2 * g - 1;
}

LocalDegree local_degree_capped(const WeightSequence& s2, double L, double d, std::size_t cap) {
  if (!(L > 0.0) || !(d > 0.0)) throw Error(ErrorKind::InvalidArgument, "local degree needs L > 0 and d > 0");
  const std::size_t gcap = (cap + 1) / 2 + 1;
  const std::size_t g = gamma_of_m_capped(s2, L * d, gcap);
  const std::size_t raw = g == 0 ? 0 : 2 * g - 1;
  return LocalDegree{std::min(raw, cap), raw > cap};
}

ExtensionFunction::ExtensionFunction(UltraJet F, ExtensionRows rows, ExtensionPlan plan, Partition part)
    : F_(std::move(F)), rows_(std::move(rows)), plan_(plan), part_(std::move(part)) {}

ExtensionFunction assemble(const UltraJet& F, const ExtensionRows& rows, const ExtensionPlan& plan,
                           const AssembleOptions& opts) {
  if (!(plan.L > 0.0) || plan.p_fold < 1) throw Error(ErrorKind::PlanInvalid, "plan needs L > 0 and p_fold >= 1");
  if (!plan.valid() && !opts.allow_invalid_plan)
    throw Error(ErrorKind::PlanInvalid, "L = " + std::to_string(plan.L) + " does not exceed max(C_0, C_1, C_2) rho = " +
                                            std::to_string(plan.threshold()));
  for (const auto& [a, b] : F.set().components()) {
    if (!F.find(a) || !F.find(b))
      throw Error(ErrorKind::InvalidArgument, "jet must be stored at every component endpoint of E");
  }
  if (!rows.s2.log_convex() || !rows.s4.log_convex())
    throw Error(ErrorKind::NotLogConvex, "extension rows must be log-convex");

  auto cover = build_cover(F.set(), plan.r_cov, opts.cover);
  const auto k = extension_constants(cover);
  Partition part(std::move(cover), plan.p_fold);
  ExtensionFunction f(F, rows, plan, std::move(part));

  f.d_max_ = std::min(k.r_0 / (3.0 * k.B_1), 1.0 / (3.0 * plan.L * rows.s2.value(1)));
  if (!(f.d_max_ > f.d_min()))
    throw Error(ErrorKind::EmptyCover, "region d < d_max lies below the finest cover scale");

  for (const auto& q : f.part_.cover().intervals) {
    const auto np = distance_and_nearest(F.set(), q.center);
    const auto deg = local_degree_capped(rows.s2, plan.L, np.distance, F.alpha_max());
    f.centers_nearest_.push_back(np.nearest);
    f.centers_d_.push_back(np.distance);
    f.degrees_.push_back(deg);
    f.taylor_.push_back(taylor_poly(F, np.nearest, deg.p));
    if (deg.capped) ++f.capped_;
  }

  if (plan.cutoff) {
    // One bump per group of components; supports stay within d < 2 d_max / 3.
    const double m = f.d_max_ / 3.0;
    const auto& comps = F.set().components();
    double lo = comps.front().first, hi = comps.front().second;
    auto flush = [&](double a, double b) {
      f.cut_.push_back(build_bump(BumpSpec{a - m, b + m, m, plan.p_fold}));
    };
    for (std::size_t i = 1; i < comps.size(); ++i) {
      if (comps[i].first - hi <= 4.0 * m) {
        hi = comps[i].second;
      } else {
        flush(lo, hi);
        lo = comps[i].first;
        hi = comps[i].second;
      }
    }
    flush(lo, hi);
  }
  return f;
}

bool ExtensionFunction::in_region(double x) const noexcept {
  const auto np = distance_and_nearest(set(), x);
  if (np.distance == 0.0) return F_.find(x).has_value();
  if (np.distance < d_min()) return false;
  return plan_.cutoff || np.distance < d_max_;
}

ExtensionFunction::Local ExtensionFunction::local(double x) const {
  const auto np = distance_and_nearest(set(), x);
  if (np.distance == 0.0) throw Error(ErrorKind::InvalidArgument, "local data is defined off E");
  const auto deg = local_degree_capped(rows_.s2, plan_.L, np.distance, F_.alpha_max());
  return Local{np.distance, np.nearest, deg, taylor_poly(F_, np.nearest, deg.p)};
}

std::vector<ExtensionFunction::Term> ExtensionFunction::terms(double x, std::size_t alpha_max) const {
  const auto loc = local(x);
  std::vector<Term> out;
  for (auto& lt : part_.phi_derivs(x, alpha_max)) {
    Term t;
    t.index = lt.index;
    t.phi = std::move(lt.derivs);
    // Same base point: exact coefficient subtraction.
    t.diff_poly = taylor_[lt.index] - loc.T;
    t.diff.resize(alpha_max + 1);
    for (std::size_t b = 0; b <= alpha_max; ++b) t.diff[b] = t.diff_poly.derivative_at(x, b);
    t.d_center = centers_d_[lt.index];
    t.degree = degrees_[lt.index].p;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<double> ExtensionFunction::correction(double x, std::size_t alpha_max) const {
  std::vector<double> c(alpha_max + 1, 0.0);
  for (const auto& t : terms(x, alpha_max))
    for (std::size_t a = 0; a <= alpha_max; ++a)
      for (std::size_t b = 0; b <= a; ++b) c[a] += binom(a, b) * t.phi[a - b] * t.diff[b];
  return c;
}

std::vector<double> ExtensionFunction::uncut(double x, std::size_t alpha_max) const {
  const auto np = distance_and_nearest(set(), x);
  if (np.distance == 0.0) {
    if (!F_.find(x)) throw Error(ErrorKind::OutsideRegion, "x lies in E but carries no stored jet");
    if (alpha_max > F_.alpha_max()) throw Error(ErrorKind::OrderOverflow, "order exceeds the stored jet");
    const auto& v = F_.values_at(*F_.find(x));
    return std::vector<double>(v.begin(), v.begin() + static_cast<long>(alpha_max) + 1);
  }
  if (np.distance < d_min() || np.distance >= d_max_)
    throw Error(ErrorKind::OutsideRegion, "x = " + std::to_string(x) + " is outside 0 < d(x) < d_max");
  const auto loc = local(x);
  auto out = correction(x, alpha_max);
  for (std::size_t a = 0; a <= alpha_max; ++a) out[a] += loc.T.derivative_at(x, a);
  return out;
}

std::vector<double> ExtensionFunction::cutoff_derivs(double x, std::size_t alpha_max) const {
  std::vector<double> c(alpha_max + 1, 0.0);
  for (const auto& b : cut_)
    for (std::size_t a = 0; a <= alpha_max; ++a) c[a] += b(x, a);
  return c;
}

std::vector<double> ExtensionFunction::derivatives(double x, std::size_t alpha_max) const {
  if (alpha_max > plan_.p_fold)
    throw Error(ErrorKind::InvalidArgument, "derivative order exceeds the partition smoothness p_fold");
  if (!plan_.cutoff) return uncut(x, alpha_max);
  const double d = distance_and_nearest(set(), x).distance;
  if (d == 0.0) return uncut(x, alpha_max);
  if (d < d_min()) throw Error(ErrorKind::OutsideRegion, "x is below the finest cover scale");
  const auto chi = cutoff_derivs(x, alpha_max);
  if (std::all_of(chi.begin(), chi.end(), [](double v) { return v == 0.0; }))
    return std::vector<double>(alpha_max + 1, 0.0);
  const auto g = uncut(x, alpha_max);
  std::vector<double> out(alpha_max + 1, 0.0);
  for (std::size_t a = 0; a <= alpha_max; ++a)
    for (std::size_t j = 0; j <= a; ++j) out[a] += binom(a, j) * g[j] * chi[a - j];
  return out;
}

double ExtensionFunction::eval_derivative(double x, std::size_t alpha) const { return derivatives(x, alpha)[alpha]; }

std::vector<double> region_samples(const ExtensionFunction& f, std::size_t uniform, std::uint64_t seed, int j_max) {
  std::vector<double> xs;
  const auto& E = f.set();
  auto keep = [&](double x) {
    const double d = distance_and_nearest(E, x).distance;
    return d > 0.0 && d >= f.d_min() && d < f.d_max();
  };
  for (const auto& [a, b] : E.components()) {
    for (int j = 0; j <= j_max; ++j) {
      const double s = std::ldexp(1.0, -j);
      if (keep(a - s)) xs.push_back(a - s);
      if (keep(b + s)) xs.push_back(b + s);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(E.lo() - f.d_max(), E.hi() + f.d_max());
  std::size_t got = 0;
  for (std::size_t tries = 0; got < uniform && tries < 100 * uniform + 100; ++tries) {
    const double x = U(rng);
    if (keep(x)) {
      xs.push_back(x);
      ++got;
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

namespace {

// Accumulates log ratios per order and per dyadic distance level.
struct Accumulator {
  BoundCheck check;
  std::vector<double> per_alpha;
  std::map<int, double> per_level;

  Accumulator(std::string name, std::size_t A) : per_alpha(A + 1, kNegInf) { check.name = std::move(name); }

  void add(double log_ratio, std::size_t alpha, double x, double d) {
    ++check.evaluated;
    if (log_ratio == kNegInf) return;
    if (log_ratio > per_alpha[alpha]) per_alpha[alpha] = log_ratio;
    const int level = -std::ilogb(d);
    auto [it, fresh] = per_level.emplace(level, log_ratio);
    if (!fresh) it->second = std::max(it->second, log_ratio);
    const double best = check.worst ? std::log(check.max_ratio) : kNegInf;
    if (log_ratio > best) {
      check.max_ratio = std::exp(log_ratio);
      check.worst = std::make_pair(x, alpha);
    }
  }

  static Trend tail(const std::vector<double>& v) {
    std::vector<double> finite;
    for (double x : v)
      if (x != kNegInf) finite.push_back(x);
    if (finite.size() < 3) return Trend::Bounded;
    const std::size_t lo = finite.size() / 2;
    return classify_log_trend(std::span<const double>(finite).subspan(lo));
  }

  BoundCheck finish() {
    check.per_alpha.clear();
    for (double v : per_alpha) check.per_alpha.push_back(v == kNegInf ? 0.0 : std::exp(v));
    check.alpha_trend = tail(per_alpha);
    std::vector<double> lv;
    for (const auto& [lvl, v] : per_level) lv.push_back(v);
    check.d_trend = tail(lv);
    check.within_constant = check.max_ratio <= 1.0;
    check.pass = std::isfinite(check.max_ratio) && check.alpha_trend != Trend::Diverging &&
                 check.d_trend != Trend::Diverging;
    return check;
  }
};

double log_abs(double v) { return v == 0.0 ? kNegInf : std::log(std::abs(v)); }

struct Sample {
  double x, d;
  ExtensionFunction::Local loc;
  std::vector<ExtensionFunction::Term> terms;
  std::vector<double> corr;
};

}  // namespace

bool BoundReport::all_pass() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.pass; });
}

const BoundCheck* BoundReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

BoundReport verify_bounds(const ExtensionFunction& f, const std::vector<double>& samples, std::size_t alpha_max) {
  const auto& plan = f.plan();
  const auto& R = f.rows();
  const std::size_t A = std::min({alpha_max, plan.p_fold, f.jet().alpha_max(), R.W.max_index() - 1,
                                  R.V.max_index() - 1});
  const double logC = std::log(plan.C);
  const double L = plan.L;

  std::vector<Sample> pts;
  for (double x : samples) {
    const double d = distance_and_nearest(f.set(), x).distance;
    if (d == 0.0 || d < f.d_min() || d >= f.d_max()) continue;
    Sample s{x, d, f.local(x), f.terms(x, A), {}};
    s.corr.assign(A + 1, 0.0);
    for (const auto& t : s.terms)
      for (std::size_t a = 0; a <= A; ++a)
        for (std::size_t b = 0; b <= a; ++b) s.corr[a] += binom(a, b) * t.phi[a - b] * t.diff[b];
    pts.push_back(std::move(s));
  }

  BoundReport rep;
  rep.alpha_max = A;
  rep.samples = pts.size();
  rep.plan_valid = f.plan_valid();
  rep.capped_intervals = f.capped_intervals();

  auto lgam = [](std::size_t k) { return std::lgamma(static_cast<double>(k) + 1.0); };
  // Full sbar^{2 xi}_beta = beta! sbar_beta.
  auto logS2 = [&](std::size_t b) { return lgam(b) + R.s2.log_value(b); };

  Accumulator growth("taylor_growth", A), approx("taylor_approximation", A), at_center("difference_at_center", A),
      at_point("difference_at_point", A);
  for (const auto& s : pts) {
    const auto& loc = s.loc;
    for (std::size_t a = 0; a <= A; ++a) {
      const double t = loc.T.derivative_at(s.x, a);
      growth.add(log_abs(t) - (logC + static_cast<double>(a + 1) * std::log(2.0 * L) + R.V.log_value(a)), a, s.x,
                 s.d);
      if (a < loc.degree.p) {
        const double lhs = t - f.jet().value(loc.nearest, a);
        approx.add(log_abs(lhs) - (logC + static_cast<double>(a + 1) * std::log(2.0 * L) + lgam(a) +
                                   R.v.log_value(a + 1) + std::log(s.d)),
                   a, s.x, s.d);
      }
    }
    const auto h3 = log_h_of_m_bounded(R.s2, 3.0 * L * s.d);
    for (const auto& t : s.terms) {
      const auto hc = log_h_of_m_bounded(R.s2, L * t.d_center);
      for (std::size_t b = 0; b <= A; ++b) {
        const double lhs = log_abs(t.diff[b]);
        if (lhs == kNegInf) {
          at_center.add(kNegInf, b, s.x, s.d);
          at_point.add(kNegInf, b, s.x, s.d);
          continue;
        }
        at_center.add(lhs - (logC + static_cast<double>(b + 1) * std::log(L) + logS2(b) + hc.value), b, s.x, s.d);
        at_point.add(lhs - (logC + static_cast<double>(b + 1) * std::log(3.0 * L) + logS2(b) + h3.value), b, s.x,
                     s.d);
        if (hc.at_cutoff) ++at_center.check.rhs_at_cutoff;
        if (h3.at_cutoff) ++at_point.check.rhs_at_cutoff;
      }
    }
  }

  // Fitted bounds: one M for all orders, the smallest on a geometric grid whose
  // residual log ratio - (alpha + 1) log M stops growing over the upper orders.
  auto fit = [&](const std::string& name, auto lhs_of, bool with_h) {
    std::vector<double> top(A + 1, kNegInf);
    std::size_t cut = 0;
    std::vector<std::vector<double>> base(pts.size(), std::vector<double>(A + 1, kNegInf));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& s = pts[i];
      double lh = 0.0;
      if (with_h) {
        const auto h = log_h_of_m_bounded(R.s4, plan.K_3() * L * s.d);
        lh = h.value;
        if (h.at_cutoff) ++cut;
      }
      for (std::size_t a = 0; a <= A; ++a) {
        const double l = log_abs(lhs_of(s, a));
        if (l == kNegInf) continue;
        base[i][a] = l - (logC + R.W.log_value(a) + lh);
        top[a] = std::max(top[a], base[i][a]);
      }
    }
    const double step = std::log(2.0) / 8.0;
    std::optional<double> logM;
    for (double lm = 0.0; lm <= std::log(kMaxFittedM) + 1e-12; lm += step) {
      std::vector<double> res(A + 1, kNegInf);
      for (std::size_t a = 0; a <= A; ++a)
        if (top[a] != kNegInf) res[a] = top[a] - static_cast<double>(a + 1) * lm;
      if (Accumulator::tail(res) == Trend::Bounded) {
        logM = lm;
        break;
      }
    }
    Accumulator acc(name, A);
    const double lm = logM.value_or(std::log(kMaxFittedM));
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t a = 0; a <= A; ++a)
        acc.add(base[i][a] == kNegInf ? kNegInf : base[i][a] - static_cast<double>(a + 1) * lm, a, pts[i].x,
                pts[i].d);
    auto c = acc.finish();
    c.fitted = logM ? std::exp(*logM) : std::numeric_limits<double>::infinity();
    c.rhs_at_cutoff = cut;
    c.pass = c.pass && logM.has_value();
    return c;
  };

  rep.checks.push_back(growth.finish());
  rep.checks.push_back(approx.finish());
  rep.checks.push_back(at_center.finish());
  rep.checks.push_back(at_point.finish());
  rep.checks.push_back(fit("correction", [](const Sample& s, std::size_t a) { return s.corr[a]; }, true));
  rep.checks.push_back(fit(
      "global", [](const Sample& s, std::size_t a) { return s.loc.T.derivative_at(s.x, a) + s.corr[a]; }, false));
  return rep;
}

LimitReport boundary_limits(const ExtensionFunction& f, double a, std::size_t alpha_max, int j_max) {
  if (!f.jet().find(a)) throw Error(ErrorKind::InvalidArgument, "limit base point must carry a stored jet");
  const std::size_t A = std::min({alpha_max, f.plan().p_fold, f.jet().alpha_max()});
  const auto& E = f.set();
  // Step off E: to the right unless that stays inside E.
  const double dir = E.contains(a + std::ldexp(1.0, -j_max)) ? -1.0 : 1.0;
  const auto& F = f.jet();
  const double K3L = f.plan().K_3() * f.plan().L;

  LimitReport rep;
  rep.base = a;
  rep.monotone.assign(A + 1, true);
  std::vector<double> last(A + 1, std::numeric_limits<double>::infinity());
  std::vector<std::vector<double>> ratios;
  for (int j = 0; j <= j_max; ++j) {
    const double x = a + dir * std::ldexp(1.0, -j);
    const double d = distance_and_nearest(E, x).distance;
    if (d >= f.d_max() || d == 0.0) continue;
    if (d < f.d_min() || x == a) {
      rep.precision_floor = j;
      break;
    }
    const auto g = f.derivatives(x, A);
    const double lh = log_h_of_m_bounded(f.rows().s4, K3L * d).value;
    const double env = d + std::exp(lh);
    std::vector<double> r(A + 1, 0.0);
    for (std::size_t al = 0; al <= A; ++al) {
      const double target = F.value(a, al);
      const double e = std::abs(g[al] - target);
      // Rounding floor of the evaluation relative to the size of the values involved.
      const double floor = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(target) + std::abs(g[al]));
      if (e > last[al] + floor) rep.monotone[al] = false;
      last[al] = e;
      r[al] = e / env;
      rep.rows.push_back({j, x, d, al, e, env});
    }
    ratios.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < ratios.size(); ++i)
    for (double v : ratios[i]) {
      rep.fitted = std::max(rep.fitted, v);
      if (i >= ratios.size() / 2) rep.fitted_tail = std::max(rep.fitted_tail, v);
    }
  // Convergence: the last error per order is far below the first.
  for (std::size_t al = 0; al <= A; ++al) {
    double first = -1.0, lastv = -1.0;
    for (const auto& row : rep.rows)
      if (row.alpha == al) {
        if (first < 0.0) first = row.error;
        lastv = row.error;
      }
    if (first > 0.0 && !(lastv <= 1e-6 * first + 1e-300)) rep.converges = false;
  }
  return rep;
}

}  // namespace ultrajet
