#include "ultrajet/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ultrajet/error.hpp"
#include "ultrajet/quadrature.hpp"

namespace ultrajet {

namespace {

constexpr double kE2 = 7.38905609893065;  // e^2

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double tabulated_phi(const TabulatedFamily& f, double x) {
  // Interpolate in the log-abscissa.
  const std::size_t n = f.t.size();
  const double x0 = std::log(f.t.front());
  if (x <= x0) return f.omega.front();
  std::size_t hi = 1;
  while (hi < n - 1 && std::log(f.t[hi]) < x) ++hi;
  const double xa = std::log(f.t[hi - 1]);
  const double xb = std::log(f.t[hi]);
  const double slope = (f.omega[hi] - f.omega[hi - 1]) / (xb - xa);
  return f.omega[hi - 1] + slope * (x - xa);
}

}  // namespace

WeightFunction::WeightFunction(Family family, bool normalized)
    : family_(std::move(family)), normalized_(normalized) {
  std::visit(Overloaded{
                 [](const PowerFamily& f) {
                   if (!(f.exponent > 0.0) || !(f.exponent <= 1.0) || !(f.coefficient > 0.0))
                     throw Error(ErrorKind::InvalidArgument, "power weight needs 0 < a <= 1, c > 0");
                 },
                 [](const LogSquaredDivisorFamily&) {},
                 [](const LogPowerFamily& f) {
                   if (!(f.exponent > 0.0))
                     throw Error(ErrorKind::InvalidArgument, "log-power weight needs s > 0");
                 },
                 [](const TabulatedFamily& f) {
                   if (f.t.size() < 2 || f.t.size() != f.omega.size())
                     throw Error(ErrorKind::InvalidArgument, "tabulated weight needs >= 2 samples");
                   for (std::size_t i = 0; i < f.t.size(); ++i) {
                     if (!(f.t[i] > 0.0) || (i > 0 && !(f.t[i] > f.t[i - 1])))
                       throw Error(ErrorKind::InvalidArgument, "tabulated abscissae must increase");
                     if (!(f.omega[i] >= 0.0) || (i > 0 && f.omega[i] < f.omega[i - 1]))
                       throw Error(ErrorKind::InvalidArgument, "tabulated values must be nondecreasing");
                   }
                 },
                 [](const KappaFamily& f) {
                   if (!f.inner) throw Error(ErrorKind::InvalidArgument, "kappa weight needs an inner weight");
                 },
             },
             family_);
  if (normalized_) offset_ = raw(1.0);
}

WeightFunction WeightFunction::power(double exponent, double coefficient, bool normalized) {
  return WeightFunction(PowerFamily{coefficient, exponent}, normalized);
}

WeightFunction WeightFunction::log_squared_divisor(bool normalized) {
  return WeightFunction(LogSquaredDivisorFamily{}, normalized);
}

WeightFunction WeightFunction::log_power(double exponent, bool normalized) {
  return WeightFunction(LogPowerFamily{exponent}, normalized);
}

WeightFunction WeightFunction::tabulated(std::vector<double> t, std::vector<double> omega, bool normalized) {
  return WeightFunction(TabulatedFamily{std::move(t), std::move(omega)}, normalized);
}

WeightFunction WeightFunction::kappa_of(const WeightFunction& inner, bool normalized) {
  return WeightFunction(KappaFamily{std::make_shared<const WeightFunction>(inner)}, normalized);
}

double WeightFunction::raw(double t) const {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "weight evaluated at t < 0");
  return std::visit(Overloaded{
                        [t](const PowerFamily& f) { return f.coefficient * std::pow(t, f.exponent); },
                        [t](const LogSquaredDivisorFamily&) {
                          if (t <= kE2) return kE2 / 4.0;
                          const double l = std::log(t);
                          return t / (l * l);
                        },
                        [t](const LogPowerFamily& f) {
                          return t <= 1.0 ? 0.0 : std::pow(std::log(t), f.exponent);
                        },
                        [t](const TabulatedFamily& f) {
                          return t <= f.t.front() ? f.omega.front() : tabulated_phi(f, std::log(t));
                        },
                        [t](const KappaFamily& f) {
                          if (t == 0.0) return (*f.inner)(0.0);
                          return kappa_transform(*f.inner, t);
                        },
                    },
                    family_);
}

double WeightFunction::raw_phi(double x) const {
  return std::visit(Overloaded{
                        [x](const PowerFamily& f) { return f.coefficient * std::exp(f.exponent * x); },
                        [x](const LogSquaredDivisorFamily&) {
                          if (x <= 2.0) return kE2 / 4.0;
                          return std::exp(x) / (x * x);
                        },
                        [x](const LogPowerFamily& f) { return x <= 0.0 ? 0.0 : std::pow(x, f.exponent); },
                        [x](const TabulatedFamily& f) { return tabulated_phi(f, x); },
                        [this, x](const KappaFamily&) { return raw(std::exp(x)); },
                    },
                    family_);
}

double WeightFunction::log_phi(double x) const {
  const double raw_log = std::visit(
      Overloaded{
          [x](const PowerFamily& f) { return std::log(f.coefficient) + f.exponent * x; },
          [x](const LogSquaredDivisorFamily&) {
            if (x <= 2.0) return std::log(kE2 / 4.0);
            return x - 2.0 * std::log(x);
          },
          [x](const LogPowerFamily& f) {
            return x <= 0.0 ? -std::numeric_limits<double>::infinity() : f.exponent * std::log(x);
          },
          [this, x](const TabulatedFamily&) { return std::log(raw_phi(x)); },
          [this, x](const KappaFamily&) { return std::log(raw_phi(x)); },
      },
      family_);
  if (!normalized_ || offset_ <= 0.0) return raw_log;
  if (raw_log <= std::log(offset_)) return -std::numeric_limits<double>::infinity();
  return raw_log + std::log1p(-offset_ * std::exp(-raw_log));
}

double WeightFunction::operator()(double t) const {
  const double v = raw(t);
  return normalized_ ? std::max(0.0, v - offset_) : v;
}

double WeightFunction::phi(double x) const {
  const double v = raw_phi(x);
  return normalized_ ? std::max(0.0, v - offset_) : v;
}

std::string WeightFunction::family_name() const {
  return std::visit(Overloaded{
                        [](const PowerFamily&) { return std::string("power"); },
                        [](const LogSquaredDivisorFamily&) { return std::string("t_over_log_squared"); },
                        [](const LogPowerFamily&) { return std::string("log_power"); },
                        [](const TabulatedFamily&) { return std::string("tabulated"); },
                        [](const KappaFamily&) { return std::string("kappa"); },
                    },
                    family_);
}

double young_conjugate(const WeightFunction& w, double y) {
  if (!(y >= 0.0)) throw Error(ErrorKind::InvalidArgument, "Young conjugate needs y >= 0");
  const auto g = [&](double x) {
    const double p = w.phi(x);
    return std::isfinite(p) ? x * y - p : -std::numeric_limits<double>::infinity();
  };

  constexpr double kSearchBound = 1e6;
  double upper = 1.0;
  while (g(2.0 * upper) >= g(upper)) {
    upper *= 2.0;
    if (upper > kSearchBound)
      throw Error(ErrorKind::BracketFailure,
                  "maximiser of x*y - phi(x) beyond x = 1e6 for y = " + std::to_string(y));
  }

  // Golden-section search on [0, 2 * upper].
  constexpr double kInvPhi = 0.6180339887498949;
  double a = 0.0;
  double b = 2.0 * upper;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double gc = g(c);
  double gd = g(d);
  for (int it = 0; it < 300 && (b - a) > 1e-14 * (1.0 + b); ++it) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - kInvPhi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + kInvPhi * (b - a);
      gd = g(d);
    }
  }
  return std::max({gc, gd, g(0.5 * (a + b)), g(0.0)});
}

double kappa_transform(const WeightFunction& w, double t, double rtol) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "kappa needs t > 0");
  // u = e^s turns integral_1^inf omega(tu)/u^2 du into integral_0^inf omega(t e^s) e^{-s} ds.
  TailIntegralOptions opts;
  opts.rtol = rtol;
  const double lt = std::log(t);
  const auto r = integrate_half_line([&](double s) { return std::exp(w.log_phi(lt + s) - s); }, opts);
  return r.value;
}

namespace {

void require_decades(const std::vector<double>& grid, double decades) {
  if (grid.size() < 2 || !(grid.front() > 0.0))
    throw Error(ErrorKind::InvalidArgument, "grid must be positive with >= 2 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::InvalidArgument, "grid must increase");
  if (std::log10(grid.back() / grid.front()) < decades - 1e-9)
    throw Error(ErrorKind::InvalidArgument, "grid must span at least " + std::to_string(decades) + " decades");
}

}  // namespace

WeightClassification classify(const WeightFunction& w, const std::vector<double>& grid,
                              const ClassifyOptions& opts) {
  require_decades(grid, 6.0);
  WeightClassification out;
  const double t_top = grid.back();
  const double last_decade = t_top / 10.0;
  const double last_two = t_top / 100.0;

  try {
    out.nonquasianalytic_integral = kappa_transform(w, 1.0, opts.kappa_rtol);
    out.nonquasianalytic = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DivergentTail) throw;
    out.nonquasianalytic = false;
  }

  out.samples.reserve(grid.size());
  for (double t : grid) {
    KappaSample s{t, w(t), 0.0};
    if (out.nonquasianalytic) s.kappa = kappa_transform(w, t, opts.kappa_rtol);
    out.samples.push_back(s);
  }

  // omega(t)/t over the last decade.
  {
    std::vector<double> q;
    for (const auto& s : out.samples)
      if (s.t >= last_decade) q.push_back(s.omega / s.t);
    bool decreasing = true;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (q[i] > q[i - 1] * (1.0 + opts.trend.noise)) decreasing = false;
    out.ratio_over_t_at_top = q.back();
    out.little_o_of_t = decreasing && q.back() < opts.little_o_epsilon;
  }

  if (out.nonquasianalytic) {
    out.strong_tested = true;
    std::vector<double> window;
    double top_max = 0.0;
    double global = 0.0;
    for (const auto& s : out.samples) {
      global = std::max(global, s.kappa / (s.omega + 1.0));
      if (s.t >= last_decade && s.omega > 0.0) {
        window.push_back(s.kappa / s.omega);
        top_max = std::max(top_max, window.back());
      }
      if (s.t >= last_two && s.omega > 0.0) out.strong_witness.push_back({s.t, s.kappa / s.omega});
    }
    if (window.size() < 2) {
      out.strong_trend = Trend::Inconclusive;
    } else {
      out.strong_trend = classify_trend(window, opts.trend);
    }
    switch (out.strong_trend) {
      case Trend::Bounded:
        out.strong = true;
        out.strong_constant = std::max(top_max, global);
        out.strong_witness.clear();
        break;
      case Trend::Diverging:
        out.strong = false;
        out.strong_constant = top_max;
        break;
      case Trend::Inconclusive:
        out.inconclusive.push_back("kappa/omega is non-monotone at the grid top");
        break;
    }
  }

  // omega(lambda t) <= C lambda omega(t), lambda = 1, 2, ..., 2^10.
  {
    std::size_t i0 = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (out.samples[i].omega >= 1.0) {
        i0 = i;
        break;
      }
    if (i0 == grid.size())
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (out.samples[i].omega > 0.0) {
          i0 = i;
          break;
        }
    if (i0 == grid.size()) {
      out.inconclusive.push_back("omega vanishes on the whole grid");
    } else {
      out.concave_t0 = grid[i0];
      std::vector<double> per_lambda;
      std::vector<double> argmax_t;
      for (int j = 0; j <= 10; ++j) {
        const double lambda = std::ldexp(1.0, j);
        double best = 0.0;
        double best_t = grid[i0];
        for (std::size_t i = i0; i < grid.size(); ++i) {
          const double r = w(lambda * grid[i]) / (lambda * out.samples[i].omega);
          if (r > best) {
            best = r;
            best_t = grid[i];
          }
        }
        per_lambda.push_back(best);
        argmax_t.push_back(best_t);
      }
      out.concave_trend = classify_trend(std::span<const double>(per_lambda).subspan(5), opts.trend);
      out.concave_constant = *std::max_element(per_lambda.begin(), per_lambda.end());
      if (out.concave_trend == Trend::Bounded) {
        out.concave_equivalent = true;
      } else if (out.concave_trend == Trend::Diverging) {
        out.concave_violation = std::make_pair(1024.0, argmax_t.back());
      } else {
        out.inconclusive.push_back("omega(lambda t)/(lambda omega(t)) is non-monotone in lambda");
      }
    }
  }

  if (out.strong && !out.concave_equivalent)
    out.inconclusive.push_back("strong verdict without a concave-equivalence fit");
  return out;
}

EquivalenceReport equivalent(const WeightFunction& w1, const WeightFunction& w2,
                             const std::vector<double>& grid, const TrendOptions& trend) {
  require_decades(grid, 1.0);
  EquivalenceReport rep;
  const double last_decade = grid.back() / 10.0;
  std::vector<double> fwd;
  std::vector<double> bwd;
  double global = 0.0;
  double top = 0.0;
  RatioSample worst_fwd;
  RatioSample worst_bwd;
  for (double t : grid) {
    const double a = w1(t);
    const double b = w2(t);
    global = std::max({global, a / (b + 1.0), b / (a + 1.0)});
    if (t >= last_decade && a > 0.0 && b > 0.0) {
      fwd.push_back(a / b);
      bwd.push_back(b / a);
      top = std::max({top, a / b, b / a});
      worst_fwd = {t, a / b};
      worst_bwd = {t, b / a};
    }
  }
  if (fwd.size() < 2) {
    rep.inconclusive = true;
    return rep;
  }
  rep.forward_trend = classify_trend(fwd, trend);
  rep.backward_trend = classify_trend(bwd, trend);
  if (rep.forward_trend == Trend::Diverging) rep.violation = worst_fwd;
  if (rep.backward_trend == Trend::Diverging) rep.violation = worst_bwd;
  if (rep.forward_trend == Trend::Bounded && rep.backward_trend == Trend::Bounded) {
    rep.equivalent = true;
    rep.constant = std::max(top, global);
  } else if (!rep.violation) {
    rep.inconclusive = true;
  }
  return rep;
}

}  // namespace ultrajet
