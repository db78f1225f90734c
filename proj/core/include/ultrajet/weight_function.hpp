#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ultrajet/trend.hpp"

namespace ultrajet {

class WeightFunction;

/// omega(t) = c * t^a.
struct PowerFamily {
  double coefficient = 1.0;
  double exponent = 0.5;
};

/// omega(t) = t / (log t)^2 for t >= e^2, held at its minimum e^2/4 below.
struct LogSquaredDivisorFamily {};

/// omega(t) = max(0, log t)^s.
struct LogPowerFamily {
  double exponent = 2.0;
};

/// Samples (t_i, omega_i), interpolated linearly in log t and extended with
/// the last slope; constant omega_0 below t_0.
struct TabulatedFamily {
  std::vector<double> t;
  std::vector<double> omega;
};

/// kappa(t) = integral_1^inf inner(tu)/u^2 du.
struct KappaFamily {
  std::shared_ptr<const WeightFunction> inner;
};

/// An evaluable weight function omega >= 0 with phi(x) = omega(e^x).
///
/// With normalization on, omega(1) is subtracted and the result clamped at 0,
/// so omega vanishes on [0, 1] and phi(0) = 0.
class WeightFunction {
 public:
  using Family =
      std::variant<PowerFamily, LogSquaredDivisorFamily, LogPowerFamily, TabulatedFamily, KappaFamily>;

  WeightFunction(Family family, bool normalized);

  static WeightFunction power(double exponent, double coefficient = 1.0, bool normalized = false);
  static WeightFunction log_squared_divisor(bool normalized = false);
  static WeightFunction log_power(double exponent, bool normalized = false);
  static WeightFunction tabulated(std::vector<double> t, std::vector<double> omega, bool normalized);
  static WeightFunction kappa_of(const WeightFunction& inner, bool normalized = false);

  double operator()(double t) const;
  /// phi(x) = omega(e^x), evaluated without forming e^x where the family allows.
  double phi(double x) const;
  double raw(double t) const;
  double raw_phi(double x) const;
  /// log phi(x) without overflow for large x; -inf where phi vanishes.
  double log_phi(double x) const;

  bool normalized() const noexcept { return normalized_; }
  double offset() const noexcept { return offset_; }
  const Family& family() const noexcept { return family_; }
  std::string family_name() const;

 private:
  Family family_;
  bool normalized_ = false;
  double offset_ = 0.0;
};

/// phi*(y) = sup_{x >= 0} (x y - phi(x)) by golden-section search on the
/// concave objective. Throws BracketFailure if the maximiser runs past the
/// search bound.
double young_conjugate(const WeightFunction& w, double y);

/// kappa(t) = integral_1^inf omega(tu)/u^2 du. Throws DivergentTail when
/// omega is quasianalytic (the integral does not converge).
double kappa_transform(const WeightFunction& w, double t, double rtol = 1e-8);

struct ClassifyOptions {
  double little_o_epsilon = 0.05;
  TrendOptions trend{};
  /// Relative tolerance below which kappa/omega counts as flat.
  double kappa_rtol = 1e-8;
};

struct RatioSample {
  double t = 0.0;
  double ratio = 0.0;
};

struct KappaSample {
  double t = 0.0;
  double omega = 0.0;
  double kappa = 0.0;
};

struct WeightClassification {
  bool nonquasianalytic = false;
  double nonquasianalytic_integral = 0.0;

  bool little_o_of_t = false;
  double ratio_over_t_at_top = 0.0;

  bool strong_tested = false;
  bool strong = false;
  /// kappa <= C omega + C on the grid.
  double strong_constant = 0.0;
  Trend strong_trend = Trend::Inconclusive;
  /// kappa/omega over the last two decades when strongness fails.
  std::vector<RatioSample> strong_witness;

  bool concave_equivalent = false;
  /// omega(lambda t) <= C lambda omega(t) for t >= t0, lambda = 2^j.
  double concave_constant = 0.0;
  double concave_t0 = 0.0;
  Trend concave_trend = Trend::Inconclusive;
  std::optional<std::pair<double, double>> concave_violation;  // (lambda, t)

  std::vector<KappaSample> samples;
  std::vector<std::string> inconclusive;
};

/// Grid must span at least six decades.
WeightClassification classify(const WeightFunction& w, const std::vector<double>& grid,
                              const ClassifyOptions& opts = {});

struct EquivalenceReport {
  bool equivalent = false;
  double constant = 0.0;
  Trend forward_trend = Trend::Inconclusive;   // w1 / w2
  Trend backward_trend = Trend::Inconclusive;  // w2 / w1
  std::optional<RatioSample> violation;
  bool inconclusive = false;
};

/// Fits C with w1 <= C w2 + C and w2 <= C w1 + C on the grid, deciding
/// boundedness from the ratio trend over the last decade.
EquivalenceReport equivalent(const WeightFunction& w1, const WeightFunction& w2,
                             const std::vector<double>& grid, const TrendOptions& trend = {});

}  // namespace ultrajet
