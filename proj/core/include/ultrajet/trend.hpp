#pragma once

#include <span>

namespace ultrajet {

/// Verdict on the asymptotic behaviour of a positive sample sequence, read
/// from its tail (ordered toward the asymptotic end).
enum class Trend { Bounded, Diverging, Inconclusive };

const char* to_string(Trend t) noexcept;

struct TrendOptions {
  /// Relative growth over the window tolerated as "bounded".
  double growth_tol = 0.02;
  /// Relative step decrease still counted as monotone.
  double noise = 1e-9;
};

/// Bounded when the window grows by at most growth_tol, Diverging when it
/// grows by more and does so monotonically, Inconclusive otherwise.
Trend classify_trend(std::span<const double> window, const TrendOptions& opts = {});

/// Same test on log-values (growth measured as a difference of logs).
Trend classify_log_trend(std::span<const double> log_window, const TrendOptions& opts = {});

}  // namespace ultrajet
