#pragma once

#include <cstddef>
#include <functional>

namespace ultrajet {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

/// Adaptive Simpson with Richardson correction on [a, b]. Accepts a subinterval
/// once |S2 - S1| <= 15 * max(atol, rtol * |whole|) scaled by its share.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rtol, double atol = 0.0, int max_depth = 48);

struct TailIntegralOptions {
  double rtol = 1e-8;
  /// Width of the first two chunks; later chunks double, so chunk j ends at chunk * 2^j.
  double chunk = 0.6931471805599453;
  std::size_t max_chunks = 80;
  /// Chunks whose successive ratio stays >= 1 this many times in a row count as divergent.
  std::size_t divergence_run = 12;
};

/// integral_0^inf g(s) ds for g >= 0, accumulated chunk by chunk. Stops when
/// the geometric tail extrapolated from the last two chunks falls below
/// rtol * partial; that estimate is added to the result. Throws DivergentTail
/// when the chunks fail the Cauchy test within max_chunks.
QuadratureResult integrate_half_line(const std::function<double(double)>& g,
                                     const TailIntegralOptions& opts = {});

}  // namespace ultrajet
