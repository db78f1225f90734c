#include "ultrajet/quadrature.hpp"

#include <cmath>
#include <string>

#include "ultrajet/error.hpp"

namespace ultrajet {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  std::size_t evals = 0;
  double err = 0.0;

  double eval(double x) {
    ++evals;
    return f(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps,
                 int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (!std::isfinite(delta)) return delta;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
      err += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double rtol, double atol, int max_depth) {
  if (!(b > a)) return {};
  Simpson s{f};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double fm = s.eval(0.5 * (a + b));
  // Coarse estimate from 5 points sets the absolute target.
  const double coarse = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = std::max(atol, rtol * std::abs(coarse));
  const double whole = coarse;
  const double value = s.recurse(a, b, fa, fm, fb, whole, eps, max_depth);
  return {value, s.err, s.evals};
}

QuadratureResult integrate_half_line(const std::function<double(double)>& g,
                                     const TailIntegralOptions& opts) {
  QuadratureResult total;
  double prev_chunk = 0.0;
  std::size_t non_decreasing_run = 0;
  double a = 0.0;
  for (std::size_t j = 0; j < opts.max_chunks; ++j) {
    // Widths chunk, chunk, 2 chunk, 4 chunk, ...: algebraic tails become geometric in j.
    const double width = std::max(opts.chunk, a);
    // Tail chunks only need accuracy against the running total.
    const auto piece = adaptive_simpson(g, a, a + width, 1e-2 * opts.rtol, 1e-2 * opts.rtol * std::abs(total.value));
    a += width;
    if (!std::isfinite(piece.value))
      throw Error(ErrorKind::DivergentTail, "integrand overflowed below s = " + std::to_string(a));
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
    total.evaluations += piece.evaluations;

    if (j >= 2 && prev_chunk > 0.0) {
      const double ratio = piece.value / prev_chunk;
      if (ratio >= 1.0) {
        if (++non_decreasing_run >= opts.divergence_run) break;
      } else {
        non_decreasing_run = 0;
        const double tail = piece.value * ratio / (1.0 - ratio);
        if (tail <= opts.rtol * total.value) {
          total.value += tail;
          total.error_estimate += tail;
          return total;
        }
      }
    } else if (j >= 2 && piece.value == 0.0 && total.value > 0.0) {
      return total;
    }
    prev_chunk = piece.value;
  }
  throw Error(ErrorKind::DivergentTail, "chunk sums fail the Cauchy test; partial = " +
                                            std::to_string(total.value));
}

}  // namespace ultrajet
