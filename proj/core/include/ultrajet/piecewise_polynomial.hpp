#pragma once

#include <cstddef>
#include <vector>

#include "ultrajet/polynomial.hpp"

namespace ultrajet {

/// Spline supported on [b_0, b_n): piece i lives on [b_i, b_{i+1}) and is
/// stored in powers of (x - b_i). Zero outside the support.
class PiecewisePolynomial {
 public:
  PiecewisePolynomial() = default;
  /// pieces.size() + 1 == breakpoints.size(); breakpoints strictly increasing.
  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces);

  /// Indicator of [a, b).
  static PiecewisePolynomial indicator(double a, double b);

  const std::vector<double>& breakpoints() const noexcept { return breaks_; }
  const std::vector<Polynomial>& pieces() const noexcept { return pieces_; }
  double support_lo() const noexcept { return breaks_.front(); }
  double support_hi() const noexcept { return breaks_.back(); }
  std::size_t degree() const noexcept;

  /// alpha-th derivative at x (one-sided from the right at breakpoints).
  double operator()(double x, std::size_t alpha = 0) const noexcept;

  PiecewisePolynomial derivative(std::size_t alpha = 1) const;
  /// Integral of the spline over its support.
  double integral() const;
  /// (f * box)(x) = (1/w) * integral of f over [x - w/2, x + w/2].
  PiecewisePolynomial box_convolve(double width) const;
  /// Affine image x -> center + scale * x of the support (g(y) = f((y - center)/scale)).
  PiecewisePolynomial affine(double center, double scale) const;

  /// Exact sup |f^(alpha)| over the support from per-piece extrema.
  double sup_norm(std::size_t alpha = 0) const;

 private:
  std::size_t piece_index(double x) const noexcept;

  std::vector<double> breaks_;
  std::vector<Polynomial> pieces_;
};

}  // namespace ultrajet
