#pragma once

#include <cstddef>
#include <vector>

namespace ultrajet {

/// p(y) = sum_j c_j (y - center)^j.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(double center, std::vector<double> coeffs);
  static Polynomial constant(double value, double center = 0.0);

  double center() const noexcept { return center_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  /// Index of the last stored coefficient (trailing zeros are kept); -1 if empty.
  long degree() const noexcept { return static_cast<long>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept;

  double operator()(double y) const noexcept;
  /// alpha-th derivative at y.
  double derivative_at(double y, std::size_t alpha) const noexcept;
  Polynomial derivative(std::size_t alpha = 1) const;
  /// Antiderivative vanishing at the center.
  Polynomial antiderivative() const;

  /// Same polynomial expanded around a new center (Taylor shift).
  Polynomial recentered(double new_center) const;

  /// Coefficient difference; the right operand is recentered if needed.
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator*(double s) const;

  /// Smallest j with c_j != 0 (the order of vanishing at the center); size() if zero.
  std::size_t valuation() const noexcept;

 private:
  double center_ = 0.0;
  std::vector<double> coeffs_;
};

/// Real roots of p in [a, b], sorted, found by isolating intervals from the
/// roots of p' and bisecting on sign changes.
std::vector<double> real_roots(const Polynomial& p, double a, double b);

/// max |p| on [a, b], attained at an endpoint or a root of p'.
double sup_abs(const Polynomial& p, double a, double b);

}  // namespace ultrajet
