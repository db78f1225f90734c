#include "ultrajet/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace ultrajet {

Polynomial::Polynomial(double center, std::vector<double> coeffs) : center_(center), coeffs_(std::move(coeffs)) {}

Polynomial Polynomial::constant(double value, double center) { return Polynomial(center, {value}); }

bool Polynomial::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

double Polynomial::operator()(double y) const noexcept {
  const double u = y - center_;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * u + *it;
  return acc;
}

double Polynomial::derivative_at(double y, std::size_t alpha) const noexcept {
  if (alpha >= coeffs_.size()) return 0.0;
  const double u = y - center_;
  double acc = 0.0;
  for (std::size_t j = coeffs_.size(); j-- > alpha;) {
    // falling factorial j (j-1) ... (j-alpha+1)
    double f = 1.0;
    for (std::size_t i = 0; i < alpha; ++i) f *= static_cast<double>(j - i);
    acc = acc * u + f * coeffs_[j];
  }
  return acc;
}

Polynomial Polynomial::derivative(std::size_t alpha) const {
  if (alpha >= coeffs_.size()) return Polynomial(center_, {0.0});
  std::vector<double> c(coeffs_.size() - alpha);
  for (std::size_t j = alpha; j < coeffs_.size(); ++j) {
    double f = 1.0;
    for (std::size_t i = 0; i < alpha; ++i) f *= static_cast<double>(j - i);
    c[j - alpha] = f * coeffs_[j];
  }
  return Polynomial(center_, std::move(c));
}

Polynomial Polynomial::antiderivative() const {
  std::vector<double> c(coeffs_.size() + 1, 0.0);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j + 1] = coeffs_[j] / static_cast<double>(j + 1);
  return Polynomial(center_, std::move(c));
}

Polynomial Polynomial::recentered(double new_center) const {
  if (new_center == center_) return *this;
  // Horner-style synthetic division repeated: exact for the representable shift.
  std::vector<double> c = coeffs_;
  const double s = new_center - center_;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += s * c[j];
  return Polynomial(new_center, std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& other) const { return *this + other * -1.0; }

Polynomial Polynomial::operator+(const Polynomial& other) const {
  const Polynomial o = other.recentered(center_);
  std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) c[j] += coeffs_[j];
  for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[j] += o.coeffs_[j];
  return Polynomial(center_, std::move(c));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> c = coeffs_;
  for (double& x : c) x *= s;
  return Polynomial(center_, std::move(c));
}

std::size_t Polynomial::valuation() const noexcept {
  for (std::size_t j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0.0) return j;
  return coeffs_.size();
}

namespace {

double bisect(const Polynomial& p, double lo, double hi) {
  double flo = p(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<double> real_roots(const Polynomial& p, double a, double b) {
  long deg = p.degree();
  while (deg > 0 && p.coeffs()[static_cast<std::size_t>(deg)] == 0.0) --deg;
  if (deg <= 0) return {};
  std::vector<double> cuts{a};
  if (deg > 1)
    for (double r : real_roots(p.derivative(), a, b)) cuts.push_back(r);
  cuts.push_back(b);
  std::vector<double> roots;
  // p is monotone between consecutive cuts.
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double flo = p(lo), fhi = p(hi);
    double r;
    if (flo == 0.0) {
      r = lo;
    } else if (fhi == 0.0) {
      r = hi;
    } else if ((flo < 0) != (fhi < 0)) {
      r = bisect(p, lo, hi);
    } else {
      continue;
    }
    if (roots.empty() || r > roots.back()) roots.push_back(r);
  }
  return roots;
}

double sup_abs(const Polynomial& p, double a, double b) {
  double best = std::max(std::abs(p(a)), std::abs(p(b)));
  for (double r : real_roots(p.derivative(), a, b)) best = std::max(best, std::abs(p(r)));
  return best;
}

}  // namespace ultrajet
