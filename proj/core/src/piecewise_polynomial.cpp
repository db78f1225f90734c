#include "ultrajet/piecewise_polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "ultrajet/error.hpp"

namespace ultrajet {

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Polynomial> pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(pieces)) {
  if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
    throw Error(ErrorKind::InvalidArgument, "spline needs n + 1 breakpoints for n pieces");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
    if (!(breaks_[i] < breaks_[i + 1])) throw Error(ErrorKind::InvalidArgument, "breakpoints must increase");
    pieces_[i] = pieces_[i].recentered(breaks_[i]);
  }
}

PiecewisePolynomial PiecewisePolynomial::indicator(double a, double b) {
  if (!(a < b)) throw Error(ErrorKind::DegenerateSupport, "indicator needs a < b");
  return PiecewisePolynomial({a, b}, {Polynomial::constant(1.0, a)});
}

std::size_t PiecewisePolynomial::degree() const noexcept {
  long d = 0;
  for (const auto& p : pieces_) d = std::max(d, p.degree());
  return static_cast<std::size_t>(d);
}

std::size_t PiecewisePolynomial::piece_index(double x) const noexcept {
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

double PiecewisePolynomial::operator()(double x, std::size_t alpha) const noexcept {
  if (!(x >= breaks_.front() && x < breaks_.back())) return 0.0;
  return pieces_[piece_index(x)].derivative_at(x, alpha);
}

PiecewisePolynomial PiecewisePolynomial::derivative(std::size_t alpha) const {
  std::vector<Polynomial> d;
  d.reserve(pieces_.size());
  for (const auto& p : pieces_) d.push_back(p.derivative(alpha));
  return PiecewisePolynomial(breaks_, std::move(d));
}

double PiecewisePolynomial::integral() const {
  double total = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) total += pieces_[i].antiderivative()(breaks_[i + 1]);
  return total;
}

PiecewisePolynomial PiecewisePolynomial::box_convolve(double width) const {
  if (!(width > 0.0)) throw Error(ErrorKind::DegenerateSupport, "box width must be positive");
  const double a = 0.5 * width;

  // Continuous antiderivative F: pieces plus the running value at each left breakpoint.
  std::vector<Polynomial> F;
  std::vector<double> F_left;
  double run = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    auto P = pieces_[i].antiderivative();
    F_left.push_back(run);
    F.push_back(P + Polynomial::constant(run, breaks_[i]));
    run = F.back()(breaks_[i + 1]);
  }
  const double total = run;

  // F(y) as a polynomial valid on the piece containing y0.
  auto F_piece = [&](double y0) -> Polynomial {
    if (y0 < breaks_.front()) return Polynomial::constant(0.0, y0);
    if (y0 >= breaks_.back()) return Polynomial::constant(total, y0);
    return F[piece_index(y0)];
  };

  std::vector<double> nb;
  nb.reserve(2 * breaks_.size());
  for (double b : breaks_) {
    nb.push_back(b - a);
    nb.push_back(b + a);
  }
  std::sort(nb.begin(), nb.end());
  nb.erase(std::unique(nb.begin(), nb.end(), [](double x, double y) { return x == y; }), nb.end());

  std::vector<double> out_breaks{nb.front()};
  std::vector<Polynomial> out;
  for (std::size_t k = 0; k + 1 < nb.size(); ++k) {
    const double u = nb[k], v = nb[k + 1];
    const double mid = 0.5 * (u + v);
    // F(x + a): the F piece centered at c becomes a polynomial centered at c - a.
    const Polynomial hi = F_piece(mid + a);
    const Polynomial lo = F_piece(mid - a);
    Polynomial hi_x(hi.center() - a, hi.coeffs());
    Polynomial lo_x(lo.center() + a, lo.coeffs());
    Polynomial g = (hi_x.recentered(u) - lo_x.recentered(u)) * (1.0 / width);
    out.push_back(std::move(g));
    out_breaks.push_back(v);
  }
  return PiecewisePolynomial(std::move(out_breaks), std::move(out));
}

PiecewisePolynomial PiecewisePolynomial::affine(double center, double scale) const {
  if (!(scale > 0.0)) throw Error(ErrorKind::DegenerateSupport, "affine scale must be positive");
  std::vector<double> b;
  b.reserve(breaks_.size());
  for (double x : breaks_) b.push_back(center + scale * x);
  std::vector<Polynomial> ps;
  ps.reserve(pieces_.size());
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    std::vector<double> c = pieces_[i].coeffs();
    double f = 1.0;
    for (double& x : c) {
      x *= f;
      f /= scale;
    }
    ps.emplace_back(b[i], std::move(c));
  }
  return PiecewisePolynomial(std::move(b), std::move(ps));
}

double PiecewisePolynomial::sup_norm(std::size_t alpha) const {
  double best = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    best = std::max(best, sup_abs(pieces_[i].derivative(alpha), breaks_[i], breaks_[i + 1]));
  return best;
}

}  // namespace ultrajet
