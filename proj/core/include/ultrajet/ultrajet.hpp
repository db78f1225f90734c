#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ultrajet/polynomial.hpp"
#include "ultrajet/trend.hpp"
#include "ultrajet/weight_matrix.hpp"
#include "ultrajet/whitney_cover.hpp"

namespace ultrajet {

/// Jet values F^alpha(a), alpha <= alpha_max, at finitely many base points of E.
class UltraJet {
 public:
  /// values[i][alpha] belongs to base point points[i]; every point must lie in E.
  UltraJet(CompactSet1D E, std::vector<double> points, std::vector<std::vector<double>> values);

  const CompactSet1D& set() const noexcept { return E_; }
  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t alpha_max() const noexcept { return alpha_max_; }

  /// Index of the stored base point equal to a, if any.
  std::optional<std::size_t> find(double a) const noexcept;
  /// F^alpha(a); throws InvalidArgument if a is not stored, OrderOverflow past alpha_max.
  double value(double a, std::size_t alpha) const;
  const std::vector<double>& values_at(std::size_t i) const { return values_.at(i); }

  UltraJet scaled(double c) const;
  UltraJet plus(const UltraJet& other) const;

 private:
  CompactSet1D E_;
  std::vector<double> points_;
  std::vector<std::vector<double>> values_;
  std::size_t alpha_max_ = 0;
};

/// y -> sum_{alpha <= p} F^alpha(a) (y - a)^alpha / alpha!. Throws OrderOverflow if p > alpha_max.
Polynomial taylor_poly(const UltraJet& F, double a, std::size_t p);

/// F^alpha(b) - (T_a^k F)^(alpha)(b).
double remainder(const UltraJet& F, double a, double b, std::size_t k, std::size_t alpha);

struct CertifyOptions {
  double rho_max = 1e4;
  /// Geometric rho grid resolution.
  std::size_t rho_steps_per_octave = 8;
  TrendOptions trend{};
  /// Remainders below this many ulps of the summed Taylor terms count as zero.
  double rounding_ulps = 64.0;
};

struct JetCertificate {
  double xi = 0.0;
  double C = 1.0;
  double rho = 1.0;
  /// max lhs/rhs over all checks of the growth bound and the remainder bound
  /// (<= 1 means the certificate covers every stored tuple).
  double ratio_growth = 0.0;
  double ratio_remainder = 0.0;
  std::size_t remainder_checks = 0;
};

/// Smallest stored xi and smallest grid rho with bounded excess, then C as the
/// exact max residual. Throws NotInClass with the witness when no (xi, rho) works.
JetCertificate certify(const UltraJet& F, const WeightMatrix& V, const CertifyOptions& opts = {});

/// F^k(a) = c * scale^k * k! * v_k at every base point (log-domain weights).
UltraJet gevrey_jet(const CompactSet1D& E, const std::vector<double>& points, const WeightSequence& v_divided,
                    std::size_t alpha_max, double c = 1.0, double scale = 1.0);

/// Jet of the polynomial P (derivatives of P at every base point).
UltraJet polynomial_jet(const CompactSet1D& E, const std::vector<double>& points, const Polynomial& P,
                        std::size_t alpha_max);

}  // namespace ultrajet
