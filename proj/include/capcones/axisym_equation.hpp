#pragma once

#include <cmath>

#include "capcones/errors.hpp"

namespace capcones {

/// Axisymmetric profile equation (ambient coordinate xi = x_n/|x|):
/// f'' = -(f - xi f')((n-1)/(1-xi^2) + (n-2) f'^2/(1+f^2))
///       - H0/(1-xi^2) (1 + (1-xi^2) f'^2/(1+f^2))^{3/2}.
inline double axisym_rhs(int n, double H0, double xi, double f, double fp) {
  if (!(xi > -1.0 && xi < 1.0))
    throw DomainError("axisym_rhs: xi must lie in (-1,1)");
  double om = 1.0 - xi * xi;
  double q = fp * fp / (1.0 + f * f);
  double out = -(f - xi * fp) * ((n - 1.0) / om + (n - 2.0) * q);
  if (H0 != 0.0) out -= H0 / om * std::pow(1.0 + om * q, 1.5);
  return out;
}

/// State of the axisymmetric equation with the derived quantities of the
/// uniqueness argument.
struct AxisymState {
  double xi = 0.0, f = 0.0, fp = 0.0;

  double h() const { return f - xi * fp; }
  double u() const { return (xi * xi + f * f) / (1.0 + f * f); }
  double theta_polar() const { return std::atan2(f, xi); }
  double W() const {
    return std::sqrt(1.0 + f * f + (1.0 - xi * xi) * fp * fp);
  }
  double D() const { return std::sqrt(1.0 + f * f) * h() / W(); }
  double x() const {
    double uu = u();
    return std::sqrt(uu / (1.0 - uu));
  }
  double z() const { return D() / x(); }
};

/// First integral of the axisymmetric equation (constant along solutions).
inline double conserved_W(int n, double H0, double xi, double f, double fp) {
  if (!(xi > -1.0 && xi < 1.0))
    throw DomainError("conserved_W: xi must lie in (-1,1)");
  double opf2 = 1.0 + f * f;
  double W = std::sqrt(opf2 + (1.0 - xi * xi) * fp * fp);
  double pref = std::pow((1.0 - xi * xi) / opf2, 0.5 * (n - 1.0));
  return pref * (std::sqrt(opf2) * (f - xi * fp) / W + H0 / (n - 1.0));
}

inline double conserved_W(int n, double H0, const AxisymState& s) {
  return conserved_W(n, H0, s.xi, s.f, s.fp);
}

}  // namespace capcones
