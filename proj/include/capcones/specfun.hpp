#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "capcones/errors.hpp"
#include "capcones/foliation.hpp"

namespace capcones {

struct Hyp2F1Params {
  double a, b, c, z;
};

namespace detail {

inline bool nonpositive_integer(double x) {
  return x <= 0.0 && x == std::floor(x);
}

/// Gauss series with Kahan-compensated summation; valid for z in (-1, 1).
/// Terminates exactly when a or b is a non-positive integer.
inline double hyp2f1_series(double a, double b, double c, double z) {
  // t_M for (6,1,1) sits at z ~ 0.9974 where ~15k terms are needed
  constexpr int kMaxTerms = 200000;
  double sum = 1.0, comp = 0.0, term = 1.0;
  int quiet = 0;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    if (term == 0.0) return sum;
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) <= 1e-17 * std::abs(sum) + 1e-300) {
      if (++quiet >= 2) return sum;
    } else {
      quiet = 0;
    }
  }
  throw NoConvergence("hyp2f1: series did not converge within term cap");
}

}  // namespace detail

/// Gauss hypergeometric 2F1(a,b;c;z) for z < 1.  Arguments z < 0 are mapped
/// through the Pfaff transformation to z/(z-1) in [0,1), which keeps all
/// series terms of one sign for the parameter ranges used here.
inline double hyp2f1(double a, double b, double c, double z) {
  if (detail::nonpositive_integer(c))
    throw PoleError("hyp2f1: c is a non-positive integer");
  if (z >= 1.0) throw DomainError("hyp2f1: z must be < 1");
  if (z == 0.0) return 1.0;
  if (z < 0.0) {
    // 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1))
    return std::pow(1.0 - z, -a) * detail::hyp2f1_series(a, c - b, c, z / (z - 1.0));
  }
  return detail::hyp2f1_series(a, b, c, z);
}

/// d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1,b+1;c+1;z)
inline double hyp2f1_dz(double a, double b, double c, double z) {
  return a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z);
}

/// One-phase linear solution f_M and the Legendre-type operator L_M for an
/// isoparametric triple.
class LegendreOperator {
 public:
  explicit LegendreOperator(const FoliationTriple& M) : M_(M) {}

  const FoliationTriple& triple() const { return M_; }

  /// Weight p_M(t) = t^{m1} (1-t^2)^{(m2+1)/2} of the self-adjoint form.
  double weight(double t) const {
    return std::pow(t, M_.m1()) * std::pow(1.0 - t * t, 0.5 * (M_.m2() + 1));
  }

  double eigen_coefficient() const {
    return 4.0 * (M_.n() - 1) / (static_cast<double>(M_.g()) * M_.g());
  }

  double hyp_a() const { return static_cast<double>(M_.n() - 1) / M_.g(); }
  double hyp_b() const { return -1.0 / M_.g(); }
  double hyp_c() const { return 0.5 * (M_.m1() + 1); }

  /// f_M(t) = 2F1((n-1)/g, -1/g; (m1+1)/2; t^2), the solution of L_M f = 0
  /// with f(0) = 1, f'(0) = 0.
  double f_M(double t) const {
    return hyp2f1(hyp_a(), hyp_b(), hyp_c(), t * t);
  }

  double f_M_prime(double t) const {
    return 2.0 * t * hyp2f1_dz(hyp_a(), hyp_b(), hyp_c(), t * t);
  }

  double f_M_second(double t) const {
    double a = hyp_a(), b = hyp_b(), c = hyp_c(), z = t * t;
    double d1 = a * b / c;
    double d2 = d1 * (a + 1.0) * (b + 1.0) / (c + 1.0);
    return 2.0 * d1 * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z) +
           4.0 * z * d2 * hyp2f1(a + 2.0, b + 2.0, c + 2.0, z);
  }

  /// L_M f = (1-t^2) f'' + (m1/t - (m1+m2+1) t) f' + 4(n-1)/g^2 f.
  double residual(double t, double f, double fp, double fpp) const {
    if (t <= 0.0 || t >= 1.0)
      throw DomainError("legendre residual: t must lie in (0,1)");
    double m1 = M_.m1(), m2 = M_.m2();
    return (1.0 - t * t) * fpp + (m1 / t - (m1 + m2 + 1.0) * t) * fp +
           eigen_coefficient() * f;
  }

  /// Self-adjoint evaluation ((p_M f')' + coeff p_M/(1-t^2) f) (1-t^2)/p_M,
  /// which must agree with residual(); kept as an algebraic cross-check.
  double residual_selfadjoint(double t, double f, double fp, double fpp) const {
    if (t <= 0.0 || t >= 1.0)
      throw DomainError("legendre residual: t must lie in (0,1)");
    double p = weight(t);
    double m1 = M_.m1(), m2 = M_.m2();
    double logp_prime = m1 / t - (m2 + 1.0) * t / (1.0 - t * t);
    double div = p * fpp + p * logp_prime * fp;  // (p f')'
    return (div + eigen_coefficient() * p / (1.0 - t * t) * f) * (1.0 - t * t) / p;
  }

  /// Unique zero of f_M in (0,1): linear scan for a sign change, then
  /// bisection to 1e-12.
  double t_M_zero() const {
    // coarse scan, then a fine tail: (6,1,1) has its zero at t ~ 0.9987
    std::vector<double> grid;
    for (int k = 1; k < 99; ++k) grid.push_back(0.01 * k);
    for (int k = 0; k <= 99; ++k) grid.push_back(0.99 + 1e-4 * k);
    double prev_t = grid.front(), prev_f = f_M(prev_t);
    double lo = 0.0, hi = 0.0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
      double t = grid[k];
      double v = f_M(t);
      if (prev_f > 0.0 && v <= 0.0) {
        lo = prev_t;
        hi = t;
        break;
      }
      prev_t = t;
      prev_f = v;
    }
    if (hi == 0.0)
      throw BracketFailure("t_M_zero: no sign change of f_M on (0,1)");
    while (hi - lo > 1e-13) {
      double mid = 0.5 * (lo + hi);
      (f_M(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  FoliationTriple M_;
};

/// Hypergeometric inverse r(y) of the limit equation, with the two basis
/// solutions F0 (even) and F1 (odd) and the Euler exponents of the
/// backward-growth asymptotics y(r) ~ C (-r)^beta.
class LimitInverse {
 public:
  LimitInverse(double c, int g) : c_(c), g_(g) {
    double disc = (c + 1.0) * (c + 1.0) - 4.0 * c * g;
    if (disc < 0.0)
      throw ComplexExponents("limit inverse: (c+1)^2 < 4cg gives complex exponents");
    double s = std::sqrt(disc);
    a_plus_ = 0.25 * (-(c + 1.0) + s);
    a_minus_ = 0.25 * (-(c + 1.0) - s);
  }

  double a_plus() const { return a_plus_; }
  double a_minus() const { return a_minus_; }
  double beta_plus() const { return -1.0 / (2.0 * a_plus_); }
  double beta_minus() const { return -1.0 / (2.0 * a_minus_); }

  double F0(double y) const {
    return hyp2f1(a_plus_, a_minus_, 0.5, -y * y);
  }

  double F1(double y) const {
    return y * hyp2f1(a_plus_ + 0.5, a_minus_ + 0.5, 1.5, -y * y);
  }

  double F0_prime(double y) const {
    return -2.0 * y * (a_plus_ * a_minus_ / 0.5) *
           hyp2f1(a_plus_ + 1.0, a_minus_ + 1.0, 1.5, -y * y);
  }

  double F1_prime(double y) const {
    double ap = a_plus_ + 0.5, am = a_minus_ + 0.5;
    return hyp2f1(ap, am, 1.5, -y * y) -
           2.0 * y * y * (ap * am / 1.5) * hyp2f1(ap + 1.0, am + 1.0, 2.5, -y * y);
  }

  double r(double C0, double C1, double y) const {
    return C0 * F0(y) + C1 * F1(y);
  }

  /// F0 F1' - F1 F0'; equals (1+y^2)^{c/2} exactly.
  double wronskian(double y) const {
    return F0(y) * F1_prime(y) - F1(y) * F0_prime(y);
  }

  /// Coefficients matching r(L) = 0 and r'(L) = 1/y'(0) for a solution of
  /// the limit equation with data y(0) = L, y'(0) = slope0.
  void match_initial_data(double L, double slope0, double& C0, double& C1) const {
    double w = std::pow(1.0 + L * L, 0.5 * c_);
    C0 = -F1(L) / (slope0 * w);
    C1 = F0(L) / (slope0 * w);
  }

 private:
  double c_;
  int g_;
  double a_plus_, a_minus_;
};

/// Free-function form used by the CLI and tests.
inline double limit_inverse_r(double c, int g, double C0, double C1, double y) {
  return LimitInverse(c, g).r(C0, C1, y);
}

}  // namespace capcones
