#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "capcones/axisym_equation.hpp"
#include "capcones/errors.hpp"
#include "capcones/profile_ode.hpp"

namespace capcones {

enum class ExactFamily {
  CliffordMinimalFromZero,
  CliffordMinimalAcrossOne,
  CliffordCMC,
  LatitudeSphere,
  Constant,
  AxisymClifford,
  AxisymHalfLawson,
};

/// An exact solution family with analytic derivatives.  Profiles in the
/// meridional variable solve the capillary CMC equation for their triple;
/// profiles in the ambient variable solve the axisymmetric equation.
struct ExactProfile {
  ExactFamily family;
  std::optional<FoliationTriple> triple;
  int n = 0;
  double H0 = 0.0;
  double param = 0.0;
  double lo = 0.0, hi = 1.0;   // validity interval
  bool in_xi_variable = false; // solves (A) in xi rather than (C*) in t
  std::function<double(double)> f, fp, fpp;

  double residual(double x) const {
    if (in_xi_variable) return axisym_rhs(n, H0, x, f(x), fp(x)) - fpp(x);
    OdeProblem prob{*triple, H0, 1.0};
    return profile_rhs(prob, x, f(x), fp(x)) - fpp(x);
  }
};

namespace detail {

inline void assert_residual_gate(const ExactProfile& prof) {
  double len = prof.hi - prof.lo;
  double a = prof.lo + 0.02 * len, b = prof.hi - 0.02 * len;
  for (int i = 0; i <= 99; ++i) {
    double x = a + (b - a) * i / 99.0;
    if (prof.in_xi_variable && std::abs(x) < 1e-8) continue;
    double r = prof.residual(x);
    if (!(std::abs(r) <= 1e-10 * std::max(1.0, std::abs(prof.fpp(x)))))
      throw std::logic_error("ExactProfile: residual gate failed");
  }
}

/// Profile sqrt(A - B x^2) with analytic derivatives.
inline void sqrt_quadratic(double A, double B, std::function<double(double)>& f,
                           std::function<double(double)>& fp,
                           std::function<double(double)>& fpp) {
  f = [A, B](double x) { return std::sqrt(A - B * x * x); };
  fp = [A, B](double x) { return -B * x / std::sqrt(A - B * x * x); };
  fpp = [A, B](double x) {
    double v = A - B * x * x;
    return -B * A / (v * std::sqrt(v));
  };
}

}  // namespace detail

/// g = 2 free-boundary Clifford profile from the focal point t = 0:
/// f(t) = sqrt((m1+1 - (n-1) t^2)/m2) on [0, sqrt((m1+1)/(n-1))].
inline ExactProfile clifford_minimal_from_zero(const FoliationTriple& M) {
  if (M.g() != 2) throw WrongG("clifford_minimal_from_zero: needs g = 2");
  ExactProfile prof;
  prof.family = ExactFamily::CliffordMinimalFromZero;
  prof.triple = M;
  prof.n = M.n();
  double A = (M.m1() + 1.0) / M.m2();
  double B = (M.n() - 1.0) / M.m2();
  detail::sqrt_quadratic(A, B, prof.f, prof.fp, prof.fpp);
  prof.lo = 0.0;
  prof.hi = std::sqrt(A / B);
  prof.param = std::sqrt(A);  // a* = f(0)
  detail::assert_residual_gate(prof);
  return prof;
}

/// The reflected profile across the focal point t = 1:
/// f(t) = sqrt(((n-1)t^2 - m1)/m1) on (sqrt(m1/(n-1)), 1].
inline ExactProfile clifford_minimal_across_one(const FoliationTriple& M) {
  if (M.g() != 2) throw WrongG("clifford_minimal_across_one: needs g = 2");
  ExactProfile prof;
  prof.family = ExactFamily::CliffordMinimalAcrossOne;
  prof.triple = M;
  prof.n = M.n();
  double m1 = M.m1(), nm1 = M.n() - 1.0;
  prof.f = [m1, nm1](double t) { return std::sqrt((nm1 * t * t - m1) / m1); };
  prof.fp = [m1, nm1](double t) {
    return nm1 * t / (m1 * std::sqrt((nm1 * t * t - m1) / m1));
  };
  prof.fpp = [m1, nm1](double t) {
    double v = (nm1 * t * t - m1) / m1;
    return nm1 / m1 / std::sqrt(v) - (nm1 * t / m1) * (nm1 * t / m1) / (v * std::sqrt(v));
  };
  prof.lo = std::sqrt(m1 / nm1);
  prof.hi = 1.0;
  detail::assert_residual_gate(prof);
  return prof;
}

/// g = 2 CMC Clifford family f_a(t) = sqrt(a - (a+1) t^2) with mean curvature
/// H0(a) = (m1+1)/sqrt(a) - m2 sqrt(a).
inline ExactProfile clifford_cmc(const FoliationTriple& M, double a) {
  if (M.g() != 2) throw WrongG("clifford_cmc: needs g = 2");
  if (a <= 0.0) throw DomainError("clifford_cmc: a must be positive");
  ExactProfile prof;
  prof.family = ExactFamily::CliffordCMC;
  prof.triple = M;
  prof.n = M.n();
  prof.param = a;
  prof.H0 = (M.m1() + 1.0) / std::sqrt(a) - M.m2() * std::sqrt(a);
  detail::sqrt_quadratic(a, a + 1.0, prof.f, prof.fp, prof.fpp);
  prof.lo = 0.0;
  prof.hi = std::sqrt(a / (a + 1.0));
  detail::assert_residual_gate(prof);
  return prof;
}

/// Constant solution f = -H0/(n-1) of the CMC equation.
inline ExactProfile constant_solution(const FoliationTriple& M, double H0) {
  ExactProfile prof;
  prof.family = ExactFamily::Constant;
  prof.triple = M;
  prof.n = M.n();
  prof.H0 = H0;
  double c = -H0 / (M.n() - 1.0);
  prof.f = [c](double) { return c; };
  prof.fp = [](double) { return 0.0; };
  prof.fpp = [](double) { return 0.0; };
  prof.lo = 0.0;
  prof.hi = 1.0;
  detail::assert_residual_gate(prof);
  return prof;
}

/// Half-Lawson profile in the xi variable: f(xi) = sqrt((1-(n-1)xi^2)/(n-2)).
inline ExactProfile axisym_clifford(int n) {
  if (n < 3) throw DomainError("axisym_clifford: n >= 3");
  ExactProfile prof;
  prof.family = ExactFamily::AxisymClifford;
  prof.n = n;
  prof.in_xi_variable = true;
  double A = 1.0 / (n - 2.0);
  double B = (n - 1.0) / (n - 2.0);
  detail::sqrt_quadratic(A, B, prof.f, prof.fp, prof.fpp);
  prof.lo = -std::sqrt(A / B);
  prof.hi = std::sqrt(A / B);
  detail::assert_residual_gate(prof);
  return prof;
}

/// The same cone in the meridional variable of the g = 1 foliation:
/// f(t) = sqrt(4 t^2 (1-t^2)/(n-2) - (1-2t^2)^2).
inline ExactProfile axisym_half_lawson(int n) {
  if (n < 3) throw DomainError("axisym_half_lawson: n >= 3");
  ExactProfile prof;
  prof.family = ExactFamily::AxisymHalfLawson;
  prof.triple = FoliationTriple::validate(1, n - 2, n - 2);
  prof.n = n;
  double c = 4.0 / (n - 2.0);
  auto P = [c](double t) {
    double omt2 = 1.0 - t * t, w = 1.0 - 2.0 * t * t;
    return c * t * t * omt2 - w * w;
  };
  auto Pp = [c](double t) {
    return c * (2.0 * t - 4.0 * t * t * t) + 8.0 * t * (1.0 - 2.0 * t * t);
  };
  auto Ppp = [c](double t) {
    return c * (2.0 - 12.0 * t * t) + 8.0 - 48.0 * t * t;
  };
  prof.f = [P](double t) { return std::sqrt(P(t)); };
  prof.fp = [P, Pp](double t) { return Pp(t) / (2.0 * std::sqrt(P(t))); };
  prof.fpp = [P, Pp, Ppp](double t) {
    double v = P(t), d = Pp(t);
    return Ppp(t) / (2.0 * std::sqrt(v)) - d * d / (4.0 * v * std::sqrt(v));
  };
  // P >= 0 between the roots around t = 1/sqrt(2); xi = 1-2t^2 in
  // [-1/sqrt(n-1), 1/sqrt(n-1)]
  double xi_max = 1.0 / std::sqrt(n - 1.0);
  prof.lo = std::sqrt(0.5 * (1.0 - xi_max));
  prof.hi = std::sqrt(0.5 * (1.0 + xi_max));
  detail::assert_residual_gate(prof);
  return prof;
}

/// Vertical latitude sphere in the xi variable: f(xi) = sqrt((l+1)xi^2 - 1)
/// with H0 = (n-1)/sqrt(l).
inline ExactProfile latitude_sphere(int n, double lambda) {
  if (n < 3) throw DomainError("latitude_sphere: n >= 3");
  if (lambda <= 0.0) throw DomainError("latitude_sphere: lambda > 0");
  ExactProfile prof;
  prof.family = ExactFamily::LatitudeSphere;
  prof.n = n;
  prof.in_xi_variable = true;
  prof.param = lambda;
  prof.H0 = (n - 1.0) / std::sqrt(lambda);
  double L = lambda + 1.0;
  prof.f = [L](double xi) { return std::sqrt(L * xi * xi - 1.0); };
  prof.fp = [L](double xi) { return L * xi / std::sqrt(L * xi * xi - 1.0); };
  prof.fpp = [L](double xi) {
    double v = L * xi * xi - 1.0;
    return -L / (v * std::sqrt(v));
  };
  prof.lo = 1.0 / std::sqrt(L);
  prof.hi = 1.0;
  detail::assert_residual_gate(prof);
  return prof;
}

/// Dispatcher matching the family tags for axisymmetric data.
inline ExactProfile axisym_profiles(int n, ExactFamily family,
                                    double lambda = 1.0) {
  switch (family) {
    case ExactFamily::AxisymClifford:
      return axisym_clifford(n);
    case ExactFamily::AxisymHalfLawson:
      return axisym_half_lawson(n);
    case ExactFamily::LatitudeSphere:
      return latitude_sphere(n, lambda);
    default:
      throw std::invalid_argument("axisym_profiles: unsupported family");
  }
}

}  // namespace capcones
