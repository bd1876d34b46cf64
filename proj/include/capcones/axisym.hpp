#pragma once

#include <cmath>
#include <variant>
#include <vector>

#include "capcones/axisym_equation.hpp"
#include "capcones/dormand_prince.hpp"
#include "capcones/errors.hpp"

namespace capcones {

struct AxisymStop {
  double slope_cap = 1e8;
  double xi_min = -1.0 + 1e-7;
  double xi_max = 1.0 - 1e-7;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 1000000;
  bool stop_at_zero = true;
};

struct AxisymZero {
  double xi_zero = 0.0, slope = 0.0;
};
struct AxisymSlopeCap {
  double xi_at = 0.0, f_at = 0.0;
};
struct AxisymRanOut {
  double xi_end = 0.0, f_end = 0.0, fp_end = 0.0;
};
struct AxisymStepFailure {
  double xi_at = 0.0;
};

/// Trajectory of (f, f', theta_polar) in xi; the polar angle is carried as a
/// third component integrated from d(theta)/d(xi) = -h/(xi^2+f^2).
class AxisymTrajectory {
 public:
  AxisymTrajectory() = default;
  AxisymTrajectory(ode::Trajectory<3> path, int n, double H0)
      : path_(std::move(path)), n_(n), H0_(H0) {}

  bool empty() const { return path_.empty(); }
  double xi_start() const { return path_.t_start(); }
  double xi_end() const { return path_.t_end(); }
  int n() const { return n_; }
  double H0() const { return H0_; }

  AxisymState at(double xi) const {
    auto y = path_.eval(xi);
    return {xi, y[0], y[1]};
  }

  double theta_polar_tracked(double xi) const { return path_.eval(2, xi); }

  std::vector<AxisymState> sample(std::size_t m) const {
    std::vector<AxisymState> out;
    for (auto& [xi, y] : path_.sample_grid(m)) out.push_back({xi, y[0], y[1]});
    return out;
  }

  const ode::Trajectory<3>& path() const { return path_; }

 private:
  ode::Trajectory<3> path_;
  int n_ = 3;
  double H0_ = 0.0;
};

struct AxisymOutcome {
  std::variant<AxisymZero, AxisymSlopeCap, AxisymRanOut, AxisymStepFailure> result;
  AxisymTrajectory trajectory;

  bool reached_zero() const { return std::holds_alternative<AxisymZero>(result); }
  const AxisymZero& zero() const { return std::get<AxisymZero>(result); }
};

inline AxisymOutcome integrate_axisym(int n, double H0, AxisymState start,
                                      int direction, const AxisymStop& stop = {}) {
  const double dir = direction >= 0 ? 1.0 : -1.0;
  const double xi_end = dir > 0 ? stop.xi_max : stop.xi_min;

  auto rhs = [n, H0](double xi, const ode::State<3>& y, ode::State<3>& dy) {
    dy[0] = y[1];
    dy[1] = axisym_rhs(n, H0, xi, y[0], y[1]);
    double denom = xi * xi + y[0] * y[0];
    dy[2] = denom > 0 ? -(y[0] - xi * y[1]) / denom : 0.0;
  };

  ode::IntegratorOptions opt;
  opt.rel_tol = stop.rel_tol;
  opt.abs_tol = stop.abs_tol;
  opt.max_steps = stop.max_steps;

  ode::Trajectory<3> traj;
  enum Tag { kZero = 1, kCap = 2 };

  ode::StepObserver<3> observer = [&](const ode::DenseStep<3>& ds,
                                      double& t_event, int& tag) {
    double ta = ds.t0, tb = ds.t1();
    double fa = ds.eval(0, ta), fb = ds.eval(0, tb);
    if (stop.stop_at_zero && fa > 0.0 && fb <= 0.0) {
      double lo = ta, hi = tb;
      for (int i = 0; i < 200 && std::abs(hi - lo) > 1e-16; ++i) {
        double mid = 0.5 * (lo + hi);
        (ds.eval(0, mid) > 0.0 ? lo : hi) = mid;
      }
      t_event = hi;
      tag = kZero;
      return true;
    }
    if (std::abs(ds.eval(1, tb)) >= stop.slope_cap) {
      t_event = tb;
      tag = kCap;
      return true;
    }
    return false;
  };

  double theta0 = std::atan2(start.f, start.xi);
  auto end = ode::integrate_dopri5<3>(rhs, start.xi, {start.f, start.fp, theta0},
                                      xi_end, opt, &traj, observer);

  AxisymOutcome out;
  out.trajectory = AxisymTrajectory(std::move(traj), n, H0);
  switch (end.reason) {
    case ode::StopReason::EventStop:
      if (end.event_tag == kZero)
        out.result = AxisymZero{end.t, end.y[1]};
      else
        out.result = AxisymSlopeCap{end.t, end.y[0]};
      break;
    case ode::StopReason::ReachedEnd:
      out.result = AxisymRanOut{end.t, end.y[0], end.y[1]};
      break;
    default:
      out.result = AxisymStepFailure{end.t};
      break;
  }
  return out;
}

/// An axisymmetric Type II capillary solution on (xi1, xi2).
struct AxisymCapillary {
  int n = 3;
  double H0 = 0.0;
  double theta = 0.0;
  double xi1 = 0.0, xi2 = 0.0;
  double slope1 = 0.0, slope2 = 0.0;
  double f0 = 0.0, fp0 = 0.0;  // values at xi = 0
  double residual = 0.0;       // capillary mismatch at the far boundary
  AxisymTrajectory trajectory;
};

namespace detail {

struct AxisymShotResult {
  bool has_second_zero = false;
  double R = 0.0;
  double xi2 = 0.0, slope2 = 0.0;
  AxisymOutcome raw;
};

inline AxisymShotResult axisym_type2_shot(int n, double H0, double theta,
                                          double xi1, const AxisymStop& stop) {
  double slope = std::tan(theta) / std::sqrt(1.0 - xi1 * xi1);
  auto out = integrate_axisym(n, H0, {xi1, 0.0, slope}, +1, stop);
  AxisymShotResult r;
  r.raw = out;
  if (out.reached_zero()) {
    r.has_second_zero = true;
    r.xi2 = out.zero().xi_zero;
    r.slope2 = out.zero().slope;
    double w1 = (1.0 - xi1 * xi1) * slope * slope;
    double w2 = (1.0 - r.xi2 * r.xi2) * r.slope2 * r.slope2;
    r.R = w1 - w2;
  }
  return r;
}

}  // namespace detail

/// Two-boundary axisymmetric capillary solver: shoots from a zero at xi1 < 0
/// with the capillary slope and matches the weighted slope at the second
/// zero.  The evenness theorem predicts xi2 = -xi1.
inline AxisymCapillary axisym_type2_solve(int n, double H0, double theta,
                                          const AxisymStop& stop = {}) {
  if (!(theta > 0.0 && theta < 0.5 * M_PI))
    throw DomainError("axisym_type2_solve: theta in (0, pi/2)");
  auto Rof = [&](double xi1) { return detail::axisym_type2_shot(n, H0, theta, xi1, stop); };

  const int kGrid = 60;
  double lo = -0.95, hi = -0.02;
  double prev_xi = lo;
  auto prev = Rof(prev_xi);
  double blo = 0.0, bhi = 0.0, R_at_blo = 0.0;
  bool found = false;
  for (int i = 1; i <= kGrid; ++i) {
    double xi1 = lo + (hi - lo) * i / kGrid;
    auto cur = Rof(xi1);
    double Rp = prev.has_second_zero ? prev.R : -1.0;
    double Rc = cur.has_second_zero ? cur.R : -1.0;
    if ((Rp <= 0.0 && Rc > 0.0) || (Rp > 0.0 && Rc <= 0.0)) {
      blo = prev_xi;
      bhi = xi1;
      R_at_blo = Rp;
      found = true;
      break;
    }
    prev = cur;
    prev_xi = xi1;
  }
  if (!found) throw NoSignChange("axisym_type2_solve: no residual bracket");

  detail::AxisymShotResult best;
  double xi1 = blo;
  for (int i = 0; i < 200 && bhi - blo > 1e-14; ++i) {
    double mid = 0.5 * (blo + bhi);
    auto cur = Rof(mid);
    double Rc = cur.has_second_zero ? cur.R : -1.0;
    if ((Rc > 0.0) == (R_at_blo > 0.0))
      blo = mid;
    else
      bhi = mid;
    if (cur.has_second_zero) {
      best = cur;
      xi1 = mid;
    }
  }
  if (!best.has_second_zero)
    throw NoSignChange("axisym_type2_solve: bisection lost the second zero");

  AxisymCapillary sol;
  sol.n = n;
  sol.H0 = H0;
  sol.theta = theta;
  sol.xi1 = xi1;
  sol.xi2 = best.xi2;
  sol.slope1 = std::tan(theta) / std::sqrt(1.0 - xi1 * xi1);
  sol.slope2 = best.slope2;
  sol.residual = std::abs(std::sqrt(1.0 - best.xi2 * best.xi2) *
                              std::abs(best.slope2) -
                          std::tan(theta));
  sol.trajectory = best.raw.trajectory;
  if (sol.xi1 < 0.0 && sol.xi2 > 0.0) {
    auto mid = sol.trajectory.at(0.0);
    sol.f0 = mid.f;
    sol.fp0 = mid.fp;
  }
  return sol;
}

/// Evenness report for an axisymmetric capillary solution.
struct EvennessReport {
  double xi_sum_abs = 0.0;
  double fp0_abs = 0.0;
  double max_asymmetry = 0.0;

  bool pass(double tol = 1e-6) const {
    return xi_sum_abs <= tol && fp0_abs <= tol && max_asymmetry <= tol;
  }
};

inline EvennessReport verify_even(const AxisymCapillary& sol) {
  EvennessReport rep;
  rep.xi_sum_abs = std::abs(sol.xi1 + sol.xi2);
  rep.fp0_abs = std::abs(sol.fp0);
  double overlap = std::min(-sol.xi1, sol.xi2);
  double a = sol.trajectory.xi_start(), b = sol.trajectory.xi_end();
  for (int i = 1; i < 200; ++i) {
    double xi = overlap * i / 200.0;
    if (-xi < a || xi > b) continue;
    double diff = std::abs(sol.trajectory.at(xi).f - sol.trajectory.at(-xi).f);
    rep.max_asymmetry = std::max(rep.max_asymmetry, diff);
  }
  return rep;
}

/// Threshold of the reach-zero dichotomy for shots {f(0)=a, f'(0)=0, H0=0}:
/// bisects the boundary in a; the closed form is 1/sqrt(n-2).
inline double threshold_scan(int n, double tol = 1e-6) {
  if (n < 4) throw DomainError("threshold_scan: n >= 4");
  AxisymStop stop;
  auto reaches_zero = [&](double a) {
    auto out = integrate_axisym(n, 0.0, {0.0, a, 0.0}, +1, stop);
    return out.reached_zero();
  };
  double lo = 0.05, hi = 0.05;
  if (!reaches_zero(lo)) throw NoBracket("threshold_scan: low shot missed zero");
  while (reaches_zero(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 64.0) throw NoBracket("threshold_scan: no upper bound found");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (reaches_zero(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace capcones
