#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "capcones/dormand_prince.hpp"
#include "capcones/errors.hpp"
#include "capcones/foliation.hpp"
#include "capcones/specfun.hpp"

namespace capcones {

/// Profile equation data: the foliation, the prescribed mean curvature H0,
/// and the rescaling parameter lambda.  lambda = 1, H0 = 0 is the minimal
/// cone equation; lambda = 0, H0 = 0 is the linear problem L_M f = 0.
struct OdeProblem {
  FoliationTriple M;
  double H0 = 0.0;
  double lambda = 1.0;
};

struct ProfileState {
  double t = 0.0, f = 0.0, fp = 0.0;
};

inline double h_quantity(const FoliationTriple& M, double t, double f, double fp) {
  return f - 0.5 * M.g() * M.A_M(t) * fp;
}

inline double h_quantity(const OdeProblem& p, const ProfileState& s) {
  return h_quantity(p.M, s.t, s.f, s.fp);
}

/// f'' from the capillary CMC equation, solved for the second derivative,
/// with the lambda placement of the rescaled equation.
inline double profile_rhs(const OdeProblem& p, double t, double f, double fp) {
  if (t <= 0.0 || t >= 1.0)
    throw DomainError("profile_rhs: t must lie in (0,1)");
  const double g = p.M.g();
  const double n = p.M.n();
  const double omt2 = 1.0 - t * t;
  const double g2 = g * g;
  const double q = omt2 * p.lambda * fp * fp / (1.0 + p.lambda * f * f);
  const double h = h_quantity(p.M, t, f, fp);
  double rhs = -(f - t * fp) - (4.0 - g2) / g2 * f -
               (n - 2.0) * (4.0 / g2 + q) * h;
  if (p.H0 != 0.0)
    rhs -= 4.0 * p.H0 / g2 * std::pow(1.0 + 0.25 * g2 * q, 1.5);
  return rhs / omt2;
}

/// Series start near the focal point t = 0 for data {f(0)=a, f'(0)=0}:
/// f = a + b2 t^2 + O(t^4) with b2 = -2(H0 + (n-1)a)/(g^2(m1+1)).
inline ProfileState series_start_at_zero(const OdeProblem& p, double a,
                                         double eps = 1e-6) {
  double g2 = static_cast<double>(p.M.g()) * p.M.g();
  double b2 = -2.0 * (p.H0 + (p.M.n() - 1.0) * a) / (g2 * (p.M.m1() + 1.0));
  return {eps, a + b2 * eps * eps, 2.0 * b2 * eps};
}

/// Focal compatibility slope at t = 1: f'(1) = 4((n-1)f(1)+H0)/(g^2(m2+1)).
inline double focal_one_slope(const OdeProblem& p, double f1) {
  double g2 = static_cast<double>(p.M.g()) * p.M.g();
  return 4.0 * ((p.M.n() - 1.0) * f1 + p.H0) / (g2 * (p.M.m2() + 1.0));
}

/// Series start near t = 1 for data {f(1)=c} (backward integration).
inline ProfileState series_start_at_one(const OdeProblem& p, double c,
                                        double eps = 1e-6) {
  double fp1 = focal_one_slope(p, c);
  return {1.0 - eps, c - fp1 * eps, fp1};
}

/// Lyapunov quantity Psi = f h - 1/(n-2).
inline double psi(const OdeProblem& p, const ProfileState& s) {
  if (s.t <= 0.0 || s.t >= 1.0) throw DomainError("psi: t must lie in (0,1)");
  return s.f * h_quantity(p, s) - 1.0 / (p.M.n() - 2.0);
}

/// CMC Lyapunov quantity; reduces to Psi when H0 = 0.
inline double psi_H0(const OdeProblem& p, const ProfileState& s) {
  if (s.t <= 0.0 || s.t >= 1.0) throw DomainError("psi_H0: t must lie in (0,1)");
  double base = s.f * h_quantity(p, s) - 1.0 / (p.M.n() - 2.0);
  if (p.H0 == 0.0) return base;
  double g2 = static_cast<double>(p.M.g()) * p.M.g();
  double root = std::sqrt(1.0 + 0.25 * g2 * (1.0 - s.t * s.t) * s.fp * s.fp /
                                    (1.0 + s.f * s.f));
  return base + p.H0 / (p.M.n() - 2.0) * s.f * root;
}

/// Limit-equation right-hand side: y'' = -c y'^2 (y - g r y') / (1 + y^2).
inline double limit_equation_rhs(double c, int g, double r, double y, double yp) {
  return -c * yp * yp * (y - g * r * yp) / (1.0 + y * y);
}

// ---------------------------------------------------------------------------
// Integration with event classification

struct ReachedZero {
  double t2 = 0.0;
  double slope2 = 0.0;          // +-infinity when the zero carries blow-up
  bool infinite_slope = false;  // theta = pi/2 signature
};

struct DerivativeBlowup {
  double t_blow_estimate = 0.0;
  double f_at_blow = 0.0;
  double t_detect = 0.0;
  double kappa = 0.0;  // f' ~ -sgn kappa (t_blow - t)^{-1/2}
};

struct ReachedFocalOne {
  double f1 = 0.0;
  double slope1 = 0.0;
  double compat_residual = 0.0;
};

struct StillPositive {
  double t_end = 0.0, f_end = 0.0, fp_end = 0.0;
};

struct StepFailure {
  double t_at = 0.0;
};

struct StopSpec {
  double slope_cap = 1e8;
  double t_min = 1e-7;
  double t_max = 1.0 - 1e-7;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 1000000;
  double zero_tol = 1e-12;
  // residual level below which a capped-slope trajectory counts as a zero
  double blow_zero_tol = 1e-7;
};

class ProfileTrajectory {
 public:
  ProfileTrajectory() = default;
  ProfileTrajectory(ode::Trajectory<2> path, OdeProblem prob)
      : path_(std::move(path)), problem_(std::move(prob)) {}

  bool empty() const { return path_.empty(); }
  const ode::Trajectory<2>& path() const { return path_; }
  const OdeProblem& problem() const { return problem_; }
  double t_start() const { return path_.t_start(); }
  double t_end() const { return path_.t_end(); }

  ProfileState at(double t) const {
    auto y = path_.eval(t);
    return {t, y[0], y[1]};
  }

  std::vector<ProfileState> sample(std::size_t m) const {
    std::vector<ProfileState> out;
    for (auto& [t, y] : path_.sample_grid(m)) out.push_back({t, y[0], y[1]});
    return out;
  }

  std::vector<ProfileState> step_points() const {
    std::vector<ProfileState> out;
    for (auto& [t, y] : path_.step_points()) out.push_back({t, y[0], y[1]});
    return out;
  }

 private:
  ode::Trajectory<2> path_;
  OdeProblem problem_{FoliationTriple::validate(2, 1, 1)};
};

struct IntegrationOutcome {
  std::variant<ReachedZero, DerivativeBlowup, ReachedFocalOne, StillPositive,
               StepFailure>
      result;
  ProfileTrajectory trajectory;

  bool reached_zero() const { return std::holds_alternative<ReachedZero>(result); }
  bool blew_up() const { return std::holds_alternative<DerivativeBlowup>(result); }
  bool step_failed() const { return std::holds_alternative<StepFailure>(result); }
  const ReachedZero& zero() const { return std::get<ReachedZero>(result); }
  const DerivativeBlowup& blowup() const { return std::get<DerivativeBlowup>(result); }
};

namespace detail {

/// Least-squares line through (t_i, 1/fp_i^2); by the inverse-square-root
/// asymptotics this is (t_blow - t)/kappa^2.
inline bool fit_blowup(const std::vector<std::pair<double, double>>& tail,
                       int direction, double& t_blow, double& kappa) {
  if (tail.size() < 2) return false;
  // centered regression: the abscissae cluster within ~1e-10 of the stall
  // point, so raw normal equations cancel catastrophically
  double n = static_cast<double>(tail.size());
  double tm = 0.0, pm = 0.0;
  for (auto& [t, fp] : tail) {
    tm += t;
    pm += 1.0 / (fp * fp);
  }
  tm /= n;
  pm /= n;
  double sxx = 0.0, sxy = 0.0;
  for (auto& [t, fp] : tail) {
    double x = t - tm;
    double y = 1.0 / (fp * fp) - pm;
    sxx += x * x;
    sxy += x * y;
  }
  if (sxx == 0.0) return false;
  double slope = sxy / sxx;
  // p = pm + slope (t - tm) with slope = -direction/kappa^2
  if (slope * direction >= 0.0) return false;
  kappa = std::sqrt(1.0 / std::abs(slope));
  t_blow = tm - pm / slope;
  return true;
}

}  // namespace detail

/// Integrate the profile equation from `start` in the given direction with
/// event detection: zero crossing (polished on the dense output), slope cap
/// with inverse-square-root classification, and focal/t-bound arrival.
inline IntegrationOutcome integrate(const OdeProblem& p, ProfileState start,
                                    int direction, const StopSpec& stop = {}) {
  using ode::DenseStep;
  const double dir = direction >= 0 ? 1.0 : -1.0;
  const double t_end = dir > 0 ? stop.t_max : stop.t_min;

  auto rhs = [&p](double t, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = profile_rhs(p, t, y[0], y[1]);
  };

  ode::IntegratorOptions opt;
  opt.rel_tol = stop.rel_tol;
  opt.abs_tol = stop.abs_tol;
  opt.max_steps = stop.max_steps;

  ode::Trajectory<2> traj;
  std::vector<std::pair<double, double>> slope_tail;  // (t, fp) samples

  enum Tag { kNone = 0, kZero = 1, kCap = 2 };

  auto observer = [&](const DenseStep<2>& ds, double& t_event, int& tag) {
    const double ta = ds.t0, tb = ds.t1();
    const double fa = ds.eval(0, ta), fb = ds.eval(0, tb);
    const double fpb = ds.eval(1, tb);

    double t_zero = 0.0;
    bool has_zero = false;
    if (fa > 0.0 && fb <= 0.0) {
      double lo = ta, hi = tb;
      for (int i = 0; i < 200 && std::abs(hi - lo) > 1e-16; ++i) {
        double mid = 0.5 * (lo + hi);
        (ds.eval(0, mid) > 0.0 ? lo : hi) = mid;
      }
      t_zero = 0.5 * (lo + hi);
      if (std::abs(ds.eval(0, t_zero)) > stop.zero_tol) t_zero = hi;
      has_zero = true;
    }

    double t_cap = 0.0;
    bool has_cap = false;
    if (std::abs(fpb) >= stop.slope_cap) {
      double lo = ta, hi = tb;
      for (int i = 0; i < 100 && std::abs(hi - lo) > 1e-16; ++i) {
        double mid = 0.5 * (lo + hi);
        (std::abs(ds.eval(1, mid)) < stop.slope_cap ? lo : hi) = mid;
      }
      t_cap = hi;
      has_cap = ds.eval(0, t_cap) > 0.0;
    }

    // keep a short history of steep-slope samples for the blow-up fit
    double fp_mid = ds.eval(1, 0.5 * (ta + tb));
    if (std::abs(fp_mid) >= 1e2) {
      slope_tail.emplace_back(0.5 * (ta + tb), fp_mid);
      slope_tail.emplace_back(tb, fpb);
      if (slope_tail.size() > 64)
        slope_tail.erase(slope_tail.begin(), slope_tail.begin() + 2);
    }

    if (has_zero && has_cap) {
      // earliest event in integration direction wins
      if ((t_zero - t_cap) * dir < 0.0)
        has_cap = false;
      else
        has_zero = false;
    }
    if (has_zero) {
      t_event = t_zero;
      tag = kZero;
      return true;
    }
    if (has_cap) {
      t_event = t_cap;
      tag = kCap;
      return true;
    }
    return false;
  };

  auto end = ode::integrate_dopri5<2>(rhs, start.t, {start.f, start.fp}, t_end,
                                      opt, &traj, observer);

  IntegrationOutcome out;
  out.trajectory = ProfileTrajectory(std::move(traj), p);

  // Steep-slope terminal states (slope-cap event, or step-size underflow at
  // the inverse-square-root singularity, which stalls below any finite cap):
  // fit f' ~ -sgn kappa (t_blow - t)^{-1/2} and decide between a zero with
  // unbounded slope and a blow-up while positive.
  auto classify_steep = [&](double t_at, double f_at, double fp_at) {
    // regress on the deep-asymptotic samples only; shallow ones carry O(1)
    // corrections that bias t_blow at the 1e-14 level
    double floor = std::max(1e3, std::abs(fp_at) / 100.0);
    std::vector<std::pair<double, double>> deep;
    for (auto& s : slope_tail)
      if (std::abs(s.second) >= floor) deep.push_back(s);
    const auto& samples = deep.size() >= 4 ? deep : slope_tail;
    double t_blow = t_at, kappa = 0.0;
    bool ok = detail::fit_blowup(samples, direction, t_blow, kappa);
    double f_pred = f_at;
    if (ok) f_pred = f_at - 2.0 * std::abs(fp_at) * std::abs(t_blow - t_at);
    double scale = std::max(1.0, std::abs(start.f));
    if (ok && f_pred <= stop.blow_zero_tol * scale) {
      ReachedZero z;
      z.t2 = t_blow;
      z.slope2 = fp_at > 0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
      z.infinite_slope = true;
      out.result = z;
    } else {
      DerivativeBlowup b;
      b.t_blow_estimate = ok ? t_blow : t_at;
      b.f_at_blow = ok ? std::max(f_pred, 0.0) : f_at;
      b.t_detect = t_at;
      b.kappa = kappa;
      out.result = b;
    }
  };

  switch (end.reason) {
    case ode::StopReason::EventStop: {
      if (end.event_tag == 1) {
        ReachedZero z;
        z.t2 = end.t;
        z.slope2 = end.y[1];
        out.result = z;
      } else {
        classify_steep(end.t, end.y[0], end.y[1]);
      }
      break;
    }
    case ode::StopReason::ReachedEnd: {
      if (dir > 0 && stop.t_max >= 1.0 - 1e-3) {
        ReachedFocalOne r;
        r.f1 = end.y[0];
        r.slope1 = end.y[1];
        r.compat_residual = end.y[1] - focal_one_slope(p, end.y[0]);
        out.result = r;
      } else {
        out.result = StillPositive{end.t, end.y[0], end.y[1]};
      }
      break;
    }
    case ode::StopReason::StepSizeUnderflow:
      if (std::abs(end.y[1]) >= 1e4 && end.y[0] > 0.0) {
        classify_steep(end.t, end.y[0], end.y[1]);
      } else {
        out.result = StepFailure{end.t};
      }
      break;
    case ode::StopReason::MaxSteps:
      out.result = StepFailure{end.t};
      break;
  }
  return out;
}

/// Early-termination certificate from the Lyapunov sign structure: valid for
/// g >= 3 and H0 >= 0.  True means the trajectory cannot reach zero forward.
inline bool blowup_certificate(const OdeProblem& p,
                               const ProfileTrajectory& traj) {
  if (p.M.g() <= 2)
    throw Unsupported("blowup_certificate: requires g >= 3");
  if (p.H0 < 0.0)
    throw Unsupported("blowup_certificate: requires H0 >= 0");
  const double ta = p.M.t_alpha();
  const double fd = 1e-5;
  // f solves the lambda-equation iff sqrt(lambda) f solves the lambda = 1
  // equation, so the Lyapunov quantity is evaluated on the scaled profile
  const double root_lambda = std::sqrt(p.lambda);
  OdeProblem scaled = p;
  scaled.lambda = 1.0;
  auto psiv = [&](double t) {
    auto s = traj.at(t);
    s.f *= root_lambda;
    s.fp *= root_lambda;
    return psi_H0(scaled, s);
  };
  double lo = std::max(traj.t_start(), ta);
  double hi = std::min(traj.t_end(), 1.0 - 1e-9);
  if (lo >= hi) return false;
  const int kSamples = 200;
  double step = std::min(fd, 0.1 * (hi - lo));
  for (int i = 0; i <= kSamples; ++i) {
    double t = lo + (hi - lo) * i / kSamples;
    if (traj.at(t).f <= 0.0) continue;
    double v = psiv(t);
    if (v < 0.0) continue;
    // centered difference clamped to the trajectory span
    double tp = std::min(t + step, hi), tm = std::max(t - step, lo);
    if (tp <= tm) continue;
    double dv = (psiv(tp) - psiv(tm)) / (tp - tm);
    if (dv >= 0.0) return true;
  }
  return false;
}

}  // namespace capcones
