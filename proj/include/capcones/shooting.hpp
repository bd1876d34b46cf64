#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "capcones/errors.hpp"
#include "capcones/profile_ode.hpp"

namespace capcones {

enum class SolutionKind { TypeI_M1, TypeI_M2, TypeII, TypeII_Symmetric };

inline const char* to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::TypeI_M1: return "TypeI_M1";
    case SolutionKind::TypeI_M2: return "TypeI_M2";
    case SolutionKind::TypeII: return "TypeII";
    case SolutionKind::TypeII_Symmetric: return "TypeII_Symmetric";
  }
  return "?";
}

struct BoundaryPoint {
  double t = 0.0;
  double slope = 0.0;
};

struct CapillarySolution {
  OdeProblem problem{FoliationTriple::validate(2, 1, 1)};
  SolutionKind kind = SolutionKind::TypeI_M1;
  double parameter = 0.0;  // a for Type I, t1 for Type II
  double theta = 0.0;
  std::vector<BoundaryPoint> boundary;
  double residual = 0.0;
  std::optional<double> a_star;
  ProfileTrajectory trajectory;
};

struct ShootOptions {
  StopSpec stop;
  double series_eps = 1e-6;
  double a_tol = 1e-8;         // find_a_star interval width
  double param_tol = 1e-12;    // generic bisection interval width
  double residual_tol = 1e-8;  // capillary condition mismatch
  int bisect_cap = 200;
  bool experimental_negative_h0 = false;
  double negative_h0_lambda0 = 0.1;
};

namespace detail {

inline void check_h0_gate(const OdeProblem& p, double a, const ShootOptions& o) {
  if (p.H0 >= 0.0) return;
  if (!o.experimental_negative_h0)
    throw DomainError("negative H0 requires the experimental flag");
  if (!(std::abs(p.H0) < o.negative_h0_lambda0 * a))
    throw DomainError("negative H0 out of range: need |H0| < lambda0 * a");
}

}  // namespace detail

/// One Type I shot from the focal point t = 0 with initial height a.
struct Type1Shot {
  enum class Tag { Zero, Blowup, Other } tag = Tag::Other;
  double theta = 0.0;
  double t_zero = 0.0;
  double slope = 0.0;
  IntegrationOutcome raw;
};

inline Type1Shot type1_theta_of_a(const OdeProblem& p, double a,
                                  const ShootOptions& opts = {}) {
  if (!(a > 0.0)) throw DomainError("type1_theta_of_a: a must be positive");
  detail::check_h0_gate(p, a, opts);
  auto start = series_start_at_zero(p, a, opts.series_eps);
  auto out = integrate(p, start, +1, opts.stop);
  Type1Shot shot;
  shot.raw = out;
  if (out.reached_zero()) {
    shot.tag = Type1Shot::Tag::Zero;
    shot.t_zero = out.zero().t2;
    shot.slope = out.zero().slope2;
    if (out.zero().infinite_slope) {
      shot.theta = 0.5 * M_PI;
    } else {
      double w = std::sqrt(1.0 - shot.t_zero * shot.t_zero) * std::abs(shot.slope);
      shot.theta = std::atan(0.5 * p.M.g() * w);
    }
  } else if (out.blew_up()) {
    shot.tag = Type1Shot::Tag::Blowup;
  }
  return shot;
}

/// a* = sup{a : the Type I shot reaches a zero}, located by bisection on the
/// reach-zero / blow-up dichotomy.  Returns the last reach-zero height.
inline double find_a_star(const OdeProblem& p, double a_lo = 0.1,
                          double a_hi = 0.0, const ShootOptions& opts = {}) {
  auto tag_of = [&](double a) { return type1_theta_of_a(p, a, opts).tag; };
  if (tag_of(a_lo) != Type1Shot::Tag::Zero)
    throw NoBracket("find_a_star: a_lo does not reach a zero");
  if (a_hi <= a_lo) a_hi = std::max(2.0 * a_lo, 1.0);
  int guard = 0;
  while (tag_of(a_hi) == Type1Shot::Tag::Zero) {
    a_lo = a_hi;
    a_hi *= 2.0;
    if (++guard > 60) throw NoBracket("find_a_star: no blow-up found above a_lo");
  }
  for (int i = 0; i < opts.bisect_cap && a_hi - a_lo > opts.a_tol; ++i) {
    double mid = 0.5 * (a_lo + a_hi);
    (tag_of(mid) == Type1Shot::Tag::Zero ? a_lo : a_hi) = mid;
  }
  return a_lo;
}

namespace detail {

inline CapillarySolution make_type1_solution(const OdeProblem& p, double a,
                                             const Type1Shot& shot,
                                             double theta_target,
                                             const ShootOptions& opts) {
  CapillarySolution sol;
  sol.problem = p;
  sol.kind = SolutionKind::TypeI_M1;
  sol.parameter = a;
  sol.theta = shot.theta;
  sol.boundary.push_back({shot.t_zero, shot.slope});
  sol.trajectory = shot.raw.trajectory;
  if (std::isfinite(shot.slope)) {
    double w = std::sqrt(1.0 - shot.t_zero * shot.t_zero) * std::abs(shot.slope);
    sol.residual = std::abs(w - 2.0 / p.M.g() * std::tan(theta_target));
  } else {
    sol.residual = 0.0;
  }
  (void)opts;
  return sol;
}

}  // namespace detail

/// Solve theta(a) = theta_target by bisection on (0, a*]; theta = pi/2
/// returns the free-boundary solution at a*.
inline CapillarySolution type1_solve_for_theta(const OdeProblem& p,
                                               double theta_target,
                                               const ShootOptions& opts = {}) {
  if (!(theta_target > 0.0 && theta_target <= 0.5 * M_PI + 1e-12))
    throw DomainError("type1_solve_for_theta: theta in (0, pi/2]");

  double a_star = find_a_star(p, 0.05, 0.0, opts);
  if (std::abs(theta_target - 0.5 * M_PI) <= 1e-9) {
    auto shot = type1_theta_of_a(p, a_star, opts);
    auto sol = detail::make_type1_solution(p, a_star, shot, theta_target, opts);
    sol.theta = 0.5 * M_PI;
    sol.a_star = a_star;
    return sol;
  }

  auto theta_of = [&](double a) -> double {
    auto shot = type1_theta_of_a(p, a, opts);
    if (shot.tag == Type1Shot::Tag::Zero) return shot.theta;
    return 0.5 * M_PI + 1e-3;  // blow-up sits above every target angle
  };

  auto bisect = [&](double lo, double hi) {
    for (int i = 0; i < opts.bisect_cap && hi - lo > opts.param_tol; ++i) {
      double mid = 0.5 * (lo + hi);
      (theta_of(mid) < theta_target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  double lo = 1e-6 * a_star, hi = a_star;
  double a = bisect(lo, hi);
  auto shot = type1_theta_of_a(p, a, opts);
  auto sol = detail::make_type1_solution(p, a, shot, theta_target, opts);
  if (sol.residual > opts.residual_tol) {
    // theta(a) was not monotone on the bracket; re-bracket locally
    const int kScan = 128;
    bool fixed = false;
    double prev_a = lo, prev_th = theta_of(prev_a);
    for (int i = 1; i <= kScan; ++i) {
      double cur_a = lo + (hi - lo) * i / kScan;
      double cur_th = theta_of(cur_a);
      if ((prev_th - theta_target) * (cur_th - theta_target) <= 0.0) {
        a = bisect(prev_a, cur_a);
        shot = type1_theta_of_a(p, a, opts);
        sol = detail::make_type1_solution(p, a, shot, theta_target, opts);
        if (sol.residual <= opts.residual_tol) {
          fixed = true;
          break;
        }
      }
      prev_a = cur_a;
      prev_th = cur_th;
    }
    if (!fixed)
      throw NonMonotone("type1_solve_for_theta: could not match theta(a)");
  }
  return sol;
}

/// Two-boundary shot for Type II: from {f(t1)=0, f'(t1)=(2/g)tan(theta)/
/// sqrt(1-t1^2)}, returns the matching residual R at the second zero.
struct Type2Eval {
  bool has_second_zero = false;
  double R = 0.0;
  double tau = 0.0;
  double slope_at_tau = 0.0;
  IntegrationOutcome raw;
};

inline Type2Eval type2_residual(const OdeProblem& p, double t1, double theta,
                                const ShootOptions& opts = {}) {
  if (!(t1 > 0.0 && t1 < p.M.t_alpha()))
    throw DomainError("type2_residual: t1 in (0, t_alpha)");
  if (!(theta > 0.0 && theta < 0.5 * M_PI))
    throw DomainError("type2_residual: theta in (0, pi/2)");
  double slope1 = 2.0 / p.M.g() * std::tan(theta) / std::sqrt(1.0 - t1 * t1);
  auto out = integrate(p, {t1, 0.0, slope1}, +1, opts.stop);
  Type2Eval ev;
  ev.raw = out;
  if (out.reached_zero() && !out.zero().infinite_slope) {
    ev.has_second_zero = true;
    ev.tau = out.zero().t2;
    ev.slope_at_tau = out.zero().slope2;
    double w1 = (1.0 - t1 * t1) * slope1 * slope1;
    double w2 = (1.0 - ev.tau * ev.tau) * ev.slope_at_tau * ev.slope_at_tau;
    ev.R = w1 - w2;
  }
  return ev;
}

/// Type II solver: scan t1 for the sign change of R (no-second-zero counts
/// as R = -inf) and bisect to the capillary-matched profile.
inline CapillarySolution type2_solve(const OdeProblem& p, double theta,
                                     const ShootOptions& opts = {}) {
  const double ta = p.M.t_alpha();
  const double delta = std::min(0.02, 0.05 * ta);
  auto Rof = [&](double t1) { return type2_residual(p, t1, theta, opts); };

  // R > 0 holds for t1 small, but the window can shrink to ~1e-3 (e.g. the
  // (6,1,1) foliation), so scan log-spaced small t1 before the linear grid
  std::vector<double> grid;
  for (double t1 = 1e-5; t1 < delta; t1 *= 1.9) grid.push_back(t1);
  const int kGrid = 48;
  for (int i = 0; i <= kGrid; ++i)
    grid.push_back(delta + (ta - 2.0 * delta) * i / kGrid);

  double prev_t = grid.front();
  auto prev = Rof(prev_t);
  double blo = 0.0, bhi = 0.0;
  bool found = false;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double t1 = grid[i];
    auto cur = Rof(t1);
    double Rp = prev.has_second_zero ? prev.R : -std::numeric_limits<double>::infinity();
    double Rc = cur.has_second_zero ? cur.R : -std::numeric_limits<double>::infinity();
    if (Rp > 0.0 && Rc <= 0.0) {
      blo = prev_t;
      bhi = t1;
      found = true;
      break;
    }
    prev = cur;
    prev_t = t1;
  }
  if (!found) throw NoSignChange("type2_solve: no sign change of R in (0, t_alpha)");

  Type2Eval best = prev;
  double t1_best = blo;
  for (int i = 0; i < opts.bisect_cap && bhi - blo > opts.param_tol; ++i) {
    double mid = 0.5 * (blo + bhi);
    auto cur = Rof(mid);
    if (cur.has_second_zero && cur.R > 0.0) {
      blo = mid;
      best = cur;
      t1_best = mid;
    } else {
      bhi = mid;
      if (cur.has_second_zero && std::abs(cur.R) < std::abs(best.R)) {
        best = cur;
        t1_best = mid;
      }
    }
  }
  if (!best.has_second_zero)
    throw NoSignChange("type2_solve: lost the second zero during bisection");

  double slope1 = 2.0 / p.M.g() * std::tan(theta) / std::sqrt(1.0 - t1_best * t1_best);
  CapillarySolution sol;
  sol.problem = p;
  sol.kind = SolutionKind::TypeII;
  sol.parameter = t1_best;
  sol.theta = theta;
  sol.boundary.push_back({t1_best, slope1});
  sol.boundary.push_back({best.tau, best.slope_at_tau});
  double target = 2.0 / p.M.g() * std::tan(theta);
  sol.residual = std::abs(
      std::sqrt(1.0 - best.tau * best.tau) * std::abs(best.slope_at_tau) - target);
  sol.trajectory = best.raw.trajectory;
  return sol;
}

/// Symmetric Type II solver (m1 = m2): shoot from the minimal leaf
/// t = 1/sqrt(2) with height a and reflect across it.
inline CapillarySolution type2_symmetric_solve(const OdeProblem& p, double a,
                                               const ShootOptions& opts = {}) {
  if (p.M.m1() != p.M.m2())
    throw DomainError("type2_symmetric_solve: needs m1 = m2");
  if (!(a > 0.0)) throw DomainError("type2_symmetric_solve: a > 0");
  detail::check_h0_gate(p, a, opts);
  const double tc = 1.0 / std::sqrt(2.0);
  auto out = integrate(p, {tc, a, 0.0}, +1, opts.stop);
  if (!out.reached_zero() || out.zero().infinite_slope)
    throw BlowupError("type2_symmetric_solve: shot did not reach a finite-slope zero");
  double t2 = out.zero().t2;
  double s2 = out.zero().slope2;
  double t1 = reflect_point(t2);
  double s1 = -s2 * t1 / t2;  // slope of the reflected branch at t1

  CapillarySolution sol;
  sol.problem = p;
  sol.kind = SolutionKind::TypeII_Symmetric;
  sol.parameter = a;
  sol.theta = std::atan(0.5 * p.M.g() * std::sqrt(1.0 - t2 * t2) * std::abs(s2));
  sol.boundary.push_back({t1, s1});
  sol.boundary.push_back({t2, s2});
  sol.residual = std::abs(std::sqrt(1.0 - t1 * t1) * std::abs(s1) -
                          std::sqrt(1.0 - t2 * t2) * std::abs(s2));
  sol.trajectory = out.trajectory;
  return sol;
}

// ---------------------------------------------------------------------------
// Parameter sweeps

struct SweepRow {
  double parameter = 0.0;
  double theta = 0.0;
  std::vector<double> t_zeros;
  std::vector<double> slopes;
  std::string outcome;
  bool non_monotone_flag = false;
};

struct SweepTable {
  SolutionKind kind = SolutionKind::TypeI_M1;
  std::vector<SweepRow> rows;
};

/// Evaluate the family map over a parameter grid.  Rows record per-parameter
/// outcomes; non-monotone theta trends are flagged, never failed.
inline SweepTable sweep(const OdeProblem& p, const std::vector<double>& grid,
                        SolutionKind kind, const ShootOptions& opts = {},
                        unsigned jobs = 1) {
  SweepTable table;
  table.kind = kind;
  table.rows.resize(grid.size());

  auto run_row = [&](std::size_t i) {
    SweepRow row;
    row.parameter = grid[i];
    try {
      if (kind == SolutionKind::TypeI_M1 || kind == SolutionKind::TypeI_M2) {
        // the M2 family is the reflected run of the swapped triple; its
        // boundary data is mapped back through t -> sqrt(1-t^2)
        OdeProblem q = p;
        if (kind == SolutionKind::TypeI_M2) q.M = p.M.reflect();
        auto shot = type1_theta_of_a(q, grid[i], opts);
        if (shot.tag == Type1Shot::Tag::Zero) {
          row.theta = shot.theta;
          if (kind == SolutionKind::TypeI_M2 && std::isfinite(shot.slope)) {
            double tz = reflect_point(shot.t_zero);
            row.t_zeros.push_back(tz);
            row.slopes.push_back(-shot.slope * tz / shot.t_zero);
          } else {
            row.t_zeros.push_back(shot.t_zero);
            row.slopes.push_back(shot.slope);
          }
          row.outcome = "reached-zero";
        } else if (shot.tag == Type1Shot::Tag::Blowup) {
          row.outcome = "blow-up";
        } else {
          row.outcome = "still-positive";
        }
      } else if (kind == SolutionKind::TypeII) {
        auto sol = type2_solve(p, grid[i], opts);
        row.theta = grid[i];
        row.t_zeros = {sol.boundary[0].t, sol.boundary[1].t};
        row.slopes = {sol.boundary[0].slope, sol.boundary[1].slope};
        row.outcome = "converged";
      } else {
        auto sol = type2_symmetric_solve(p, grid[i], opts);
        row.theta = sol.theta;
        row.t_zeros = {sol.boundary[0].t, sol.boundary[1].t};
        row.slopes = {sol.boundary[0].slope, sol.boundary[1].slope};
        row.outcome = "converged";
      }
    } catch (const std::exception& e) {
      row.outcome = std::string("error: ") + e.what();
    }
    table.rows[i] = std::move(row);
  };

  if (jobs <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_row(i);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < grid.size(); i += jobs) run_row(i);
      });
    }
    (void)next;
    for (auto& th : pool) th.join();
  }

  for (std::size_t i = 1; i + 1 < table.rows.size(); ++i) {
    double a = table.rows[i - 1].theta, b = table.rows[i].theta,
           c = table.rows[i + 1].theta;
    if (a > 0 && b > 0 && c > 0 && ((b - a) * (c - b) < 0.0))
      table.rows[i].non_monotone_flag = true;
  }
  return table;
}

}  // namespace capcones
