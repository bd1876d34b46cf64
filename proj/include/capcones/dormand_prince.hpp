#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace capcones::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step of the 5(4) pair together with the coefficients of the
/// fifth-order dense interpolant of Hairer-Norsett-Wanner.
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0, h = 0.0;
  State<N> r1{}, r2{}, r3{}, r4{}, r5{};

  double t1() const { return t0 + h; }

  double eval(std::size_t i, double t) const {
    double th = (t - t0) / h;
    double th1 = 1.0 - th;
    return r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
  }

  State<N> eval(double t) const {
    State<N> y;
    for (std::size_t i = 0; i < N; ++i) y[i] = eval(i, t);
    return y;
  }

  bool contains(double t) const {
    return h > 0 ? (t >= t0 - 1e-14 && t <= t1() + 1e-14)
                 : (t <= t0 + 1e-14 && t >= t1() - 1e-14);
  }
};

/// Piecewise dense-output trajectory, continuously evaluable on its span.
template <std::size_t N>
class Trajectory {
 public:
  void push(const DenseStep<N>& s) { steps_.push_back(s); }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }
  const DenseStep<N>& step(std::size_t i) const { return steps_[i]; }

  double t_start() const { return steps_.front().t0; }
  double t_end() const { return steps_.back().t1(); }

  State<N> eval(double t) const {
    return locate(t).eval(t);
  }

  double eval(std::size_t comp, double t) const {
    return locate(t).eval(comp, t);
  }

  /// Uniform sample of m+1 points across the span.
  std::vector<std::pair<double, State<N>>> sample_grid(std::size_t m) const {
    std::vector<std::pair<double, State<N>>> out;
    double a = t_start(), b = t_end();
    for (std::size_t i = 0; i <= m; ++i) {
      double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(m);
      out.emplace_back(t, eval(t));
    }
    return out;
  }

  /// Endpoints of the accepted steps (the natural dense-output nodes).
  std::vector<std::pair<double, State<N>>> step_points() const {
    std::vector<std::pair<double, State<N>>> out;
    if (steps_.empty()) return out;
    out.emplace_back(steps_.front().t0, steps_.front().eval(steps_.front().t0));
    for (const auto& s : steps_) out.emplace_back(s.t1(), s.eval(s.t1()));
    return out;
  }

 private:
  const DenseStep<N>& locate(double t) const {
    bool fwd = steps_.front().h > 0;
    std::size_t lo = 0, hi = steps_.size() - 1;
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      double tm = steps_[mid].t1();
      bool before = fwd ? (t > tm) : (t < tm);
      if (before)
        lo = mid + 1;
      else
        hi = mid;
    }
    return steps_[lo];
  }

  std::vector<DenseStep<N>> steps_;
};

enum class StopReason { ReachedEnd, EventStop, StepSizeUnderflow, MaxSteps };

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::size_t max_steps = 1000000;
  double h_max = 0.0;  // 0: span-derived
};

template <std::size_t N>
struct IntegrationEnd {
  StopReason reason = StopReason::ReachedEnd;
  double t = 0.0;
  State<N> y{};
  std::size_t n_steps = 0;
  int event_tag = 0;  // caller-defined, set on EventStop
};

/// Step observer: inspects the freshly accepted dense step; to stop, return
/// the event time (inside the step) and set `tag`.
template <std::size_t N>
using StepObserver =
    std::function<bool(const DenseStep<N>&, double& t_event, int& tag)>;

/// Adaptive Dormand-Prince 5(4) with dense output.  Direction is inferred
/// from t_end - t0; integrates until t_end, an observer event, step size
/// underflow, or the step cap.
template <std::size_t N, typename RHS>
IntegrationEnd<N> integrate_dopri5(RHS&& rhs, double t0, State<N> y0,
                                   double t_end, const IntegratorOptions& opt,
                                   Trajectory<N>* traj,
                                   const StepObserver<N>& observer = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113,
                          a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                          a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0,
                          d7 = 69997945.0 / 29380423.0;

  IntegrationEnd<N> end;
  double dir = (t_end >= t0) ? 1.0 : -1.0;
  double span = std::abs(t_end - t0);
  double hmax = opt.h_max > 0 ? opt.h_max : span;

  State<N> y = y0;
  State<N> k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
  double t = t0;
  rhs(t, y, k1);

  // Initial step size: crude norm-based guess, then let the controller adapt.
  double d0 = 0.0, dd1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    double sc = opt.abs_tol + opt.rel_tol * std::abs(y[i]);
    d0 = std::max(d0, std::abs(y[i]) / sc);
    dd1 = std::max(dd1, std::abs(k1[i]) / sc);
  }
  double h = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * (d0 / dd1);
  h = dir * std::min(h, hmax);

  double facold = 1e-4;
  bool last = false;

  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    if (std::abs(h) <= std::abs(t) * 2.3e-16 + 1e-300) {
      end.reason = StopReason::StepSizeUnderflow;
      end.t = t;
      end.y = y;
      end.n_steps = step;
      return end;
    }
    if ((t + 1.01 * h - t_end) * dir > 0.0) {
      h = t_end - t;
      last = true;
    }

    for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] +
                            a75 * k5[i] + a76 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double sc = opt.abs_tol +
                  opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                       e6 * k6[i] + e7 * k7[i]);
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / N);

    double fac11 = std::pow(std::max(err, 1e-32), 0.2);
    double fac = fac11 / std::pow(facold, 0.04);
    fac = std::max(1.0 / 10.0, std::min(1.0 / 0.2, fac / 0.9));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      DenseStep<N> ds;
      ds.t0 = t;
      ds.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        double ydiff = ynew[i] - y[i];
        double bspl = h * k1[i] - ydiff;
        ds.r1[i] = y[i];
        ds.r2[i] = ydiff;
        ds.r3[i] = bspl;
        ds.r4[i] = ydiff - h * k7[i] - bspl;
        ds.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                        d6 * k6[i] + d7 * k7[i]);
      }
      if (traj) traj->push(ds);

      t += h;
      y = ynew;
      k1 = k7;  // FSAL

      if (observer) {
        double t_event = t;
        int tag = 0;
        if (observer(ds, t_event, tag)) {
          end.reason = StopReason::EventStop;
          end.t = t_event;
          end.y = ds.eval(t_event);
          end.n_steps = step + 1;
          end.event_tag = tag;
          return end;
        }
      }
      if (last) {
        end.reason = StopReason::ReachedEnd;
        end.t = t;
        end.y = y;
        end.n_steps = step + 1;
        return end;
      }
      if (std::abs(hnew) > hmax) hnew = dir * hmax;
      h = hnew;
    } else {
      h = hnew;
      last = false;
    }
  }
  end.reason = StopReason::MaxSteps;
  end.t = t;
  end.y = y;
  return end;
}

}  // namespace capcones::ode
