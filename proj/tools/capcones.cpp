// Command-line frontend for the capillary-cone solvers: Type I/II shooting,
// axisymmetric runs, bundle classification, and the oracle battery.

#include <clocale>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capcones/axisym.hpp"
#include "capcones/closed_forms.hpp"
#include "capcones/io.hpp"
#include "capcones/profile_ode.hpp"
#include "capcones/shooting.hpp"
#include "capcones/specfun.hpp"
#include "capcones/topology.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace capcones;

namespace {

struct CommonArgs {
  int g = 2, m1 = 1, m2 = 1;
  double h0 = 0.0;
  double lambda = 1.0;
  bool formal = false;
  bool deg = false;
  std::string out_dir;
  double tol_rel = 1e-10, tol_abs = 1e-12, slope_cap = 1e8, residual_tol = 1e-8;
  bool experimental_negative_h0 = false;
  bool svg_data = false;

  void attach(CLI::App* cmd, bool with_triple = true) {
    if (with_triple) {
      cmd->add_option("-g,--g", g, "number of distinct principal curvatures");
      cmd->add_option("--m1", m1, "first multiplicity");
      cmd->add_option("--m2", m2, "second multiplicity");
      cmd->add_flag("--formal", formal, "bypass the classification check");
    }
    cmd->add_option("--h0", h0, "prescribed mean curvature");
    cmd->add_option("--lambda", lambda, "rescaling parameter");
    cmd->add_flag("--deg", deg, "angles are given in degrees");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--tol-rel", tol_rel, "integrator relative tolerance");
    cmd->add_option("--tol-abs", tol_abs, "integrator absolute tolerance");
    cmd->add_option("--slope-cap", slope_cap, "blow-up slope threshold");
    cmd->add_option("--residual-tol", residual_tol, "capillary residual tolerance");
    cmd->add_flag("--experimental-negative-h0", experimental_negative_h0,
                  "allow small negative H0 (|H0| < 0.1 a)");
    cmd->add_flag("--svg-data", svg_data, "emit polyline coordinates");
  }

  FoliationTriple triple() const {
    return FoliationTriple::validate(g, m1, m2, formal);
  }

  ShootOptions shoot_options() const {
    ShootOptions o;
    o.stop.rel_tol = tol_rel;
    o.stop.abs_tol = tol_abs;
    o.stop.slope_cap = slope_cap;
    o.residual_tol = residual_tol;
    o.experimental_negative_h0 = experimental_negative_h0;
    return o;
  }

  double angle(double v) const { return deg ? v * M_PI / 180.0 : v; }

  fs::path out_path() const {
    std::string dir = out_dir;
    if (dir.empty()) {
      if (const char* env = std::getenv("CAPCONES_OUT")) dir = env;
    }
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return fs::path(dir);
  }
};

void emit_solution(const CommonArgs& args, const std::string& stem,
                   const CapillarySolution& sol) {
  auto dir = args.out_path();
  io::write_file((dir / (stem + "_solution.json")).string(),
                 io::solution_json(sol).dump(2) + "\n");
  io::write_file((dir / (stem + "_trajectory.csv")).string(),
                 io::profile_csv(sol.trajectory));
  if (args.svg_data) {
    std::string poly;
    for (auto& s : sol.trajectory.step_points())
      poly += io::fmt17(s.t) + "," + io::fmt17(s.f) + "\n";
    io::write_file((dir / (stem + "_polyline.txt")).string(), poly);
  }
  std::cout << io::solution_json(sol).dump(2) << "\n";
}

int run_type1(const CommonArgs& args, double theta, double a, bool a_star_mode,
              bool fm_csv) {
  OdeProblem prob{args.triple(), args.h0, args.lambda};
  auto opts = args.shoot_options();
  if (fm_csv) {
    LegendreOperator op(prob.M);
    std::string csv = "t,f_M,f_M_prime\n";
    for (int i = 0; i <= 380; ++i) {
      double t = 0.95 * i / 380.0;
      csv += io::fmt17(t) + "," + io::fmt17(op.f_M(t)) + "," +
             io::fmt17(op.f_M_prime(t)) + "\n";
    }
    io::write_file((args.out_path() / "fm_table.csv").string(), csv);
  }
  CapillarySolution sol;
  if (a_star_mode) {
    sol = type1_solve_for_theta(prob, 0.5 * M_PI, opts);
  } else if (a > 0.0) {
    auto shot = type1_theta_of_a(prob, a, opts);
    if (shot.tag != Type1Shot::Tag::Zero) {
      std::cerr << "type1: shot at a = " << a << " did not reach a zero\n";
      return 3;
    }
    sol.problem = prob;
    sol.kind = SolutionKind::TypeI_M1;
    sol.parameter = a;
    sol.theta = shot.theta;
    sol.boundary.push_back({shot.t_zero, shot.slope});
    sol.residual = 0.0;
    sol.trajectory = shot.raw.trajectory;
  } else {
    sol = type1_solve_for_theta(prob, args.angle(theta), opts);
  }
  emit_solution(args, "type1", sol);
  return sol.residual <= args.residual_tol ? 0 : 3;
}

int run_type2(const CommonArgs& args, double theta, double sym_a) {
  OdeProblem prob{args.triple(), args.h0, args.lambda};
  auto opts = args.shoot_options();
  CapillarySolution sol = sym_a > 0.0
                              ? type2_symmetric_solve(prob, sym_a, opts)
                              : type2_solve(prob, args.angle(theta), opts);
  emit_solution(args, "type2", sol);
  return sol.residual <= args.residual_tol ? 0 : 3;
}

int run_sweep(const CommonArgs& args, const std::string& kind, double from,
              double to, int count, unsigned jobs) {
  OdeProblem prob{args.triple(), args.h0, args.lambda};
  SolutionKind k = SolutionKind::TypeI_M1;
  if (kind == "type1-m2")
    k = SolutionKind::TypeI_M2;
  else if (kind == "type2")
    k = SolutionKind::TypeII;
  else if (kind == "type2-symmetric")
    k = SolutionKind::TypeII_Symmetric;
  else if (kind != "type1")
    throw CLI::ValidationError("--kind must be type1|type1-m2|type2|type2-symmetric");
  std::vector<double> grid;
  for (int i = 0; i < count; ++i)
    grid.push_back(count == 1 ? from : from + (to - from) * i / (count - 1.0));
  auto table = sweep(prob, grid, k, args.shoot_options(), jobs);
  auto dir = args.out_path();
  io::write_file((dir / "sweep.csv").string(), io::sweep_csv(table));
  std::cout << io::sweep_csv(table);
  return 0;
}

int run_axisym(const CommonArgs& args, int n, bool threshold_mode, double theta,
               double shot_a) {
  auto dir = args.out_path();
  if (threshold_mode) {
    double thr = threshold_scan(n);
    json j = {{"n", n}, {"threshold", thr}};
    io::write_file((dir / "axisym_threshold.json").string(), j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (shot_a > 0.0) {
    AxisymStop stop;
    stop.rel_tol = args.tol_rel;
    stop.abs_tol = args.tol_abs;
    stop.stop_at_zero = false;
    auto out = integrate_axisym(n, args.h0, {0.0, shot_a, 0.0}, +1, stop);
    io::write_file((dir / "axisym_trajectory.csv").string(),
                   io::axisym_csv(out.trajectory));
    std::cout << "wrote axisym_trajectory.csv\n";
    return 0;
  }
  auto sol = axisym_type2_solve(n, args.h0, args.angle(theta));
  auto rep = verify_even(sol);
  json j = {{"n", n},
            {"H0", args.h0},
            {"theta", sol.theta},
            {"xi1", sol.xi1},
            {"xi2", sol.xi2},
            {"slope1", sol.slope1},
            {"slope2", sol.slope2},
            {"f0", sol.f0},
            {"fp0", sol.fp0},
            {"residual", sol.residual},
            {"evenness",
             {{"xi_sum_abs", rep.xi_sum_abs},
              {"fp0_abs", rep.fp0_abs},
              {"max_asymmetry", rep.max_asymmetry}}}};
  io::write_file((dir / "axisym_solution.json").string(), j.dump(2) + "\n");
  io::write_file((dir / "axisym_trajectory.csv").string(),
                 io::axisym_csv(sol.trajectory));
  std::cout << j.dump(2) << "\n";
  return rep.pass(1e-6) && sol.residual <= 1e-6 ? 0 : 3;
}

int run_classify(const CommonArgs& args, const std::string& format, int ot_m,
                 int ot_k, int ot_q, bool have_params) {
  auto M = args.triple();
  std::optional<OtFkmParams> params;
  if (have_params) params = OtFkmParams(ot_m, ot_k, ot_q);
  auto rows = classify(M, params);
  if (format == "md")
    std::cout << io::classification_markdown(M, rows);
  else
    std::cout << io::classification_json(rows).dump(2) << "\n";
  return 0;
}

int run_limit_eq(const CommonArgs& args, double c, int gpar, double L,
                 double r_min) {
  LimitInverse li(c, gpar);
  double C0, C1;
  li.match_initial_data(L, -1.0, C0, C1);
  auto rhs = [&](double r, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = limit_equation_rhs(c, gpar, r, y[0], y[1]);
  };
  ode::IntegratorOptions opt;
  opt.rel_tol = args.tol_rel;
  opt.abs_tol = args.tol_abs;
  ode::Trajectory<2> traj;
  auto end = ode::integrate_dopri5<2>(rhs, 0.0, {L, -1.0}, r_min, opt, &traj);
  if (end.reason != ode::StopReason::ReachedEnd) {
    std::cerr << "limit-eq: backward solution stopped at r = " << end.t
              << " (vertical tangent)\n";
    return 3;
  }
  double max_err = 0.0;
  for (double r = std::max(r_min, -3.0); r <= -0.05; r += 0.05) {
    max_err = std::max(max_err, std::abs(li.r(C0, C1, traj.eval(0, r)) - r));
  }
  json j = {{"c", c},          {"g", gpar},
            {"L", L},          {"beta_plus", li.beta_plus()},
            {"beta_minus", li.beta_minus()},
            {"roundtrip_max_err", max_err}};
  std::string csv = "r,y,yp\n";
  for (auto& [r, y] : traj.step_points())
    csv += io::fmt17(r) + "," + io::fmt17(y[0]) + "," + io::fmt17(y[1]) + "\n";
  auto dir = args.out_path();
  io::write_file((dir / "limit_eq.json").string(), j.dump(2) + "\n");
  io::write_file((dir / "limit_eq.csv").string(), csv);
  std::cout << j.dump(2) << "\n";
  return 0;
}

struct Gate {
  std::string name;
  bool ok;
};

int run_verify_oracles() {
  std::vector<Gate> gates;
  auto check = [&](const std::string& name, auto&& fn) {
    bool ok = false;
    try {
      ok = fn();
    } catch (const std::exception& e) {
      ok = false;
    }
    gates.push_back({name, ok});
  };

  check("clifford residual gates", [] {
    clifford_minimal_from_zero(FoliationTriple::validate(2, 1, 2));
    clifford_minimal_from_zero(FoliationTriple::validate(2, 2, 1));
    clifford_minimal_across_one(FoliationTriple::validate(2, 1, 2));
    clifford_cmc(FoliationTriple::validate(2, 1, 2), 0.5);
    clifford_cmc(FoliationTriple::validate(2, 1, 2), 3.0);
    return true;
  });
  check("axisym residual gates", [] {
    axisym_clifford(4);
    axisym_clifford(7);
    axisym_half_lawson(7);
    latitude_sphere(7, 2.0);
    constant_solution(FoliationTriple::validate(4, 2, 5), 1.5);
    return true;
  });
  check("f_M closed form (g=1)", [] {
    LegendreOperator op(FoliationTriple::validate(1, 3, 3));
    for (double t = 0.0; t < 0.95; t += 0.05)
      if (std::abs(op.f_M(t) - (1.0 - 2.0 * t * t)) > 1e-14) return false;
    return std::abs(op.t_M_zero() - 1.0 / std::sqrt(2.0)) < 1e-12;
  });
  check("legendre residual of f_M", [] {
    for (auto M : {FoliationTriple::validate(4, 2, 5),
                   FoliationTriple::validate(3, 4, 4)}) {
      LegendreOperator op(M);
      for (double t = 0.05; t <= 0.9; t += 0.05)
        if (std::abs(op.residual(t, op.f_M(t), op.f_M_prime(t),
                                 op.f_M_second(t))) > 1e-9)
          return false;
    }
    return true;
  });
  check("Psi_H0 vanishes on the CMC Clifford family", [] {
    auto M = FoliationTriple::validate(2, 1, 2);
    for (double a : {0.5, 1.0, 3.0}) {
      auto prof = clifford_cmc(M, a);
      OdeProblem p{M, prof.H0, 1.0};
      for (int i = 1; i < 200; ++i) {
        double t = prof.hi * i / 201.0;
        if (std::abs(psi_H0(p, {t, prof.f(t), prof.fp(t)})) > 1e-10)
          return false;
      }
    }
    return true;
  });
  check("conserved quantity drift", [] {
    auto prof = axisym_clifford(7);
    AxisymStop stop;
    stop.stop_at_zero = false;
    stop.xi_max = 0.9 * prof.hi;
    double xi0 = -0.9 * prof.hi;
    auto out = integrate_axisym(7, 0.0, {xi0, prof.f(xi0), prof.fp(xi0)}, +1, stop);
    double ref = conserved_W(7, 0.0, out.trajectory.at(0.0));
    for (auto& s : out.trajectory.sample(200))
      if (std::abs(conserved_W(7, 0.0, s) - ref) / std::max(std::abs(ref), 1e-3) > 1e-8)
        return false;
    return std::abs(conserved_W(3, 0.0, 0.0, 1.0, 0.0) - 0.5) < 1e-14;
  });
  check("limit-inverse Wronskian", [] {
    LimitInverse li(14.0, 4);
    for (double y = 0.0; y <= 5.0; y += 0.5)
      if (std::abs(li.wronskian(y) - std::pow(1.0 + y * y, 7.0)) >
          1e-8 * std::pow(1.0 + y * y, 7.0))
        return false;
    return true;
  });
  check("delta table", [] {
    return bott_delta(4) == 4 && bott_delta(9) == 16 && bott_delta(6) == 8 &&
           bott_delta(24) == 2048;
  });

  bool all = true;
  for (auto& g : gates) {
    std::cout << (g.ok ? "PASS" : "FAIL") << "  " << g.name << "\n";
    all = all && g.ok;
  }
  std::cout << (all ? "all oracle gates passed\n" : "oracle gates FAILED\n");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::setlocale(LC_NUMERIC, "C");  // CSV/JSON use '.' decimals

  // accept the single-dash spellings -m1/-m2/-h0 alongside the long forms
  std::vector<std::string> rewritten;
  rewritten.reserve(static_cast<std::size_t>(argc));
  for (int i = 0; i < argc; ++i) {
    std::string tok = argv[i];
    if (tok == "-m1" || tok == "-m2" || tok == "-h0" || tok == "-a")
      tok = "-" + tok;
    rewritten.push_back(tok);
  }
  std::vector<char*> cargv;
  for (auto& s : rewritten) cargv.push_back(s.data());

  CLI::App app{"capillary minimal/CMC cone workbench over isoparametric foliations"};
  app.require_subcommand(1);

  CommonArgs t1_args, t2_args, sw_args, ax_args, cl_args, le_args;

  auto* t1 = app.add_subcommand("type1", "Type I shooting over a focal point");
  double t1_theta = 0.0, t1_a = 0.0;
  bool t1_astar = false;
  t1_args.attach(t1);
  t1->add_option("--theta", t1_theta, "target contact angle");
  t1->add_option("--a", t1_a, "initial height a (single shot)");
  t1->add_flag("--a-star", t1_astar, "solve for the free-boundary endpoint");
  bool t1_fm_csv = false;
  t1->add_flag("--fm-csv", t1_fm_csv, "also tabulate f_M to fm_table.csv");

  auto* t2 = app.add_subcommand("type2", "Type II two-boundary shooting");
  double t2_theta = M_PI / 4.0, t2_sym_a = 0.0;
  t2_args.attach(t2);
  t2->add_option("--theta", t2_theta, "contact angle");
  t2->add_option("--symmetric-a", t2_sym_a, "symmetric crest height (m1 = m2)");

  auto* sw = app.add_subcommand("sweep", "parameter sweep");
  std::string sw_kind = "type1";
  double sw_from = 0.1, sw_to = 1.0;
  int sw_count = 10;
  unsigned sw_jobs = 1;
  sw_args.attach(sw);
  sw->add_option("--kind", sw_kind, "type1|type1-m2|type2|type2-symmetric");
  sw->add_option("--from", sw_from, "grid start");
  sw->add_option("--to", sw_to, "grid end");
  sw->add_option("--count", sw_count, "grid size");
  sw->add_option("--jobs", sw_jobs, "parallel rows");

  auto* ax = app.add_subcommand("axisym", "axisymmetric (g=1) problems");
  int ax_n = 7;
  bool ax_threshold = false;
  double ax_theta = M_PI / 4.0, ax_shot = 0.0;
  ax_args.attach(ax, false);
  ax->add_option("-n,--n", ax_n, "ambient dimension parameter n");
  ax->add_flag("--threshold", ax_threshold, "scan the reach-zero threshold");
  ax->add_option("--theta", ax_theta, "capillary angle for the type2 solve");
  ax->add_option("--shot-a", ax_shot, "emit the trajectory of a single shot");

  auto* cl = app.add_subcommand("classify", "bundle classification");
  std::string cl_format = "json";
  int cl_m = 0, cl_k = 0, cl_q = 0;
  cl_args.attach(cl);
  cl->add_option("--format", cl_format, "json|md");
  auto* optm = cl->add_option("--otfkm-m", cl_m, "OT-FKM Clifford parameter m");
  cl->add_option("--otfkm-k", cl_k, "OT-FKM module count k");
  cl->add_option("--otfkm-q", cl_q, "OT-FKM representation index q");

  auto* vo = app.add_subcommand("verify-oracles", "run the oracle gate battery");

  auto* le = app.add_subcommand("limit-eq", "limit-equation round trip");
  double le_c = 14.0, le_L = 3.0, le_rmin = -1000.0;
  int le_g = 4;
  le_args.attach(le, false);
  le->add_option("--c", le_c, "coefficient c = n-2");
  le->add_option("--gpar", le_g, "coefficient g");
  le->add_option("--L", le_L, "initial height y(0)");
  le->add_option("--r-min", le_rmin, "backward integration horizon");

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (t1->parsed()) return run_type1(t1_args, t1_theta, t1_a, t1_astar, t1_fm_csv);
    if (t2->parsed()) return run_type2(t2_args, t2_theta, t2_sym_a);
    if (sw->parsed())
      return run_sweep(sw_args, sw_kind, sw_from, sw_to, sw_count, sw_jobs);
    if (ax->parsed())
      return run_axisym(ax_args, ax_n, ax_threshold, ax_theta, ax_shot);
    if (cl->parsed())
      return run_classify(cl_args, cl_format, cl_m, cl_k, cl_q, optm->count() > 0);
    if (vo->parsed()) return run_verify_oracles();
    if (le->parsed()) return run_limit_eq(le_args, le_c, le_g, le_L, le_rmin);
  } catch (const NonAdmissible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NonIntegralDimension& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
