#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "capcones/axisym.hpp"
#include "capcones/closed_forms.hpp"
#include "capcones/profile_ode.hpp"
#include "capcones/shooting.hpp"
#include "capcones/topology.hpp"

namespace capcones::io {

/// 17 significant digits: round-trip exact for binary64.
inline std::string fmt17(double v) {
  if (v == 0.0) return "0";  // fold away the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline nlohmann::json triple_json(const FoliationTriple& M) {
  return {{"g", M.g()}, {"m1", M.m1()}, {"m2", M.m2()}, {"n", M.n()},
          {"formal", M.formal()}};
}

inline FoliationTriple triple_from_json(const nlohmann::json& j) {
  auto M = FoliationTriple::validate(j.at("g").get<int>(), j.at("m1").get<int>(),
                                     j.at("m2").get<int>(),
                                     j.value("formal", false));
  return M;
}

inline nlohmann::json solution_json(const CapillarySolution& sol) {
  nlohmann::json j;
  j["kind"] = to_string(sol.kind);
  j["g"] = sol.problem.M.g();
  j["m1"] = sol.problem.M.m1();
  j["m2"] = sol.problem.M.m2();
  j["n"] = sol.problem.M.n();
  j["H0"] = sol.problem.H0;
  j["parameter"] = sol.parameter;
  j["theta"] = sol.theta;
  j["boundaries"] = nlohmann::json::array();
  for (auto& b : sol.boundary) {
    nlohmann::json entry = {{"t", b.t}};
    if (std::isfinite(b.slope)) {
      entry["slope"] = b.slope;
      entry["infinite_slope"] = false;
    } else {
      entry["slope"] = nullptr;  // theta = pi/2 carries the blow-up signature
      entry["infinite_slope"] = true;
    }
    j["boundaries"].push_back(entry);
  }
  j["residual"] = sol.residual;
  if (sol.a_star) j["a_star"] = *sol.a_star;
  return j;
}

inline std::string profile_csv(const ProfileTrajectory& traj) {
  std::string out = "t,f,fp,h,Psi,PsiH0\n";
  const auto& p = traj.problem();
  for (auto& s : traj.step_points()) {
    double h = h_quantity(p, s);
    out += fmt17(s.t) + "," + fmt17(s.f) + "," + fmt17(s.fp) + "," + fmt17(h) +
           "," + fmt17(psi(p, s)) + "," + fmt17(psi_H0(p, s)) + "\n";
  }
  return out;
}

inline std::string exact_profile_csv(const ExactProfile& prof, int samples = 200) {
  std::string out = "t,f,fp,h,Psi,PsiH0\n";
  double len = prof.hi - prof.lo;
  double a = prof.lo + 0.005 * len, b = prof.hi - 0.005 * len;
  for (int i = 0; i <= samples; ++i) {
    double t = a + (b - a) * i / samples;
    double f = prof.f(t), fp = prof.fp(t);
    if (prof.in_xi_variable || !prof.triple) {
      out += fmt17(t) + "," + fmt17(f) + "," + fmt17(fp) + ",,,\n";
      continue;
    }
    OdeProblem pr{*prof.triple, prof.H0, 1.0};
    ProfileState s{t, f, fp};
    out += fmt17(t) + "," + fmt17(f) + "," + fmt17(fp) + "," +
           fmt17(h_quantity(pr, s)) + "," + fmt17(psi(pr, s)) + "," +
           fmt17(psi_H0(pr, s)) + "\n";
  }
  return out;
}

inline std::string axisym_csv(const AxisymTrajectory& traj, int samples = 400) {
  std::string out = "xi,f,fp,h,u,thetaPolar,Wcal,z\n";
  for (int i = 0; i <= samples; ++i) {
    double xi = traj.xi_start() +
                (traj.xi_end() - traj.xi_start()) * i / static_cast<double>(samples);
    auto s = traj.at(xi);
    out += fmt17(xi) + "," + fmt17(s.f) + "," + fmt17(s.fp) + "," +
           fmt17(s.h()) + "," + fmt17(s.u()) + "," +
           fmt17(traj.theta_polar_tracked(xi)) + "," +
           fmt17(conserved_W(traj.n(), traj.H0(), s)) + "," + fmt17(s.z()) + "\n";
  }
  return out;
}

inline std::string sweep_csv(const SweepTable& table) {
  std::string out = "parameter,theta,t_zero_1,slope_1,t_zero_2,slope_2,outcome,non_monotone\n";
  for (auto& r : table.rows) {
    out += fmt17(r.parameter) + "," + fmt17(r.theta);
    for (std::size_t i = 0; i < 2; ++i) {
      if (i < r.t_zeros.size())
        out += "," + fmt17(r.t_zeros[i]) + "," + fmt17(r.slopes[i]);
      else
        out += ",,";
    }
    out += "," + r.outcome + "," + (r.non_monotone_flag ? "1" : "0") + "\n";
  }
  return out;
}

inline nlohmann::json classification_json(
    const std::vector<BundleClassification>& rows) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& r : rows)
    j.push_back({{"surface", to_string(r.surface)},
                 {"type", r.type_string},
                 {"product_status", to_string(r.product_over_base)},
                 {"provenance", r.provenance}});
  return j;
}

inline std::string classification_markdown(
    const FoliationTriple& M, const std::vector<BundleClassification>& rows) {
  std::string out =
      "| g | (m1,m2) | S^n | S_M1 | S_M2 | Sbar_M |\n"
      "|---|---------|-----|------|------|--------|\n";
  out += "| " + std::to_string(M.g()) + " | (" + std::to_string(M.m1()) + "," +
         std::to_string(M.m2()) + ") | S^" + std::to_string(M.n()) + " | " +
         rows[0].type_string + " | " + rows[1].type_string + " | " +
         rows[2].type_string + " |\n";
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

}  // namespace capcones::io
