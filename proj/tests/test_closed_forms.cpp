#include <catch_amalgamated.hpp>

#include <cmath>

#include "capcones/axisym_equation.hpp"
#include "capcones/closed_forms.hpp"

using namespace capcones;
using Catch::Approx;

TEST_CASE("Clifford minimal profiles") {
  auto A = clifford_minimal_from_zero(FoliationTriple::validate(2, 1, 2));
  CHECK(A.f(0.0) == Approx(1.0));
  CHECK(A.hi == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (double t : {0.1, 0.4, 0.6}) {
    CHECK(A.f(t) == Approx(std::sqrt(1.0 - 2.0 * t * t)).epsilon(1e-15));
  }

  auto B = clifford_minimal_from_zero(FoliationTriple::validate(2, 2, 1));
  CHECK(B.f(0.0) == Approx(std::sqrt(3.0)).epsilon(1e-15));
  CHECK(B.hi == Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));

  CHECK_THROWS_AS(clifford_minimal_from_zero(FoliationTriple::validate(3, 2, 2)),
                  WrongG);

  // doubled surface radii: sqrt((n-k-1)/(n-1)), sqrt(k/(n-1)) with k = m1+1;
  // the zero of the profile is t = sqrt(k/(n-1)), the first radius in the
  // meridional picture
  auto M = FoliationTriple::validate(2, 3, 4);
  auto C = clifford_minimal_from_zero(M);
  double k = M.m1() + 1.0;
  CHECK(C.hi == Approx(std::sqrt(k / (M.n() - 1.0))).epsilon(1e-14));
}

TEST_CASE("Clifford CMC family") {
  auto M = FoliationTriple::validate(2, 1, 2);

  // Lawson height gives the minimal profile back, pointwise to 1e-14
  double aL = (M.m1() + 1.0) / M.m2();
  auto cmc = clifford_cmc(M, aL);
  CHECK(cmc.H0 == Approx(0.0).margin(1e-14));
  auto min = clifford_minimal_from_zero(M);
  for (double t = 0.0; t < min.hi; t += 0.01) {
    CHECK(cmc.f(t) == Approx(min.f(t)).margin(1e-14));
  }

  // (2,1,2), a = 4: H0 = 2/2 - 2*2 = -3
  CHECK(clifford_cmc(M, 4.0).H0 == Approx(-3.0).epsilon(1e-14));

  // Psi_H0 vanishes along the family (checked via the residual-free states)
  auto prof = clifford_cmc(M, 0.5);
  OdeProblem p{M, prof.H0, 1.0};
  for (int i = 1; i < 50; ++i) {
    double t = prof.hi * i / 51.0;
    CHECK(std::abs(psi_H0(p, ProfileState{t, prof.f(t), prof.fp(t)})) <= 1e-13);
  }
}

TEST_CASE("axisymmetric profiles and the coordinate bridge") {
  // n = 4 value at the symmetric point
  auto fb4 = axisym_half_lawson(4);
  CHECK(fb4.f(1.0 / std::sqrt(2.0)) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-13));

  // f-hat(0) = 1/sqrt(n-2) = free-boundary height
  for (int n : {4, 5, 7}) {
    auto fh = axisym_clifford(n);
    CHECK(fh.f(0.0) == Approx(1.0 / std::sqrt(n - 2.0)).epsilon(1e-14));
  }

  // coordinate equivalence xi = 1 - 2t^2 between the two presentations
  for (int n : {4, 7}) {
    auto fb = axisym_half_lawson(n);
    auto fh = axisym_clifford(n);
    for (int i = 1; i < 60; ++i) {
      double t = fb.lo + (fb.hi - fb.lo) * i / 60.0;
      double xi = 1.0 - 2.0 * t * t;
      if (xi <= fh.lo || xi >= fh.hi) continue;
      CHECK(fb.f(t) == Approx(fh.f(xi)).margin(1e-12));
    }
  }

  // dispatcher
  CHECK(axisym_profiles(7, ExactFamily::AxisymClifford).f(0.0) ==
        Approx(1.0 / std::sqrt(5.0)));
  CHECK_THROWS_AS(axisym_profiles(7, ExactFamily::CliffordCMC),
                  std::invalid_argument);
}

TEST_CASE("latitude spheres solve the axisymmetric CMC equation") {
  for (int n : {4, 7}) {
    for (double lam : {0.5, 2.0}) {
      auto prof = latitude_sphere(n, lam);
      CHECK(prof.H0 == Approx((n - 1.0) / std::sqrt(lam)).epsilon(1e-14));
      for (int i = 5; i < 95; ++i) {
        double xi = prof.lo + (prof.hi - prof.lo) * i / 100.0;
        double r = axisym_rhs(n, prof.H0, xi, prof.f(xi), prof.fp(xi)) - prof.fpp(xi);
        CHECK(std::abs(r) <= 1e-10 * std::max(1.0, std::abs(prof.fpp(xi))));
      }
    }
  }
}

TEST_CASE("constant solutions") {
  auto M = FoliationTriple::validate(4, 2, 5);
  CHECK(constant_solution(M, 0.0).f(0.3) == 0.0);
  CHECK(constant_solution(M, -(M.n() - 1.0)).f(0.7) == Approx(1.0));

  // latitude-sphere height |H0|/sqrt(H0^2+(n-1)^2) of the constant graph:
  // the graph of rho*c over S^{n-1} meets S^n at height c/sqrt(1+c^2)
  double H0 = -2.0;
  double c = -H0 / (M.n() - 1.0);
  CHECK(c / std::sqrt(1.0 + c * c) ==
        Approx(std::abs(H0) / std::sqrt(H0 * H0 + (M.n() - 1.0) * (M.n() - 1.0)))
            .epsilon(1e-14));
}

TEST_CASE("reflected Clifford profile extends across t = 1") {
  auto M = FoliationTriple::validate(2, 1, 2);
  auto across = clifford_minimal_across_one(M);
  CHECK(across.f(1.0) == Approx(std::sqrt((M.m2() + 1.0) / M.m1())).epsilon(1e-14));

  // f'(1) equals the focal compatibility value
  OdeProblem p{M, 0.0, 1.0};
  CHECK(across.fp(1.0) == Approx(focal_one_slope(p, across.f(1.0))).epsilon(1e-12));

  // and it is the reflection of the from-zero profile of the swapped triple
  auto from_zero = clifford_minimal_from_zero(M.reflect());
  for (double t = across.lo + 0.02; t < 1.0; t += 0.03) {
    CHECK(across.f(t) == Approx(from_zero.f(reflect_point(t))).margin(1e-13));
  }
}
