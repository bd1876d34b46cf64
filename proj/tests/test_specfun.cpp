#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "capcones/specfun.hpp"

using namespace capcones;
using Catch::Approx;

namespace {

// Independent oracle: integrate L_M f = 0 from the even series start with a
// fixed-step classical RK4, entirely separate from the hypergeometric path.
struct LinearOdeOracle {
  LegendreOperator op;

  explicit LinearOdeOracle(const FoliationTriple& M) : op(M) {}

  // f'' from L_M f = 0
  double fpp(double t, double f, double fp) const {
    double m1 = op.triple().m1(), m2 = op.triple().m2();
    return -((m1 / t - (m1 + m2 + 1.0) * t) * fp + op.eigen_coefficient() * f) /
           (1.0 - t * t);
  }

  // value of f at target, data {f(0)=1, f'(0)=0} via series start at eps
  double value(double target) const {
    double eps = 1e-6;
    double b2 = -0.5 * op.eigen_coefficient() / (op.triple().m1() + 1.0);
    double t = eps, f = 1.0 + b2 * eps * eps, fp = 2.0 * b2 * eps;
    int steps = 200000;
    double h = (target - t) / steps;
    for (int i = 0; i < steps; ++i) {
      double k1f = fp, k1p = fpp(t, f, fp);
      double k2f = fp + 0.5 * h * k1p, k2p = fpp(t + 0.5 * h, f + 0.5 * h * k1f, fp + 0.5 * h * k1p);
      double k3f = fp + 0.5 * h * k2p, k3p = fpp(t + 0.5 * h, f + 0.5 * h * k2f, fp + 0.5 * h * k2p);
      double k4f = fp + h * k3p, k4p = fpp(t + h, f + h * k3f, fp + h * k3p);
      f += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
      fp += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      t += h;
    }
    return f;
  }
};

// Brute-force series for 2F1, plain summation, no transformations: usable as
// an oracle for |z| < 1 where cancellation is not an issue.
double hyp2f1_brute(double a, double b, double c, double z, int terms = 400) {
  double sum = 0.0, term = 1.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
  }
  return sum;
}

}  // namespace

TEST_CASE("hyp2f1 basics") {
  CHECK(hyp2f1(0.7, -1.3, 2.1, 0.0) == 1.0);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 0.0, 0.5), PoleError);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, -3.0, 0.5), PoleError);

  // terminating series b = -1: 1 - (a/c) z, exact to rounding
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> ua(0.1, 8.0), uz(0.0, 0.99);
  for (int i = 0; i < 200; ++i) {
    double a = ua(rng), c = ua(rng), z = uz(rng);
    CHECK(hyp2f1(a, -1.0, c, z) == Approx(1.0 - a / c * z).epsilon(1e-15));
  }
}

TEST_CASE("hyp2f1 against identities") {
  // arcsin: 2F1(1/2,1/2;3/2;z^2) = arcsin(z)/z
  CHECK(hyp2f1(0.5, 0.5, 1.5, 0.25) == Approx(std::asin(0.5) / 0.5).epsilon(1e-13));
  for (double z : {0.1, 0.3, 0.6, 0.8, 0.95}) {
    CHECK(hyp2f1(0.5, 0.5, 1.5, z * z) ==
          Approx(std::asin(z) / z).epsilon(1e-12));
  }
  // log: 2F1(1,1;2;z) = -log(1-z)/z, including the slow z=0.9 regime
  for (double z : {0.2, 0.5, 0.9, 0.97}) {
    CHECK(hyp2f1(1.0, 1.0, 2.0, z) == Approx(-std::log1p(-z) / z).epsilon(1e-11));
  }
  // brute-force series cross-check on moderate arguments
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> ua(0.1, 4.0), uz(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    double a = ua(rng), b = -ua(rng) / 4.0, c = ua(rng) + 0.3, z = uz(rng);
    CHECK(hyp2f1(a, b, c, z) == Approx(hyp2f1_brute(a, b, c, z)).epsilon(1e-12));
  }
  // negative arguments: cross-check against the raw alternating series where
  // it still converges
  for (double y : {0.3, 0.6, 0.9}) {
    double direct = hyp2f1_brute(0.3, 0.2, 1.1, -y * y, 4000);
    CHECK(hyp2f1(0.3, 0.2, 1.1, -y * y) == Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("f_M closed form for the g=1 suspension") {
  for (int n : {4, 5, 7, 9}) {
    LegendreOperator op(FoliationTriple::validate(1, n - 2, n - 2));
    for (double t : {0.0, 0.2, 0.5, 0.8, 0.95}) {
      CHECK(op.f_M(t) == Approx(1.0 - 2.0 * t * t).margin(1e-14));
    }
    CHECK(op.t_M_zero() == Approx(1.0 / std::sqrt(2.0)).margin(1e-12));
  }
}

TEST_CASE("f_M agrees with direct ODE integration") {
  for (auto M : {FoliationTriple::validate(4, 2, 5),
                 FoliationTriple::validate(2, 3, 4),
                 FoliationTriple::validate(3, 2, 2)}) {
    LegendreOperator op(M);
    LinearOdeOracle oracle(M);
    for (double t : {0.3, 0.5, 0.7}) {
      CHECK(op.f_M(t) == Approx(oracle.value(t)).margin(1e-9));
    }
  }
}

TEST_CASE("t_M zero: bracketing, cross-checks, t_M > t_alpha") {
  // g=2 cross-check against the ODE oracle's sign change
  auto M = FoliationTriple::validate(2, 2, 3);
  LegendreOperator op(M);
  double tM = op.t_M_zero();
  LinearOdeOracle oracle(M);
  CHECK(oracle.value(tM - 1e-4) > 0.0);
  CHECK(oracle.value(tM + 1e-4) < 0.0);
  CHECK(std::abs(op.f_M(tM)) < 1e-11);

  std::vector<FoliationTriple> sample = {
      FoliationTriple::validate(1, 5, 5), FoliationTriple::validate(2, 1, 2),
      FoliationTriple::validate(2, 6, 6), FoliationTriple::validate(3, 8, 8),
      FoliationTriple::validate(4, 2, 5), FoliationTriple::validate(4, 4, 3),
      FoliationTriple::validate(6, 2, 2)};
  for (auto& T : sample) {
    LegendreOperator o2(T);
    double z = o2.t_M_zero();
    CHECK(z > T.t_alpha());
    CHECK(z < 1.0);
  }
}

TEST_CASE("f_M strictly decreasing up to its zero") {
  for (auto M : {FoliationTriple::validate(4, 2, 5),
                 FoliationTriple::validate(6, 1, 1)}) {
    LegendreOperator op(M);
    double tM = op.t_M_zero();
    double prev = op.f_M(1e-3);
    for (double t = 2e-3; t < tM; t += 1e-3) {
      double cur = op.f_M(t);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("legendre residual examples") {
  auto M = FoliationTriple::validate(4, 2, 5);
  LegendreOperator op(M);

  // constant input picks out the eigen-coefficient
  CHECK(op.residual(0.5, 1.0, 0.0, 0.0) ==
        Approx(4.0 * (M.n() - 1) / 16.0).epsilon(1e-14));

  // f = f_M annihilates the operator
  for (double t : {0.05, 0.3, 0.6, 0.9}) {
    double r = op.residual(t, op.f_M(t), op.f_M_prime(t), op.f_M_second(t));
    CHECK(std::abs(r) < 1e-9);
  }

  // g=1 closed form is exact
  auto S = FoliationTriple::validate(1, 3, 3);
  LegendreOperator opS(S);
  for (double t : {0.1, 0.4, 0.8}) {
    CHECK(opS.residual(t, 1.0 - 2.0 * t * t, -4.0 * t, -4.0) ==
          Approx(0.0).margin(1e-13));
  }

  CHECK_THROWS_AS(op.residual(0.0, 1, 0, 0), DomainError);
  CHECK_THROWS_AS(op.residual(1.0, 1, 0, 0), DomainError);
}

TEST_CASE("self-adjoint form agrees with the expanded operator") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ut(0.02, 0.95), uv(-2.0, 2.0);
  for (auto M : {FoliationTriple::validate(4, 2, 5),
                 FoliationTriple::validate(2, 1, 2),
                 FoliationTriple::validate(3, 4, 4)}) {
    LegendreOperator op(M);
    for (int i = 0; i < 200; ++i) {
      double t = ut(rng), f = uv(rng), fp = uv(rng), fpp = uv(rng);
      double a = op.residual(t, f, fp, fpp);
      double b = op.residual_selfadjoint(t, f, fp, fpp);
      CHECK(a == Approx(b).margin(1e-9 * (1.0 + std::abs(a))));
    }
  }
}

TEST_CASE("legendre residual of f_M uniformly small over the triple family") {
  std::vector<FoliationTriple> sample;
  for (int m = 1; m <= 8; ++m) sample.push_back(FoliationTriple::validate(1, m, m));
  for (int m1 = 1; m1 <= 6; ++m1)
    for (int m2 = 1; m2 <= 6; ++m2)
      sample.push_back(FoliationTriple::validate(2, m1, m2));
  for (int m : {1, 2, 4}) sample.push_back(FoliationTriple::validate(3, m, m));
  for (auto [a, b] : std::vector<std::pair<int, int>>{{2, 5}, {3, 4}, {1, 6}})
    sample.push_back(FoliationTriple::validate(4, a, b));
  for (int m : {1, 2}) sample.push_back(FoliationTriple::validate(6, m, m));

  for (auto& M : sample) {
    LegendreOperator op(M);
    for (int i = 0; i <= 40; ++i) {
      double t = 0.01 + (0.95 - 0.01) * i / 40.0;
      double r = op.residual(t, op.f_M(t), op.f_M_prime(t), op.f_M_second(t));
      CHECK(std::abs(r) <= 1e-9);
    }
  }
}

TEST_CASE("limit inverse: values, exponents, Wronskian") {
  LimitInverse li(14.0, 4);
  CHECK(li.r(0.7, 0.3, 0.0) == Approx(0.7).epsilon(1e-15));

  // (c,g) = (14,4): exponents 1/7 and 1/8
  CHECK(li.beta_plus() == Approx(1.0 / 7.0).epsilon(1e-12));
  CHECK(li.beta_minus() == Approx(1.0 / 8.0).epsilon(1e-12));

  for (auto [c, g] : std::vector<std::pair<double, int>>{{14, 4}, {10, 3}, {24, 6}}) {
    LimitInverse L(c, g);
    for (double y = 0.0; y <= 5.0; y += 0.25) {
      CHECK(L.wronskian(y) ==
            Approx(std::pow(1.0 + y * y, 0.5 * c)).epsilon(1e-8));
    }
  }

  CHECK_THROWS_AS(LimitInverse(3.0, 4), ComplexExponents);
  CHECK(limit_inverse_r(14.0, 4, 1.0, 0.0, 0.0) == Approx(1.0));
}

TEST_CASE("hyp2f1 contiguous relation property") {
  // (c-a) F(a-1,b;c;z) + (2a-c+(b-a)z) F(a,b;c;z) + a(z-1) F(a+1,b;c;z) = 0
  std::mt19937 rng(20240);
  std::uniform_real_distribution<double> ua(0.3, 5.0), uz(-3.0, 0.95);
  for (int i = 0; i < 300; ++i) {
    double a = ua(rng), b = -ua(rng) / 3.0, c = ua(rng) + 0.5, z = uz(rng);
    double f0 = hyp2f1(a - 1.0, b, c, z);
    double f1 = hyp2f1(a, b, c, z);
    double f2 = hyp2f1(a + 1.0, b, c, z);
    double rel = (c - a) * f0 + (2.0 * a - c + (b - a) * z) * f1 +
                 a * (z - 1.0) * f2;
    double scale = std::abs(f0) + std::abs(f1) + std::abs(f2) + 1.0;
    CHECK(std::abs(rel) <= 1e-11 * scale * (1.0 + std::abs(a) + std::abs(c)));
  }
}

TEST_CASE("hyp2f1 failure modes") {
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.5), DomainError);
  // z so close to 1 that the series cannot meet tolerance within the cap
  CHECK_THROWS_AS(hyp2f1(1.0, 1.0, 2.0, 1.0 - 1e-9), NoConvergence);
}

TEST_CASE("f_M derivative wiring against finite differences") {
  for (auto M : {FoliationTriple::validate(4, 2, 5),
                 FoliationTriple::validate(6, 2, 2)}) {
    LegendreOperator op(M);
    double d = 1e-5;
    for (double t : {0.2, 0.5, 0.8}) {
      double fd1 = (op.f_M(t + d) - op.f_M(t - d)) / (2 * d);
      CHECK(op.f_M_prime(t) == Approx(fd1).margin(1e-8));
      double fd2 = (op.f_M_prime(t + d) - op.f_M_prime(t - d)) / (2 * d);
      CHECK(op.f_M_second(t) == Approx(fd2).margin(1e-7));
    }
  }
}

TEST_CASE("f_M stays negative past its unique zero") {
  for (auto M : {FoliationTriple::validate(4, 2, 5),
                 FoliationTriple::validate(2, 4, 3)}) {
    LegendreOperator op(M);
    double tM = op.t_M_zero();
    for (double t = tM + 0.01; t <= 0.99; t += 0.01) {
      CHECK(op.f_M(t) < 0.0);
    }
  }
}
