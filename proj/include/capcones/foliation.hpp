#pragma once

#include <cmath>
#include <string>

#include "capcones/errors.hpp"
#include "capcones/otfkm.hpp"

namespace capcones {

namespace detail {

inline bool classified_triple(int g, int m1, int m2) {
  switch (g) {
    case 1:
      return m1 == m2;
    case 2:
      return true;
    case 3:
      return m1 == m2 && (m1 == 1 || m1 == 2 || m1 == 4 || m1 == 8);
    case 4:
      if ((m1 == 2 && m2 == 2) || (m1 == 4 && m2 == 5) || (m1 == 5 && m2 == 4))
        return true;
      return is_ot_fkm_pair(m1, m2);
    case 6:
      return m1 == m2 && (m1 == 1 || m1 == 2);
    default:
      return false;
  }
}

}  // namespace detail

/// Isoparametric foliation parameters (g, m1, m2) with the derived ambient
/// dimension n from g(m1+m2) = 2(n-2).  The base sphere is S^{n-1}.
class FoliationTriple {
 public:
  static FoliationTriple validate(int g, int m1, int m2, bool formal = false) {
    if (g < 1 || m1 < 1 || m2 < 1)
      throw NonAdmissible("validate: need g >= 1 and m1, m2 >= 1");
    long long prod = static_cast<long long>(g) * (m1 + m2);
    if (prod % 2 != 0)
      throw NonIntegralDimension("validate: g(m1+m2) must be even");
    if (!formal && !detail::classified_triple(g, m1, m2))
      throw NonAdmissible("validate: (" + std::to_string(g) + "," +
                          std::to_string(m1) + "," + std::to_string(m2) +
                          ") is not a classified isoparametric triple");
    return FoliationTriple(g, m1, m2, static_cast<int>(prod / 2 + 2), formal);
  }

  int g() const { return g_; }
  int m1() const { return m1_; }
  int m2() const { return m2_; }
  int n() const { return n_; }
  bool formal() const { return formal_; }

  double alpha() const {
    return static_cast<double>(m1_) / (m1_ + m2_);
  }

  /// Meridional coordinate of the distinguished minimal leaf.
  double t_alpha() const { return std::sqrt(alpha()); }

  /// Mean curvature of the leaf M_s, s in (0, pi/g).
  double mean_curvature_H(double s) const {
    double u = 0.5 * g_ * s;
    if (!(s > 0.0) || !(s < M_PI / g_))
      throw DomainError("mean_curvature_H: s must lie in (0, pi/g)");
    return 0.5 * g_ * (m2_ * std::tan(u) - m1_ * (std::cos(u) / std::sin(u)));
  }

  /// Leaf volume density with the normalization C = 1.
  double volume_density(double s) const {
    if (s < 0.0 || s > M_PI / g_ + 1e-15)
      throw DomainError("volume_density: s must lie in [0, pi/g]");
    double u = 0.5 * g_ * s;
    return std::pow(std::sin(u), m1_) * std::pow(std::cos(u), m2_);
  }

  /// A_M(t) = t - (m1/(m1+m2))/t; increasing, vanishing at t_alpha.
  double A_M(double t) const {
    if (t <= 0.0) throw DomainError("A_M: t must be positive");
    return t - alpha() / t;
  }

  double A_M_prime(double t) const {
    if (t <= 0.0) throw DomainError("A_M_prime: t must be positive");
    return 1.0 + alpha() / (t * t);
  }

  FoliationTriple reflect() const {
    return FoliationTriple(g_, m2_, m1_, n_, formal_);
  }

  bool operator==(const FoliationTriple& o) const {
    return g_ == o.g_ && m1_ == o.m1_ && m2_ == o.m2_ && formal_ == o.formal_;
  }

 private:
  FoliationTriple(int g, int m1, int m2, int n, bool formal)
      : g_(g), m1_(m1), m2_(m2), n_(n), formal_(formal) {}

  int g_, m1_, m2_, n_;
  bool formal_;
};

/// The focal involution t <-> sqrt(1-t^2) of Lemma "change of variables".
inline double reflect_point(double t) {
  return std::sqrt(std::max(0.0, 1.0 - t * t));
}

/// Meridional variable t = sin(gs/2) and its inverse s = (2/g) asin(t).
struct LeafCoordinates {
  static double t_from_s(int g, double s) { return std::sin(0.5 * g * s); }
  static double s_from_t(int g, double t) { return 2.0 * std::asin(t) / g; }
};

}  // namespace capcones
