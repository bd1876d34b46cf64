#pragma once

#include <optional>
#include <stdexcept>

#include "capcones/errors.hpp"

namespace capcones {

/// Dimension of an irreducible module over the Clifford algebra with m-1
/// generators, extended Bott-periodically: delta(8r+j) = 2^{4r} delta(j).
inline long long bott_delta(int m) {
  if (m < 1) throw std::invalid_argument("bott_delta: m must be >= 1");
  static constexpr long long base[9] = {0, 1, 2, 4, 4, 8, 8, 8, 8};
  int j = ((m - 1) % 8) + 1;
  int r = (m - j) / 8;
  long long d = base[j];
  for (int i = 0; i < r; ++i) d *= 16;
  return d;
}

/// True when (m1, m2) = (m, k*delta(m) - m - 1) for some k >= 1, read in this
/// order (m1 plays the role of the Clifford parameter m).
inline bool is_ot_fkm_pair_directed(int m1, int m2) {
  if (m1 < 1 || m2 < 1) return false;
  long long d = bott_delta(m1);
  long long num = static_cast<long long>(m1) + m2 + 1;
  return num % d == 0 && num / d >= 1;
}

/// OT-FKM multiplicity pair in either order.
inline bool is_ot_fkm_pair(int m1, int m2) {
  return is_ot_fkm_pair_directed(m1, m2) || is_ot_fkm_pair_directed(m2, m1);
}

/// The k with m2 = k*delta(m1) - m1 - 1; requires the directed pair property.
inline int ot_fkm_k(int m1, int m2) {
  if (!is_ot_fkm_pair_directed(m1, m2))
    throw NotOtFkm("(m1,m2) is not an OT-FKM pair in this orientation");
  return static_cast<int>((static_cast<long long>(m1) + m2 + 1) / bott_delta(m1));
}

/// Parameters (m, k, q) of an OT-FKM foliation, with ell = k*delta(m) and the
/// representation index q (nonzero only when m = 0 mod 4).
struct OtFkmParams {
  int m = 1;
  int k = 1;
  int q = 0;

  OtFkmParams() = default;
  OtFkmParams(int m_, int k_, int q_) : m(m_), k(k_), q(q_) {
    if (m < 1 || k < 1) throw std::invalid_argument("OtFkmParams: m,k >= 1");
    if (q != 0 && m % 4 != 0)
      throw std::invalid_argument("OtFkmParams: q = 0 unless m = 0 mod 4");
    if (m % 4 == 0) {
      if (std::abs(q) > k || (q - k) % 2 != 0)
        throw std::invalid_argument("OtFkmParams: need |q| <= k, q = k mod 2");
    }
  }

  long long ell() const { return k * bott_delta(m); }
};

}  // namespace capcones
