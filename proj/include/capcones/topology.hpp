#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capcones/errors.hpp"
#include "capcones/foliation.hpp"
#include "capcones/otfkm.hpp"

namespace capcones {

enum class ProductStatus { Product, NotStablyProduct, ConditionalProduct };

inline const char* to_string(ProductStatus s) {
  switch (s) {
    case ProductStatus::Product: return "Product";
    case ProductStatus::NotStablyProduct: return "NotStablyProduct";
    case ProductStatus::ConditionalProduct: return "ConditionalProduct";
  }
  return "?";
}

enum class Surface { S_M1, S_M2, Sbar_M };

inline const char* to_string(Surface s) {
  switch (s) {
    case Surface::S_M1: return "S_M1";
    case Surface::S_M2: return "S_M2";
    case Surface::Sbar_M: return "Sbar_M";
  }
  return "?";
}

struct BundleClassification {
  Surface surface = Surface::S_M1;
  std::string type_string;
  ProductStatus product_over_base = ProductStatus::Product;
  std::string provenance;
};

/// Triviality of the bundle eta -> S^{l-1} whose sphere bundle is the first
/// focal manifold: the seven low-dimensional pairs plus (4,3) at index 0.
inline bool eta_trivial(int m1, int m2, std::optional<int> q = std::nullopt) {
  if (!is_ot_fkm_pair(m1, m2))
    throw NotOtFkm("eta_trivial: (m1,m2) is not an OT-FKM pair");
  static constexpr std::pair<int, int> kList[] = {
      {1, 2}, {2, 1}, {1, 6}, {6, 1}, {2, 5}, {5, 2}, {3, 4}};
  for (auto [a, b] : kList)
    if (m1 == a && m2 == b) return true;
  if (m1 == 4 && m2 == 3) {
    if (!q)
      throw MissingOtFkmParams("eta_trivial: (4,3) requires the index q");
    return *q == 0;
  }
  return false;
}

/// Triviality of the bundle xi -> S^m with M_2 = S(xi).
inline bool xi_trivial(const OtFkmParams& p) {
  int r = p.m % 8;
  if (r == 3 || r == 5 || r == 6 || r == 7) return true;
  if ((r == 1 || r == 2) && p.k % 2 == 0) return true;
  if (p.m % 4 == 0 && p.q == 0) return true;
  return false;
}

struct ProductVerdict {
  ProductStatus status = ProductStatus::NotStablyProduct;
  std::string type_string;
};

namespace detail {

inline std::string sphere_product(std::initializer_list<long long> dims) {
  std::string out;
  for (long long d : dims) {
    if (!out.empty()) out += " x ";
    out += "S^" + std::to_string(d);
  }
  return out;
}

inline bool s_m2_listed(int m1, int m2) {
  if (m1 == 1 && m2 >= 2 && m2 % 2 == 0) return true;   // (1, 2d)
  if (m2 == 1 && m1 >= 2 && m1 % 2 == 0) return true;   // (2d, 1)
  return (m1 == 2 && m2 == 5) || (m1 == 5 && m2 == 2) ||
         (m1 == 3 && m2 == 4) || (m1 == 4 && m2 == 3);
}

}  // namespace detail

/// Homotopy-product verdict for S_{M2} over an OT-FKM pair; the six-family
/// list yields the smooth product of three spheres.
inline ProductVerdict s_m2_product(int m1, int m2) {
  if (!is_ot_fkm_pair(m1, m2))
    throw NotOtFkm("s_m2_product: (m1,m2) is not an OT-FKM pair");
  ProductVerdict v;
  if (detail::s_m2_listed(m1, m2)) {
    v.status = ProductStatus::Product;
    v.type_string = detail::sphere_product({m1, m1 + m2, m2 + 1});
  } else {
    v.status = ProductStatus::NotStablyProduct;
  }
  return v;
}

namespace detail {

struct RowStrings {
  std::string s_m1, s_m2, sbar;
};

/// Concrete g = 4 rows of the diffeomorphism-type table, keyed by the
/// directed pair; (1, even) instantiates the Stiefel-manifold row.
inline std::optional<RowStrings> table_row_g4(int m1, int m2) {
  if (m1 == 1 && m2 == 2)
    return RowStrings{"S^3 x S^2 x S^2", "S^3 x S^1 x S^3", "S^3 x S^2 x S^1 x S^1"};
  if (m1 == 1 && m2 == 6)
    return RowStrings{"S^7 x S^6 x S^2", "S^7 x S^1 x S^7", "S^7 x S^6 x S^1 x S^1"};
  if (m1 == 2 && m2 == 5)
    return RowStrings{"S^5 x S^7 x S^3", "S^7 x S^2 x S^6", "S^5 x S^7 x S^2 x S^1"};
  if (m1 == 3 && m2 == 4)
    return RowStrings{"S^4 x S^7 x S^4", "S^7 x S^3 x S^5", "S^4 x S^7 x S^3 x S^1"};
  if (m1 == 1) {
    // m = 1 always has M1 = V(2, k delta(1)); the sphere bundle over S^1
    // splits only for k even
    long long l = 1 + m2 + 1;
    std::string V = "V(2," + std::to_string(l) + ")";
    std::string s_m2 =
        m2 % 2 == 0
            ? sphere_product({l - 1}) + " x S^1 x " + sphere_product({l - 1})
            : "S^" + std::to_string(l - 1) + "-bdl/(S^" + std::to_string(l) +
                  "-bdl/S^1)";
    return RowStrings{V + " x S^2", s_m2, V + " x S^1 x S^1"};
  }
  return std::nullopt;
}

/// Generic OT-FKM strings in the directed orientation (m, l-m-1).
inline RowStrings generic_otfkm_strings(int m, int m2, bool eta_triv, bool listed) {
  long long l = static_cast<long long>(m) + m2 + 1;
  RowStrings r;
  if (eta_triv) {
    r.s_m1 = sphere_product({l - 1, l - m - 1, m + 1});
  } else {
    r.s_m1 = "V(2,C_" + std::to_string(m - 1) + ") x S^" + std::to_string(m + 1);
  }
  if (listed) {
    r.s_m2 = sphere_product({m, m + m2, m2 + 1});
  } else {
    r.s_m2 = "S^" + std::to_string(l - m) + "-bdl/(S^" + std::to_string(l) +
             "-bdl/S^" + std::to_string(m) + ")";
  }
  if (eta_triv) {
    r.sbar = sphere_product({l - 1, l - m - 1}) + " x S^1";
  } else {
    r.sbar = "V(2,C_" + std::to_string(m - 1) + ") x S^" + std::to_string(m) + " x S^1";
  }
  return r;
}

}  // namespace detail

/// Deterministic lookup of the diffeomorphism/homotopy types of the doubled
/// surfaces S_M1, S_M2, Sbar_M from the paper's classification results.
inline std::vector<BundleClassification> classify(
    const FoliationTriple& M, std::optional<OtFkmParams> params = std::nullopt) {
  if (M.formal())
    throw NonAdmissible("classify: formal triples carry no classification");
  const int g = M.g(), m1 = M.m1(), m2 = M.m2();
  std::vector<BundleClassification> out(3);
  out[0].surface = Surface::S_M1;
  out[1].surface = Surface::S_M2;
  out[2].surface = Surface::Sbar_M;
  out[2].product_over_base = ProductStatus::Product;

  auto set_distinct_note = [&](const std::string& base) {
    out[0].provenance = base + "; S_M1 and S_M2 not homotopy equivalent";
    out[1].provenance = out[0].provenance;
  };

  if (g == 1) {
    long long n = M.n();
    out[0].type_string = out[1].type_string = "S^" + std::to_string(n - 1);
    out[2].type_string = "S^" + std::to_string(n - 2) + " x S^1";
    for (auto& r : out) {
      r.product_over_base = ProductStatus::Product;
      r.provenance = "Table 1 row g=1";
    }
    return out;
  }

  if (g == 2) {
    out[0].type_string = detail::sphere_product({m1, m2 + 1});
    out[1].type_string = detail::sphere_product({m1 + 1, m2});
    out[2].type_string = detail::sphere_product({m1, m2}) + " x S^1";
    for (auto& r : out) {
      r.product_over_base = ProductStatus::Product;
      r.provenance = "Table 1 row g=2 (Clifford tori)";
    }
    return out;
  }

  if (g == 3) {
    static const struct {
      int m;
      const char* smi;
      const char* sbar;
    } rows[] = {
        {1, "SO(3) x_{O(2)} S^2", "SO(3)/Z2^2 x S^1"},
        {2, "SU(3) x_{U(2)} S^3", "SU(3)/T^2 x S^1"},
        {4, "Sp(3) x_{Sp(2)Sp(1)} S^5", "Sp(3)/Sp(1)^3 x S^1"},
        {8, "F4 x_{Spin(9)} S^9", "F4/Spin(8) x S^1"},
    };
    for (auto& r : rows) {
      if (r.m == m1) {
        out[0].type_string = out[1].type_string = r.smi;
        out[2].type_string = r.sbar;
      }
    }
    out[0].product_over_base = out[1].product_over_base =
        ProductStatus::NotStablyProduct;
    out[0].provenance =
        "Table 1 row g=3; S_M1 and S_M2 isometric (Veronese)";
    out[1].provenance = out[0].provenance;
    out[2].provenance = "Table 1 row g=3";
    return out;
  }

  if (g == 6) {
    if (m1 == 1) {
      out[0].type_string = out[1].type_string = "S^2-bdl/(S^3 x RP^2)";
      out[2].type_string = "SO(4)/Z2^2 x S^1";
      out[0].product_over_base = out[1].product_over_base =
          ProductStatus::NotStablyProduct;
      out[0].provenance =
          "Table 1 row (6,1); S_M1 and S_M2 diffeomorphic but not isometric";
      out[1].provenance = out[0].provenance;
      out[2].provenance = "Table 1 row (6,1)";
    } else {
      out[0].type_string = "S^3-bdl/Q^5";
      out[1].type_string = "S^3-bdl/Z_G2";
      out[2].type_string = "G2/T^2 x S^1";
      out[0].product_over_base = out[1].product_over_base =
          ProductStatus::NotStablyProduct;
      set_distinct_note(
          "Table 1 row (6,2); only the known homogeneous example ((6,2) "
          "classification incomplete)");
      out[2].provenance = "Table 1 row (6,2)";
    }
    return out;
  }

  // g = 4
  if (m1 == 2 && m2 == 2) {
    out[0].type_string = "S^3-bdl/CP^3";
    out[1].type_string = "S^3-bdl/Q^3";
    out[2].type_string = "SO(5)/T^2 x S^1";
    out[0].product_over_base = out[1].product_over_base =
        ProductStatus::NotStablyProduct;
    set_distinct_note("Table 1 row (4,(2,2)) exceptional homogeneous");
    out[2].provenance = "Table 1 row (4,(2,2))";
    return out;
  }
  if ((m1 == 4 && m2 == 5) || (m1 == 5 && m2 == 4)) {
    bool swap = (m1 == 5);
    out[swap ? 1 : 0].type_string = "S^5-bdl/M1^14";
    out[swap ? 0 : 1].type_string = "S^6-bdl/M2^13";
    out[2].type_string = "M_(4,4,5) x S^1";
    out[0].product_over_base = out[1].product_over_base =
        ProductStatus::NotStablyProduct;
    set_distinct_note("Table 1 row (4,(4,5)) exceptional homogeneous");
    out[2].provenance = "Table 1 row (4,(4,5))";
    return out;
  }

  // OT-FKM family.  Classify in the directed orientation when available.
  bool direct = is_ot_fkm_pair_directed(m1, m2);
  bool reversed = is_ot_fkm_pair_directed(m2, m1);
  if (!direct && !reversed)
    throw NonAdmissible("classify: not an OT-FKM pair");
  int m = direct ? m1 : m2;
  int mm = direct ? m2 : m1;
  int k = ot_fkm_k(m, mm);

  int q = 0;
  if (m % 4 == 0) {
    if (!params)
      throw MissingOtFkmParams(
          "classify: OT-FKM pair with m = 0 mod 4 requires (m,k,q)");
    if (params->m != m || params->k != k)
      throw std::invalid_argument("classify: OtFkmParams do not match the pair");
    q = params->q;
  }

  bool eta_triv = (q == 0) && eta_trivial(m1, m2, q);
  bool listed = detail::s_m2_listed(m, mm);

  detail::RowStrings rs;
  bool have_row = false;
  if (q == 0) {
    if (auto row = detail::table_row_g4(m, mm)) {
      rs = *row;
      have_row = true;
    } else if (auto rrow = detail::table_row_g4(mm, m)) {
      rs = detail::RowStrings{rrow->s_m2, rrow->s_m1, rrow->sbar};
      have_row = true;
    }
  }
  if (!have_row) rs = detail::generic_otfkm_strings(m, mm, eta_triv, listed && q == 0);
  // rs is in the (m, mm) orientation; swap back when the input was reversed
  if (!direct) std::swap(rs.s_m1, rs.s_m2);

  out[0].type_string = rs.s_m1;
  out[1].type_string = rs.s_m2;
  out[2].type_string = rs.sbar;

  out[0].product_over_base = ProductStatus::Product;  // trivial normal bundle
  if (m % 4 == 0 && q != 0) {
    out[1].product_over_base = ProductStatus::ConditionalProduct;
    out[1].provenance =
        "OT-FKM index q != 0: homeomorphism to a product excluded, homotopy "
        "equivalence open";
  } else {
    auto v = s_m2_product(m1, m2);
    out[1].product_over_base = v.status;
    out[1].provenance = v.status == ProductStatus::Product
                            ? "OT-FKM product list"
                            : "OT-FKM: not homotopy equivalent to a product";
  }
  out[0].provenance = "OT-FKM: S_M1 = M1 x S^{m1+1} (trivial normal bundle)";
  if (m1 != m2) {
    out[0].provenance += "; S_M1 and S_M2 not homotopy equivalent";
    out[1].provenance += "; S_M1 and S_M2 not homotopy equivalent";
  }
  out[2].provenance = "Type II: Sbar_M = M x S^1";
  return out;
}

}  // namespace capcones
