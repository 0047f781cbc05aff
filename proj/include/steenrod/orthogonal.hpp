#pragma once

// Symbolic checks of the total squares on the de Rham cohomology of BO_n and BSO_n over F_2,
// through the restriction to the product of r copies of O_2.

#include "steenrod/polynomial.hpp"
#include "steenrod/report.hpp"

#include <cstdint>

namespace steenrod::orth {

using poly::FpPoly;
using poly::TotalOperation;

/// O_{2r}: F_2[u_1, ..., u_{2r}]. O_{2r+1}: F_2[v_1, c_1, u_2, ..., u_{2r+1}] / (v_1^2). |u_i| = i.
///   Sq(u_{2a}) = u_{2a}^2,
///   Sq(u_{2a+1}) = u_{2a+1}^2 + u_{4a+1} + sum_{t=0}^{2a-1} u_{2a-t} u_{2a+1+t},
///   Sq(v_1) = 0, Sq(c_1) = c_1^2,
/// with u_i := 0 for i > n, and u_1 := 0 for odd n.
TotalOperation orth_spec(int n);
/// SO_n: F_2[u_2, ..., u_n] with the same squares and u_1 := 0.
TotalOperation so_spec(int n);
/// B mu_2: F_2[t, v] / (v^2), Sq(t) = t^2, Sq(v) = 0.
TotalOperation mu2_spec();
/// (B O_2)^r: F_2[s_1, ..., s_r, t_1, ..., t_r], Sq(s_i) = s_i + s_i^2, Sq(t_i) = t_i^2.
TotalOperation torus_spec(int r);

/// Elementary symmetric polynomial e_k in t_1..t_r of the torus ring, optionally without t_omit
/// (1-based; 0 omits nothing). Zero for k < 0 or k larger than the number of variables.
FpPoly elementary(const TotalOperation& torus, int k, int omit = 0);

struct Restriction {
    TotalOperation source;  // orth_spec(2r)
    TotalOperation target;  // torus_spec(r)
    poly::RingMap map;
    int r;

    /// Image of u_k for any k >= 0, with u_0 := 1 and u_k := 0 for k > 2r.
    FpPoly image(int k) const;
};

/// iota^*(u_{2a}) = e_a(t), iota^*(u_{2a+1}) = sum_m s_m e_a(t without t_m).
Restriction restriction_iota(int r);

/// iota^* Sq(u_k) = Sq(iota^* u_k) for every generator of orth_spec(2r).
verify::Report check_wu(int r);

enum class Identity {
    Avoiding,             // sum over |J| = d, m not in J, times e_{2a-d}(t without t_m)
    Containing,           // sum over |J| = d + 1, m in J, times e_{2a-d-1}(t without t_m)
    ContainingUnshifted,  // the same with |J| = d and e_{2a-d}: fails, kept for comparison
};

struct IdentitySides {
    std::string relation;
    FpPoly lhs;
    FpPoly rhs;
};

/// For 0 <= d <= a: lhs = iota^*(u_{4a+1} + sum_{t=lo}^{2a-1} u_{2a-t} u_{2a+1+t}) with lo = 2a - 2d
/// (Avoiding) or 2a - 2d - 1 (Containing variants), and rhs = sum_m s_m (sum_J t_J) e(...).
IdentitySides orth_identity(const Restriction& iota, int a, int d, Identity which);

/// The Avoiding and Containing identities for (a, d) on the r-fold restriction.
verify::Report check_orth_identities(int a, int d, int r);

/// f(Sq g) = Sq(f g) for every generator g of the source of f.
verify::Report check_ring_map(const poly::RingMap& f, const TotalOperation& source, const TotalOperation& target,
                              const std::string& name);

/// O_{2r} -> SO_{2r} (u_1 -> 0) and O_{2r+2} -> SO_{2r+1} (u_1, u_{2r+2} -> 0) commute with Sq.
verify::Report check_so_variants(int r);

/// orth_spec(2r + 1) agrees with so_spec(2r + 1) tensor mu2_spec() under v -> v_1, t -> c_1.
verify::Report check_kunneth(int r);

/// On F_p[x_1..x_n] with |x_i| = 2 and the operation x_i -> x_i^p, the multiplicative extension
/// is f -> f^p on random polynomials of polynomial degree <= max_degree.
verify::Report reductive_trivial_check(int p, int n, int samples = 100, int max_degree = 10,
                                       std::uint64_t seed = 20240601);

}  // namespace steenrod::orth
