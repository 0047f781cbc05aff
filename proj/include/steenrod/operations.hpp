#pragma once

// Steenrod operations on the mod-p cohomology of a simplicial set.
//
// D_i(x) is evaluated on a cocycle z of degree q by pairing z^{(x)p} with the transported
// equivariant diagonal Phi(e_i (x) sigma) on every nondegenerate (pq - i)-simplex sigma.
//   Sq^s    = D_{q-s}                                   (p = 2)
//   P^s     = (-1)^s nu(-q) D_{(q-2s)(p-1)}             (p odd)
//   beta P^s = (-1)^s nu(-q) D_{(q-2s)(p-1)-1}           (p odd)
// The Bockstein lifts a cocycle coordinate-wise to [0, p) over Z/p^2, applies d and divides by p.

#include "steenrod/equivariant.hpp"
#include "steenrod/simplicial.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace steenrod::ops {

using la::FpMatrix;
using la::Modulus;
using la::Residue;

class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::int64_t needed, std::int64_t budget);
    std::int64_t needed;
    std::int64_t budget;
};

class DegreeBoundExceeded : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

enum class Operation { D, Sq, P, BetaP, Bockstein };

struct CohomologyClass {
    int degree = 0;
    std::vector<Residue> coords;
    friend bool operator==(const CohomologyClass&, const CohomologyClass&) = default;
};

struct ContextOptions {
    std::string cache_dir;               // empty: STEENROD_CACHE_DIR, else memory only
    std::int64_t budget = 2'000'000;     // nondegenerate simplices allowed in the skeleton
};

/// Nondegenerate simplices of B G through dimension D + 1.
std::int64_t required_generators(const grp::FiniteGroup& g, int degree_bound);

class SteenrodContext {
public:
    /// Cohomology of B G in degrees [0, D] with coefficients F_p. Throws BudgetExceeded when the
    /// (D + 1)-skeleton has more nondegenerate simplices than the budget.
    SteenrodContext(grp::GroupPtr g, int p, int degree_bound, ContextOptions opts = {});
    /// Any simplicial set whose skeleton reaches D + 1 (or which is complete).
    SteenrodContext(simp::SetPtr space, int p, int degree_bound, ContextOptions opts = {});

    int prime() const { return p_; }
    int degree_bound() const { return bound_; }
    const Modulus& modulus() const { return mod_; }
    const simp::SimplicialSet& space() const { return *space_; }
    const simp::SetPtr& space_ptr() const { return space_; }
    const cx::CochainComplex& cochains() const { return *cochains_; }
    const cx::CochainComplex& cochains_mod_p2() const { return *cochains_p2_; }
    const eq::EquivariantDiagonal& diagonal() const { return *diagonal_; }

    std::size_t dim(int q) const;
    const la::SubquotientBasis& basis(int q) const;
    CohomologyClass basis_class(int q, std::size_t k) const;
    CohomologyClass zero(int q) const;
    std::vector<Residue> representative(const CohomologyClass& x) const;
    CohomologyClass class_of(int q, const std::vector<Residue>& cocycle) const;

    CohomologyClass add(const CohomologyClass& a, const CohomologyClass& b) const;
    CohomologyClass scale(const CohomologyClass& a, Residue c) const;
    CohomologyClass cup(const CohomologyClass& a, const CohomologyClass& b) const;
    CohomologyClass power(const CohomologyClass& a, int k) const;

    /// D_i on a cochain of degree q: a cochain of degree pq - i (empty when pq - i < 0).
    std::vector<Residue> d_op_cochain(int i, int q, const std::vector<Residue>& z) const;
    CohomologyClass d_op(int i, const CohomologyClass& x) const;

    CohomologyClass sq(int s, const CohomologyClass& x) const;
    CohomologyClass p_op(int s, const CohomologyClass& x) const;
    CohomologyClass beta_p_op(int s, const CohomologyClass& x) const;
    CohomologyClass bockstein(const CohomologyClass& x) const;

    /// Homogeneous parts of Sq(x) or P(x) within the degree bound, keyed by s.
    std::map<int, CohomologyClass> total(const CohomologyClass& x) const;

    /// Memoized matrix of op from H^q; see operation_matrix.
    const FpMatrix& matrix(Operation op, int s, int q) const;

private:
    void build(const ContextOptions& opts);
    void require_degree(int n, const char* what) const;

    simp::SetPtr space_;
    int p_;
    int bound_;
    Modulus mod_;
    std::shared_ptr<const cx::CochainComplex> cochains_;
    std::shared_ptr<const cx::CochainComplex> cochains_p2_;
    std::vector<la::SubquotientBasis> bases_;
    std::shared_ptr<const eq::EquivariantDiagonal> diagonal_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::tuple<Operation, int, int>, std::shared_ptr<const FpMatrix>> memo_;
};

/// nu(n) = (-1)^{n(n-1)(p-1)/4} ((p-1)/2)! mod p, for odd p.
Residue nu(long n, int p);

std::string operation_name(Operation op, int s);

/// Degree of op applied to a class of degree q (s is ignored by the Bockstein).
int operation_degree(Operation op, int s, int q, int p);

CohomologyClass apply(const SteenrodContext& ctx, Operation op, int s, const CohomologyClass& x);

/// Matrix of op from H^q to its target degree, columns indexed by the basis of H^q.
FpMatrix operation_matrix(const SteenrodContext& ctx, Operation op, int s, int q);

struct OperationTable {
    std::string name;
    std::map<int, FpMatrix> by_degree;  // source degree q -> matrix
};

/// op on every degree q whose target lies within the bound.
OperationTable operation_table(const SteenrodContext& ctx, Operation op, int s);

/// Matrix of f^* : H^q(target) -> H^q(source) for a map of the underlying spaces.
FpMatrix pullback_matrix(const simp::SimplicialMap& f, const SteenrodContext& source_space,
                         const SteenrodContext& target_space, int q);

// ---------------------------------------------------------------------------
// Operations of a strictly associative dg-algebra with theta = eps (x) m_p.

struct DgAlgebra {
    int p = 2;
    std::vector<std::string> names;
    std::vector<int> degrees;
    std::size_t unit = 0;
    /// product[a][b] = a * b and differential[a] = d a, as sparse vectors over the basis.
    std::vector<std::vector<la::SparseVector>> product;
    std::vector<la::SparseVector> differential;
};

/// Parses {"prime": p, "basis": [{"name", "degree"}...], "unit": name,
/// "products": [{"left", "right", "result": {name: coeff}}...], "differential": {name: {name: coeff}}}.
/// Unlisted products and differentials are zero.
DgAlgebra dg_algebra_from_json(const std::string& text);

struct TrivialThetaCase {
    std::string class_label;
    int degree;
    bool holds;
    std::string detail;
};

struct TrivialThetaReport {
    bool passed = true;
    std::vector<TrivialThetaCase> cases;
};

/// Checks Sq(x) = x^2 (p = 2) or P(x) = x^p (p odd) for every cohomology basis class, with
/// D_0(x) = x^p and D_i = 0 for i > 0. Throws std::invalid_argument for non-associative products,
/// d^2 != 0, a non-derivation d or an invalid unit.
TrivialThetaReport trivial_theta_ops(const DgAlgebra& k);

}  // namespace steenrod::ops
