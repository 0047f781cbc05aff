#pragma once

// Finite-skeleton simplicial sets and their (co)chains.
//
// A simplex is stored as eta^*(g): a nondegenerate generator g of dimension m pulled back along a
// monotone surjection eta : [n] -> [m]. The positions v with eta(v) = eta(v+1) are exactly the
// indices of the canonical degeneracy word s_{j_1} ... s_{j_k} g with j_1 > ... > j_k.

#include "steenrod/complexes.hpp"
#include "steenrod/group.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace steenrod::simp {

using la::FpMatrix;
using la::Modulus;
using la::Residue;

constexpr int kMaxDim = 30;

struct SimplexRef {
    int dim = 0;
    int gen_dim = 0;
    std::int64_t gen = 0;
    std::array<std::uint8_t, kMaxDim + 1> eta{};

    static SimplexRef nondegenerate(int dim, std::int64_t gen);
    bool degenerate() const { return dim != gen_dim; }
    /// j_1 > ... > j_k with this simplex = s_{j_1} ... s_{j_k} g.
    std::vector<int> degeneracy_word() const;
    friend bool operator==(const SimplexRef& a, const SimplexRef& b);
};

class SimplicialSet {
public:
    /// labels[n] names the nondegenerate n-simplices for 0 <= n <= bound; faces[n][g][i] = d_i g for
    /// n >= 1 (faces[0] is empty). `complete` means there are no nondegenerate simplices above
    /// the bound. Simplicial identities are verified on every generator.
    SimplicialSet(std::string name, int bound, std::vector<std::vector<std::string>> labels,
                  std::vector<std::vector<std::vector<SimplexRef>>> faces, bool complete);

    const std::string& name() const { return name_; }
    int bound() const { return bound_; }
    bool complete() const { return complete_; }
    std::int64_t count(int n) const { return n >= 0 && n <= bound_ ? static_cast<std::int64_t>(labels_[n].size()) : 0; }
    const std::string& label(int n, std::int64_t g) const { return labels_[n][g]; }
    std::string label(const SimplexRef& x) const;
    std::int64_t total_generators() const;

    SimplexRef face(const SimplexRef& x, int i) const;
    SimplexRef degeneracy(const SimplexRef& x, int j) const;
    /// Face spanned by the vertices in mask (bit k = vertex k); mask must be nonempty.
    SimplexRef vertex_face(const SimplexRef& x, std::uint32_t mask) const;
    /// Generator index of the vertex face of nondegenerate (n, g), or -1 when that face is degenerate.
    std::int64_t nondegenerate_vertex_face(int n, std::int64_t g, std::uint32_t mask) const;

    /// All n-simplices, degenerate ones included, in a fixed order.
    std::vector<SimplexRef> all_simplices(int n) const;

    /// Bar constructions remember their group.
    const grp::GroupPtr& group() const { return group_; }

    using VertexFaceFn = std::function<std::int64_t(int, std::int64_t, std::uint32_t)>;

private:
    friend SimplicialSet bar_construction(grp::GroupPtr g, int bound);
    friend SimplicialSet standard_simplex(int n);

    void verify_identities() const;

    std::string name_;
    int bound_;
    bool complete_;
    std::vector<std::vector<std::string>> labels_;
    std::vector<std::vector<std::vector<SimplexRef>>> faces_;
    grp::GroupPtr group_;
    VertexFaceFn fast_vertex_face_;
};

using SetPtr = std::shared_ptr<const SimplicialSet>;

/// Delta^n: nondegenerate k-simplices are the (k+1)-subsets of {0..n}, labelled like "[0,2]".
SimplicialSet standard_simplex(int n);

/// The simplicial bar construction: n-simplices are n-tuples (g_1..g_n), d_0 drops g_1, d_n drops
/// g_n, d_i multiplies g_i g_{i+1}. Nondegenerate generators are tuples without identity entries,
/// indexed lexicographically with digits g_i - 1 in base |G| - 1.
SimplicialSet bar_construction(grp::GroupPtr g, int bound);
std::vector<int> bar_tuple(const SimplicialSet& bar, int n, std::int64_t gen);
std::int64_t bar_index(const SimplicialSet& bar, const std::vector<int>& tuple);

/// Level-wise product; nondegenerate simplices are pairs with jointly injective degeneracy data.
SimplicialSet product(const SimplicialSet& x, const SimplicialSet& y);

/// A simplicial map given on nondegenerate generators.
struct SimplicialMap {
    const SimplicialSet* source = nullptr;
    const SimplicialSet* target = nullptr;
    std::function<SimplexRef(int, std::int64_t)> on_generator;

    SimplexRef operator()(const SimplexRef& x) const;
};

/// Tuple-wise application of f : G -> H on bar constructions. Checks that f is a homomorphism.
SimplicialMap induced_map(const grp::GroupHomomorphism& f, const SimplicialSet& bar_g, const SimplicialSet& bar_h);

/// Homological chains in degrees [-top_dim, 0]: C^{-n} spans the n-simplices, d^{-n} = sum (-1)^i d_i.
/// Normalized chains drop degenerate simplices.
cx::CochainComplex chains(const SimplicialSet& x, Modulus m, bool normalized, int top_dim);

/// Cochains in degrees [0, top_degree]; top_degree must lie within the skeleton (any degree when
/// the set is complete).
cx::CochainComplex cochains(const SimplicialSet& x, Modulus m, bool normalized, int top_degree);

/// Pullback on normalized cochains along a simplicial map.
cx::ChainMap cochain_map(const SimplicialMap& f, cx::ComplexPtr source_cochains, cx::ComplexPtr target_cochains);

struct DoldKanSplit {
    cx::ComplexPtr normalized;
    cx::ComplexPtr unnormalized;
    cx::ChainMap inclusion;   // normalized -> unnormalized (via the Moore projector)
    cx::ChainMap projection;  // unnormalized -> normalized (kill degenerate simplices)
    cx::ChainMap homotopy;    // unnormalized -> unnormalized, shift -1
    int verified_lo;          // id - i p = d s + s d holds in degrees [verified_lo, 0]
};

DoldKanSplit dold_kan_split(const SimplicialSet& x, Modulus m, int top_dim);

/// Alexander-Whitney map on normalized chains: sigma |-> sum_i (front i-face) (x) (back (n-i)-face).
cx::ChainMap aw_diagonal(const SimplicialSet& x, Modulus m, int top_dim);

/// Cup product of normalized cochains: (a u b)(sigma) = a(front) b(back).
std::vector<Residue> cup(const SimplicialSet& x, const Modulus& m, int p, std::span<const Residue> a, int q,
                         std::span<const Residue> b);

/// Cosimplicial cochain complex C^0, C^1, ... with coface and codegeneracy chain maps.
struct CosimplicialComplex {
    std::vector<cx::ComplexPtr> levels;
    std::vector<std::vector<cx::ChainMap>> cofaces;        // cofaces[r][i] : C^r -> C^{r+1}
    std::vector<std::vector<cx::ChainMap>> codegeneracies;  // codegeneracies[r][i] : C^{r+1} -> C^r

    /// Checks the cosimplicial identities and that every structure map is a chain map.
    bool identities_hold() const;
    /// Double complex D^{r,j} = (C^r)^j with horizontal differential sum_i (-1)^i delta^i.
    cx::DoubleComplex double_complex() const;
};

/// Level r is the product over all r-simplices of X of the coefficient complex K; cofaces and
/// codegeneracies are induced by the faces and degeneracies of X.
CosimplicialComplex constant_cosimplicial(const SimplicialSet& x, const cx::CochainComplex& k, int top_level);

}  // namespace steenrod::simp
