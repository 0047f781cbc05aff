#pragma once

// Cyclic-group machinery for the chain-level structure map theta.
//
// pi = Z/p generated by alpha. W is the standard free R[pi]-resolution of R: one generator e_i in
// homological degree i (cohomological degree -i), d e_{2i+1} = T e_{2i}, d e_{2i+2} = N e_{2i+1},
// with T = alpha - 1 and N = 1 + alpha + ... + alpha^{p-1}.
//
// The equivariant diagonal Phi : W (x) C_*(Delta^n) -> C_*(Delta^n)^{(x)p} is tabulated on the
// generators e_i (x) iota_n. Faces of Delta^n are vertex bitmasks; alpha moves tensor factor k to
// position k+1 (mod p) with the Koszul sign.

#include "steenrod/complexes.hpp"
#include "steenrod/simplicial.hpp"

#include <array>
#include <bit>
#include <compare>
#include <map>
#include <stdexcept>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace steenrod::eq {

using la::FpMatrix;
using la::Modulus;
using la::Residue;

constexpr int kMaxArity = 7;
constexpr int kMaxDiagonalDim = 20;

/// Elements of R[pi] as coefficient vectors over 1, alpha, ..., alpha^{p-1}.
class CyclicGroupRing {
public:
    CyclicGroupRing(int p, Modulus m);

    int order() const { return p_; }
    const Modulus& modulus() const { return m_; }
    std::vector<Residue> one() const;
    std::vector<Residue> alpha_power(int j) const;
    std::vector<Residue> norm() const;  // N
    std::vector<Residue> t() const;     // T = alpha - 1
    std::vector<Residue> mul(const std::vector<Residue>& a, const std::vector<Residue>& b) const;
    std::vector<Residue> add(const std::vector<Residue>& a, const std::vector<Residue>& b) const;
    bool is_zero(const std::vector<Residue>& a) const;

private:
    int p_;
    Modulus m_;
};

struct WResolution {
    int p;
    Modulus mod;
    int top;
    /// d e_i = boundary(i) . e_{i-1} for 1 <= i <= top.
    std::vector<Residue> boundary(int i) const;
    /// Basis alpha^j e_i labelled "a^j e_i" in degree -i, index j; window [-top, 0] open below.
    cx::CochainComplex complex() const;
    /// Matrix of alpha on the degree -i part.
    FpMatrix alpha(int i) const;
    /// epsilon(alpha^j e_0) = 1.
    std::vector<Residue> augmentation() const;
};

WResolution w_resolution(int p, Modulus m, int top);

/// Augmented complex E -> R -> 0 is exact in cohomological degrees [-top + 1, 0] (rank count).
bool augmented_exact(const WResolution& w);

/// A complex in non-positive degrees with a pi-action (alpha matrices per degree) and an
/// augmentation on degree 0.
struct EquivariantComplex {
    cx::ComplexPtr complex;
    std::map<int, FpMatrix> alpha;
    std::vector<Residue> augmentation;
};

/// C_*(Delta^n)^{(x)p} in degrees [-pn, 0] with the cyclic action and epsilon^{(x)p}.
EquivariantComplex tensor_power_of_simplex(int n, int p, Modulus m);

class LiftError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Equivariant chain map W -> target commuting with augmentations in degrees [-top, 0], built
/// generator by generator with the free-variable-zero solution. Throws LiftError ("not acyclic in
/// window") when a step has no solution.
cx::ChainMap lift_through_resolution(const WResolution& w, const EquivariantComplex& target, int top);

// ---------------------------------------------------------------------------
// Chains in C_*(Delta^n)^{(x)p}.

using FaceTuple = std::array<std::uint32_t, kMaxArity>;

struct TensorTerm {
    FaceTuple faces{};
    Residue coeff = 0;
    friend bool operator==(const TensorTerm&, const TensorTerm&) = default;
};

/// Sorted by face tuple, no zero coefficients.
using TensorChain = std::vector<TensorTerm>;

inline int face_degree(std::uint32_t mask) { return std::popcount(mask) - 1; }

TensorChain tensor_boundary(const TensorChain& c, int p, const Modulus& m);
TensorChain alpha_act(const TensorChain& c, int p, const Modulus& m);
TensorChain ring_act(const std::vector<Residue>& r, const TensorChain& c, int p, const Modulus& m);
TensorChain chain_add(const TensorChain& a, const TensorChain& b, const Modulus& m, Residue scale = 1);
/// Pushforward along the coface Delta^{n-1} -> Delta^n that skips vertex k.
TensorChain coface_push(const TensorChain& c, int p, int k);
/// Contracting homotopy of C_*(Delta^n)^{(x)p}: sum_k (eta eps)^{(x)k} (x) h (x) id, where h is the
/// cone at vertex 0 (h(S) = S u {0} if 0 is not in S, else 0).
TensorChain cone_homotopy(const TensorChain& c, int p, const Modulus& m);
/// Iterated front-back diagonal of iota_n.
TensorChain iterated_aw(int n, int p);

class EquivariantDiagonal {
public:
    EquivariantDiagonal(int p, int bound, std::vector<std::vector<TensorChain>> table);

    int p() const { return p_; }
    int bound() const { return bound_; }
    const Modulus& modulus() const { return mod_; }
    /// Largest i with a possibly nonzero entry on n-simplices.
    int max_index(int n) const { return (p_ - 1) * n; }
    /// Phi(e_i (x) iota_n); empty (zero) outside the stored range.
    const TensorChain& entry(int i, int n) const;
    /// Phi(alpha^j e_i (x) iota_n).
    TensorChain entry(int j, int i, int n) const;

    /// d Phi(w (x) iota) = Phi(d w (x) iota) + (-1)^i Phi(w (x) d iota) for w = alpha^j e_i.
    bool chain_map_holds(int j, int i, int n) const;

    std::string serialize() const;
    static EquivariantDiagonal parse(const std::string& text);
    friend bool operator==(const EquivariantDiagonal&, const EquivariantDiagonal&) = default;

private:
    int p_;
    int bound_;
    Modulus mod_;
    std::vector<std::vector<TensorChain>> table_;  // table_[n][i]
};

/// Builds the table for all n <= bound. Throws std::logic_error if a recursion step meets a
/// right-hand side that is not a cycle.
EquivariantDiagonal equivariant_diagonal(int p, int bound);

/// Shared tables: computed once per (p, bound) per process, and stored on disk as
/// "diagonal-p{p}-n{bound}-v1.txt" in cache_dir when it is nonempty. An empty cache_dir falls back
/// to the STEENROD_CACHE_DIR environment variable, and to memory only if that is unset.
std::shared_ptr<const EquivariantDiagonal> cached_diagonal(int p, int bound, const std::string& cache_dir = "");
std::filesystem::path diagonal_cache_file(const std::filesystem::path& dir, int p, int bound);
/// Directory used for an empty cache_dir argument; empty when disk caching is off.
std::string default_cache_dir();

// ---------------------------------------------------------------------------
// Transport to a simplicial set.

struct GeneratorTuple {
    std::array<std::int64_t, kMaxArity> gens{};
    std::array<int, kMaxArity> dims{};
    friend auto operator<=>(const GeneratorTuple&, const GeneratorTuple&) = default;
};

struct TransportedTerm {
    GeneratorTuple tuple;
    Residue coeff = 0;
    friend bool operator==(const TransportedTerm&, const TransportedTerm&) = default;
};

using TransportedChain = std::vector<TransportedTerm>;  // sorted, merged, normalized chains

/// Pushforward of a chain on Delta^n along the n-simplex sigma of X: each face tuple goes to the
/// tuple of vertex faces of sigma, and tuples with a degenerate face vanish.
TransportedChain transport_chain(const TensorChain& c, const simp::SimplicialSet& x, const simp::SimplexRef& sigma,
                                 int p, const Modulus& m);

/// Phi(e_i (x) sigma); sigma may be degenerate.
TransportedChain transport(const EquivariantDiagonal& phi, const simp::SimplicialSet& x, int i,
                           const simp::SimplexRef& sigma);

/// Boundary in the normalized chains C_*(X)^{(x)p}.
TransportedChain transported_boundary(const TransportedChain& c, const simp::SimplicialSet& x, int p,
                                      const Modulus& m);

/// Applies a simplicial map factorwise; degenerate images vanish.
TransportedChain push_forward(const TransportedChain& c, const simp::SimplicialMap& f, int p, const Modulus& m);

/// The chain-map identity for the transported table at (i, sigma).
bool transported_chain_map_holds(const EquivariantDiagonal& phi, const simp::SimplicialSet& x, int i,
                                 const simp::SimplexRef& sigma);

}  // namespace steenrod::eq
