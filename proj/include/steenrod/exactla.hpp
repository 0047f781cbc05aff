#pragma once

// Exact linear algebra over Z/pZ and Z/p^2Z.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace steenrod::la {

using Residue = std::uint32_t;

bool is_prime(std::uint64_t n);

/// The coefficient ring Z/p^k for k in {1, 2}.
class Modulus {
public:
    Modulus(std::uint32_t p, int power = 1);

    std::uint32_t prime() const { return p_; }
    int power() const { return power_; }
    std::uint32_t value() const { return m_; }
    bool is_field() const { return power_ == 1; }

    Residue reduce(std::int64_t v) const
    {
        std::int64_t r = v % static_cast<std::int64_t>(m_);
        return static_cast<Residue>(r < 0 ? r + m_ : r);
    }
    Residue add(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t(a) + b) % m_); }
    Residue sub(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t(a) + m_ - b) % m_); }
    Residue mul(Residue a, Residue b) const { return static_cast<Residue>((std::uint64_t(a) * b) % m_); }
    Residue neg(Residue a) const { return a == 0 ? 0 : m_ - a; }
    /// Signed representative in (-m/2, m/2].
    std::int64_t lift_signed(Residue a) const { return a > m_ / 2 ? std::int64_t(a) - m_ : std::int64_t(a); }
    bool is_unit(Residue a) const { return a % p_ != 0; }
    /// Throws std::domain_error on non-units.
    Residue inverse(Residue a) const;

    /// Same prime, power 1.
    Modulus base_field() const { return Modulus(p_, 1); }

    friend bool operator==(const Modulus& a, const Modulus& b) { return a.p_ == b.p_ && a.power_ == b.power_; }

private:
    std::uint32_t p_;
    int power_;
    std::uint32_t m_;
};

/// Sorted by index, no zero values.
using SparseVector = std::vector<std::pair<std::size_t, Residue>>;

struct Entry {
    std::size_t row;
    std::size_t col;
    Residue value;
};

/// Sparse matrix over Z/m. Entries are stored as row-major sorted triplets.
class FpMatrix {
public:
    FpMatrix(Modulus mod, std::size_t rows, std::size_t cols);

    /// Duplicate (row, col) keys are summed; values are reduced.
    static FpMatrix from_triplets(Modulus mod, std::size_t rows, std::size_t cols, std::vector<Entry> triplets);
    static FpMatrix from_signed_triplets(Modulus mod, std::size_t rows, std::size_t cols,
                                         const std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>>& t);
    static FpMatrix from_dense(Modulus mod, const std::vector<std::vector<std::int64_t>>& rows);
    static FpMatrix from_columns(Modulus mod, std::size_t rows, const std::vector<SparseVector>& columns);
    static FpMatrix identity(Modulus mod, std::size_t n);

    const Modulus& modulus() const { return mod_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::span<const Entry> entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }
    Residue at(std::size_t r, std::size_t c) const;

    std::vector<Residue> apply(std::span<const Residue> x) const;
    SparseVector apply(const SparseVector& x) const;

    FpMatrix operator*(const FpMatrix& rhs) const;
    FpMatrix operator+(const FpMatrix& rhs) const;
    FpMatrix operator-(const FpMatrix& rhs) const;
    FpMatrix scaled(Residue c) const;
    FpMatrix transposed() const;
    /// Reinterpret residues modulo a divisor of the current modulus (e.g. Z/p^2 -> Z/p).
    FpMatrix reduced_to(Modulus target) const;

    std::vector<std::vector<Residue>> to_dense() const;
    std::vector<SparseVector> sparse_rows() const;
    std::vector<SparseVector> sparse_columns() const;

    friend bool operator==(const FpMatrix& a, const FpMatrix& b);

private:
    FpMatrix(Modulus mod, std::size_t rows, std::size_t cols, std::vector<Entry> sorted_entries);

    Modulus mod_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Entry> entries_;
};

std::string to_string(const FpMatrix& m);

struct RrefResult {
    FpMatrix reduced;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form over a prime field. Rejects Z/p^2 input.
RrefResult rref(const FpMatrix& m);

std::size_t rank(const FpMatrix& m);

/// Some x with m x = b, or nullopt if the system is inconsistent. Free variables are fixed to 0.
/// Over Z/p^2 the solution is obtained by lifting a mod-p solution.
std::optional<std::vector<Residue>> solve(const FpMatrix& m, std::span<const Residue> b);

/// Solves m X = B column by column; each column is nullopt when inconsistent.
std::vector<std::optional<std::vector<Residue>>> solve_many(const FpMatrix& m, const FpMatrix& b);

/// Columns form a basis of {x : m x = 0}, one per free column of rref(m).
FpMatrix kernel_basis(const FpMatrix& m);

/// A basis of Ker(d_out)/Im(d_in) with a reduction procedure.
class SubquotientBasis {
public:
    SubquotientBasis() = default;

    const Modulus& modulus() const { return echelon_->mod; }
    std::size_t dimension() const { return reps_.size(); }
    std::size_t ambient_dimension() const { return echelon_->ambient; }
    const std::vector<SparseVector>& representatives() const { return reps_; }
    std::vector<Residue> representative_dense(std::size_t k) const;

    /// Coordinates of the class of a cocycle. Throws std::invalid_argument if v is not in Ker(d_out).
    std::vector<Residue> reduce(const SparseVector& v) const;
    std::vector<Residue> reduce(std::span<const Residue> dense) const;

    /// True iff v lies in Im(d_in).
    bool is_boundary(const SparseVector& v) const;

private:
    friend SubquotientBasis make_subquotient(const Modulus&, std::size_t, std::vector<SparseVector>,
                                             std::vector<SparseVector>, std::vector<SparseVector>);
    struct Echelon {
        Modulus mod{2};
        std::size_t ambient = 0;
        // low index -> vector with that low; rep_index is the representative index, -1 for image
        // vectors and -2 for complement vectors
        std::vector<std::int64_t> owner;
        std::vector<SparseVector> vectors;
        std::vector<std::int64_t> rep_index;
    };
    std::vector<SparseVector> reps_;
    std::shared_ptr<const Echelon> echelon_;
};

/// image: echelon vectors of Im(d_in); reps: cocycle representatives; complement: vectors completing
/// image + reps to a triangular basis of the ambient space (their presence marks non-cocycles).
SubquotientBasis make_subquotient(const Modulus& mod, std::size_t ambient, std::vector<SparseVector> image,
                                  std::vector<SparseVector> reps, std::vector<SparseVector> complement);

/// Basis of H = Ker(d_out) / Im(d_in). Requires d_out * d_in = 0 and a prime field.
SubquotientBasis cohomology_basis(const FpMatrix& d_in, const FpMatrix& d_out);

/// Cohomology bases for a whole sequence d_0, d_1, ..., d_{k-1}; returns bases at the k-1 inner
/// positions, i.e. entry j is Ker(d_{j+1}) / Im(d_j). Reductions are shared between degrees.
std::vector<SubquotientBasis> cohomology_sequence(std::span<const FpMatrix> differentials);

namespace detail {
/// y += c * x over the given modulus.
void axpy(const Modulus& mod, Residue c, const SparseVector& x, SparseVector& y);
SparseVector to_sparse(std::span<const Residue> dense);
std::vector<Residue> to_dense(const SparseVector& v, std::size_t n);
}  // namespace detail

}  // namespace steenrod::la
