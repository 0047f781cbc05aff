#pragma once

// Cochain complexes over Z/p or Z/p^2 with cohomological grading.
//
// Every complex lives on a finite window [lo, hi] of degrees. A window edge may be "open": the
// true complex continues past it and nothing is known there (bar constructions, W). A closed
// edge means the complex is zero beyond it.

#include "steenrod/exactla.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace steenrod::cx {

using la::FpMatrix;
using la::Modulus;
using la::Residue;
using Label = std::string;

class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Window {
    int lo = 0;
    int hi = -1;  // empty when hi < lo
    bool open_below = false;
    bool open_above = false;

    bool contains(int n) const { return lo <= n && n <= hi; }
    /// Degree n is either inside the window or known to be zero.
    bool known(int n) const
    {
        return contains(n) || (n < lo && !open_below) || (n > hi && !open_above);
    }
};

class GradedModule {
public:
    GradedModule(Modulus mod, Window w, std::vector<std::vector<Label>> labels);

    const Modulus& modulus() const { return mod_; }
    const Window& window() const { return w_; }
    int lo() const { return w_.lo; }
    int hi() const { return w_.hi; }
    std::size_t dim(int n) const { return w_.contains(n) ? labels_[n - w_.lo].size() : 0; }
    const std::vector<Label>& labels(int n) const;
    /// Throws std::out_of_range for unknown labels.
    std::size_t index_of(int n, const Label& label) const;

private:
    Modulus mod_;
    Window w_;
    std::vector<std::vector<Label>> labels_;
    std::vector<std::unordered_map<Label, std::size_t>> index_;
};

class CochainComplex {
public:
    /// differentials[k] is d^{lo+k} : C^{lo+k} -> C^{lo+k+1}, for lo <= lo+k < hi. The top
    /// differential out of the window is zero when the upper edge is closed and unknown otherwise.
    /// Checks dimensions and d^2 = 0.
    CochainComplex(GradedModule module, std::vector<FpMatrix> differentials);

    static CochainComplex single(Modulus mod, int degree, std::vector<Label> labels);

    const GradedModule& module() const { return module_; }
    const Modulus& modulus() const { return module_.modulus(); }
    const Window& window() const { return module_.window(); }
    int lo() const { return module_.lo(); }
    int hi() const { return module_.hi(); }
    std::size_t dim(int n) const { return module_.dim(n); }
    const std::vector<Label>& labels(int n) const { return module_.labels(n); }

    /// d^n. Zero matrix when n or n+1 is a known-zero degree; WindowError if unknown.
    FpMatrix d(int n) const;
    bool has_d(int n) const;

    /// H^n = Ker d^n / Im d^{n-1}; WindowError when either differential is unknown.
    la::SubquotientBasis cohomology(int n) const;
    /// Cohomology in degrees [from, to] sharing one reduction pass.
    std::vector<la::SubquotientBasis> cohomology(int from, int to) const;

private:
    GradedModule module_;
    std::vector<FpMatrix> d_;
};

using ComplexPtr = std::shared_ptr<const CochainComplex>;

/// A graded map f^i : A^i -> B^{i+shift}. Components are stored for source degrees in the
/// source window.
struct ChainMap {
    ComplexPtr source;
    ComplexPtr target;
    int shift = 0;
    std::map<int, FpMatrix> components;

    /// Component in source degree i (zero if i is outside both windows but known).
    FpMatrix at(int i) const;
};

ChainMap zero_map(ComplexPtr source, ComplexPtr target, int shift);
ChainMap identity_map(ComplexPtr c);
ChainMap compose(const ChainMap& g, const ChainMap& f);
ChainMap add(const ChainMap& f, const ChainMap& g);
ChainMap scale(const ChainMap& f, Residue c);

/// d_B f + (-1)^{n+1} f d_A = 0 in every degree where all four terms are known.
bool is_chain_map(const ChainMap& f);

/// Tensor product over the degrees where it is exactly determined by the input windows.
/// Basis label of a (x) b is "(a,b)"; d(a (x) b) = da (x) b + (-1)^{|a|} a (x) db.
CochainComplex tensor(const CochainComplex& a, const CochainComplex& b);

/// Index of a (x) b in tensor(a, b) in degree i + j, given basis indices of a in A^i, b in B^j.
std::size_t tensor_index(const CochainComplex& a, const CochainComplex& b, int i, std::size_t ia, int j,
                         std::size_t ib);

/// Hom^n(A, B) = prod_i Hom(A^i, B^{n+i}); requires both windows closed.
/// Basis element "hom(a,b)" sends a to b and the other basis elements of A to 0.
/// d(f) = d_B f + (-1)^{n+1} f d_A.
CochainComplex hom_complex(const CochainComplex& a, const CochainComplex& b);

/// Coordinates of a graded map of shift n in hom_complex(source, target) degree n, and back.
std::vector<Residue> hom_vector(const ChainMap& f, const CochainComplex& hom);
ChainMap map_from_hom_vector(ComplexPtr source, ComplexPtr target, int shift, std::span<const Residue> v);

/// Double complex D^{i,j}: vertical d^v : D^{i,j} -> D^{i,j+1}, horizontal d^h : D^{i,j} -> D^{i+1,j}.
/// Squares commute.
class DoubleComplex {
public:
    DoubleComplex(Modulus mod, Window i_window, Window j_window, std::vector<std::vector<std::vector<Label>>> labels,
                  std::map<std::pair<int, int>, FpMatrix> vertical, std::map<std::pair<int, int>, FpMatrix> horizontal);

    const Modulus& modulus() const { return mod_; }
    const Window& i_window() const { return iw_; }
    const Window& j_window() const { return jw_; }
    std::size_t dim(int i, int j) const;
    const std::vector<Label>& labels(int i, int j) const;
    FpMatrix dv(int i, int j) const;
    FpMatrix dh(int i, int j) const;

private:
    Modulus mod_;
    Window iw_, jw_;
    std::vector<std::vector<std::vector<Label>>> labels_;
    std::map<std::pair<int, int>, FpMatrix> dv_, dh_;
};

/// Tot^n = sum_i D^{i,n-i}; d(a) = d^v a + (-1)^{n-i} d^h a for a in D^{i,n-i}. Labels "[i]x".
/// Throws WindowError when anti-diagonals are infinite.
CochainComplex totalize(const DoubleComplex& d);

/// Window of degrees n for which every pair (i, n-i) is either inside the product window or
/// known to vanish; shared by tensor products and totalization.
Window exact_pair_window(const Window& a, const Window& b);

enum class HomotopyStatus { Found, None, WindowTooSmall };

struct HomotopyResult {
    HomotopyStatus status;
    std::optional<ChainMap> homotopy;  // shift n-1 with f = d s + (-1)^n s d, when Found
};

/// For f of shift n: finds s with f = d_B s + (-1)^n s d_A (the Hom-complex boundary of s).
HomotopyResult null_homotopy(const ChainMap& f);

/// Degree-shifted complex C[k]^n = C^{n+k} with differential (-1)^k d.
CochainComplex shift(const CochainComplex& c, int k);

}  // namespace steenrod::cx
