#pragma once

// Graded polynomial rings over F_p with square-zero truncations, and total Steenrod operations
// given by their values on generators.

#include "steenrod/exactla.hpp"

#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace steenrod::poly {

using la::Residue;

struct Generator {
    std::string name;
    int degree = 1;
    bool square_zero = false;  // g^2 = 0
};

/// F_p[g_1, ..., g_k] / (g^2 : g square-zero).
struct GradedRingSpec {
    std::string name;
    int p = 2;
    std::vector<Generator> generators;

    /// Throws std::invalid_argument on a non-prime p, degree < 1, empty or repeated names.
    void validate() const;
    /// Index of a generator; throws std::out_of_range.
    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const;
};

using RingPtr = std::shared_ptr<const GradedRingSpec>;

RingPtr make_ring(GradedRingSpec spec);

/// Exponent vector indexed like the generator table.
using Monomial = std::vector<int>;

/// Graded lexicographic order: cohomological degree first, then exponents compared from the first
/// generator on.
struct MonomialLess {
    const GradedRingSpec* ring;
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int monomial_degree(const GradedRingSpec& ring, const Monomial& m);

class FpPoly {
public:
    explicit FpPoly(RingPtr ring);

    static FpPoly constant(RingPtr ring, std::int64_t c);
    static FpPoly generator(RingPtr ring, std::size_t index);
    static FpPoly generator(RingPtr ring, const std::string& name);
    /// The monomial, or zero when it violates a square-zero relation.
    static FpPoly monomial(RingPtr ring, Monomial m, Residue c = 1);

    const RingPtr& ring() const { return ring_; }
    const GradedRingSpec& spec() const { return *ring_; }
    int prime() const { return ring_->p; }
    const std::map<Monomial, Residue, MonomialLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Monomial& m, Residue c);

    FpPoly& operator+=(const FpPoly& o);
    FpPoly& operator-=(const FpPoly& o);
    friend FpPoly operator+(FpPoly a, const FpPoly& b) { return a += b; }
    friend FpPoly operator-(FpPoly a, const FpPoly& b) { return a -= b; }
    friend FpPoly operator*(const FpPoly& a, const FpPoly& b);
    FpPoly scaled(Residue c) const;
    FpPoly pow(unsigned k) const;

    /// Part of cohomological degree n.
    FpPoly homogeneous_part(int n) const;
    /// Degrees occurring, ascending.
    std::vector<int> degrees() const;
    bool is_homogeneous() const { return degrees().size() <= 1; }
    /// Largest degree occurring; -1 for zero.
    int max_degree() const;

    /// Descending in the monomial order: "u_1^2 u_3 + 2 t + 1"; zero prints "0".
    std::string to_string() const;

    friend bool operator==(const FpPoly& a, const FpPoly& b);

private:
    void check_same_ring(const FpPoly& o) const;

    RingPtr ring_;
    std::map<Monomial, Residue, MonomialLess> terms_;
};

/// Parses the output format of to_string ("*" between factors is also accepted; "-" at odd p).
FpPoly parse_poly(RingPtr ring, const std::string& text);

/// Ring map determined by generator images; images of square-zero generators must square to zero.
class RingMap {
public:
    RingMap(RingPtr source, RingPtr target, std::vector<FpPoly> images);

    const RingPtr& source() const { return source_; }
    const RingPtr& target() const { return target_; }
    const FpPoly& image(std::size_t k) const { return images_[k]; }
    FpPoly operator()(const FpPoly& f) const;

    /// Whether the map is injective on the degree-n part (exact rank computation).
    bool injective_in_degree(int n) const;

private:
    RingPtr source_, target_;
    std::vector<FpPoly> images_;
};

/// Monomials of cohomological degree n that respect the truncation relations, in ascending order.
std::vector<Monomial> monomials_of_degree(const GradedRingSpec& ring, int n);

class InconsistentOperation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Total operation Sq (p = 2) or P (p odd) given on generators.
struct TotalOperation {
    RingPtr ring;
    std::vector<FpPoly> values;

    /// Throws InconsistentOperation unless, for every generator g, the parts of the value below
    /// degree |g| and above p|g| vanish, the part of degree p|g| is g^p, and Sq(g)^2 = 0 when g^2 = 0.
    void validate() const;
    const FpPoly& value(const std::string& name) const;
};

/// The trivial operation g -> g^p on every generator.
TotalOperation frobenius_operation(RingPtr ring);

/// The multiplicative extension of the operation to an arbitrary element.
FpPoly extend_total(const TotalOperation& op, const FpPoly& f);

/// Homogeneous component: Sq^i f (p = 2) or P^i f (p odd) for homogeneous f.
FpPoly operation_component(const TotalOperation& op, const FpPoly& f, int i);

/// Generators of a followed by those of b, with componentwise operations. Throws
/// std::invalid_argument on a name clash or different primes.
TotalOperation kunneth_tensor(const TotalOperation& a, const TotalOperation& b, const std::string& name = "");

/// Renames generators (names not listed are kept).
TotalOperation rename(const TotalOperation& op, const std::map<std::string, std::string>& names,
                      const std::string& ring_name = "");

/// Same generators (by name, in any order) with the same degrees, relations and operation values.
bool equivalent(const TotalOperation& a, const TotalOperation& b);

/// Random element with every term of polynomial (exponent-sum) degree at most max_degree.
FpPoly random_poly(RingPtr ring, int max_degree, std::mt19937_64& rng, int max_terms = 6);

/// Text format, one statement per line ('#' starts a comment):
///   ring NAME prime P
///   gen NAME DEGREE [square-zero]
///   total NAME = POLYNOMIAL
/// Generators without a total line get g -> g^p. The result is validated.
TotalOperation parse_ring_spec(const std::string& text);
std::string format_ring_spec(const TotalOperation& op);

}  // namespace steenrod::poly
