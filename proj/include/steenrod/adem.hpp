#pragma once

// Words in the Steenrod algebra and their reduction to admissible form by Adem relations.
//
// A letter is beta^e P^i for odd p, or Sq^i for p = 2 (e = 0). A word w = L_1 L_2 ... L_k acts as
// L_1 o L_2 o ... o L_k. Letters Sq^0 and P^0 are identities and are dropped; words with a negative
// exponent are zero.

#include "steenrod/exactla.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace steenrod::alg {

using la::Residue;

/// C(n, k) mod p by Lucas' theorem; 0 for k < 0 or k > n >= 0, and C(n, k) = (-1)^k C(k - n - 1, k)
/// for n < 0.
Residue mod_binomial(long n, long k, int p);

struct Letter {
    int beta = 0;
    int power = 0;
    friend auto operator<=>(const Letter&, const Letter&) = default;
};

using OpWord = std::vector<Letter>;

/// Cohomological degree of a letter or word.
int degree(const Letter& l, int p);
int degree(const OpWord& w, int p);

/// Sq: i_k >= 2 i_{k+1}; odd p: i_k >= p i_{k+1} + e_{k+1}.
bool admissible(const OpWord& w, int p);

class OpPolynomial {
public:
    explicit OpPolynomial(int p);
    static OpPolynomial word(int p, OpWord w, Residue c = 1);

    int prime() const { return p_; }
    const std::map<OpWord, Residue>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Adds c * w after normalizing w (identity letters dropped, negative exponents and beta^2 give 0).
    void add(const OpWord& w, Residue c);
    OpPolynomial& operator+=(const OpPolynomial& other);
    /// (a * b) = a o b.
    friend OpPolynomial operator*(const OpPolynomial& a, const OpPolynomial& b);
    friend bool operator==(const OpPolynomial&, const OpPolynomial&) = default;

private:
    int p_;
    std::map<OpWord, Residue> terms_;
};

/// Letter text: "Sq3", "P2", "bP1", "b" (beta = beta P^0; Sq1 at p = 2). The empty word prints as "1".
std::string to_string(const OpWord& w, int p);
/// Terms in descending order of their exponent sequences; coefficients other than 1 are prefixed.
std::string to_string(const OpPolynomial& f);

/// Right-hand side of the Adem relation for an inadmissible pair (a, b). Throws
/// std::invalid_argument for admissible pairs.
OpPolynomial adem_expand(const Letter& a, const Letter& b, int p);

struct AppliedRelation {
    Letter left;
    Letter right;
    OpPolynomial expansion;
};

class RewriteBudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Repeatedly expands the leftmost inadmissible adjacent pair of every term until all terms are
/// admissible. Each expansion counts as one step. Applied relations are appended to `log` when it is
/// given.
OpPolynomial rewrite_admissible(const OpPolynomial& f, std::size_t step_budget = 1'000'000,
                                std::vector<AppliedRelation>* log = nullptr);

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position);
    std::size_t position;
};

/// Whitespace-separated letters SqN, PN, bPN, b. Sq requires p = 2; P and bP require odd p.
OpWord parse_word(const std::string& text, int p);

}  // namespace steenrod::alg
