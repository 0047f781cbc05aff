#pragma once

// Report-valued checks of the operations on a context: Cartan formula, Adem relations, axioms,
// naturality and Bockstein identities.

#include "steenrod/adem.hpp"
#include "steenrod/operations.hpp"
#include "steenrod/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace steenrod::verify {

/// Matrix of a word on H^q, or nullopt when an intermediate degree leaves the window.
std::optional<la::FpMatrix> word_matrix(const ops::SteenrodContext& ctx, const alg::OpWord& w, int q);
/// Matrix of a homogeneous polynomial of the given degree on H^q (the zero polynomial gives 0).
std::optional<la::FpMatrix> polynomial_matrix(const ops::SteenrodContext& ctx, const alg::OpPolynomial& f, int degree,
                                              int q);

/// Sq^k(xy) = sum Sq^i x Sq^{k-i} y at p = 2; P^k, beta and beta P^k versions at odd p; for all
/// basis pairs with |x| + |y| <= max_degree (default: the bound) and targets within the bound.
Report verify_cartan(const ops::SteenrodContext& ctx, int max_degree = -1);

/// Both sides of every Adem relation applied while rewriting the given polynomials act identically,
/// and each polynomial acts like its admissible form.
Report verify_adem(const ops::SteenrodContext& ctx, const std::vector<alg::OpPolynomial>& polys);
/// All inadmissible pairs Sq^a Sq^b (p = 2) or P^a P^b, P^a bP^b, bP^a P^b, bP^a bP^b (odd p) of
/// total degree at most max_total_degree.
std::vector<alg::OpPolynomial> inadmissible_pairs(int p, int max_total_degree);
/// verify_adem over inadmissible_pairs(p, D).
Report verify_adem(const ops::SteenrodContext& ctx);

/// Top operation is the p-th power, operations above the top vanish, negative operations vanish,
/// Sq^0 / P^0 are identities, and beta P^s = beta o P^s at odd p.
Report verify_axioms(const ops::SteenrodContext& ctx);

/// f^* o op = op o f^* for a map f : source -> target of the underlying spaces.
Report verify_naturality(const simp::SimplicialMap& f, const ops::SteenrodContext& source,
                         const ops::SteenrodContext& target, const std::string& map_name = "f");

/// beta = Sq^1 (p = 2), beta o beta = 0 and the derivation rule on basis pairs.
Report verify_bockstein(const ops::SteenrodContext& ctx, int max_degree = -1);

}  // namespace steenrod::verify
