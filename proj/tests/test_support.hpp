#pragma once

// Hand-rolled random generators shared by the property tests.

#include "steenrod/complexes.hpp"
#include "steenrod/exactla.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

using steenrod::la::Entry;
using steenrod::la::FpMatrix;
using steenrod::la::Modulus;
using steenrod::la::Residue;

inline FpMatrix random_matrix(std::mt19937_64& rng, Modulus mod, std::size_t r, std::size_t c, double density = 0.5)
{
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<Residue> v(1, mod.value() - 1);
    std::vector<Entry> e;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (u(rng) < density)
                e.push_back({i, j, v(rng)});
    return FpMatrix::from_triplets(mod, r, c, e);
}

/// Random closed complex on [lo, hi] with dims in [0, max_dim]; labels are unique per degree
/// and carry the given tag.
inline steenrod::cx::CochainComplex random_complex(std::mt19937_64& rng, Modulus mod, int lo, int hi,
                                                   std::size_t max_dim, const std::string& tag)
{
    using namespace steenrod;
    std::vector<std::vector<cx::Label>> labels;
    for (int n = lo; n <= hi; ++n) {
        std::size_t d = rng() % (max_dim + 1);
        std::vector<cx::Label> ln;
        for (std::size_t k = 0; k < d; ++k)
            ln.push_back(tag + std::to_string(n) + "_" + std::to_string(k));
        labels.push_back(ln);
    }
    std::vector<FpMatrix> ds;
    for (int n = lo; n < hi; ++n) {
        std::size_t src = labels[n - lo].size(), dst = labels[n - lo + 1].size();
        if (ds.empty()) {
            ds.push_back(random_matrix(rng, mod, dst, src));
            continue;
        }
        // Rows of d^n are combinations of the left annihilator of d^{n-1}.
        FpMatrix ann = la::kernel_basis(ds.back().transposed());
        FpMatrix r = random_matrix(rng, mod, dst, ann.cols());
        ds.push_back(ann.cols() ? r * ann.transposed() : FpMatrix(mod, dst, src));
    }
    return cx::CochainComplex(cx::GradedModule(mod, cx::Window{lo, hi, false, false}, labels), ds);
}

inline bool d_squared_zero(const steenrod::cx::CochainComplex& c)
{
    for (int n = c.lo(); n + 1 < c.hi(); ++n)
        if (!(c.d(n + 1) * c.d(n)).is_zero())
            return false;
    return true;
}

}  // namespace testing
