#pragma once

// Finite groups given by multiplication tables, and homomorphisms between them.

#include <memory>
#include <string>
#include <vector>

namespace steenrod::grp {

class FiniteGroup {
public:
    /// Element 0 must be the identity. The table is checked exhaustively (closure, identity,
    /// inverses, associativity).
    FiniteGroup(std::string name, std::vector<std::string> elements, std::vector<std::vector<int>> table);

    static FiniteGroup trivial();
    static FiniteGroup cyclic(int n);
    static FiniteGroup klein();
    /// Symmetries of the n-gon, order 2n; element r^k s^e has index k + n e.
    static FiniteGroup dihedral(int n);
    /// Permutations of {0..n-1} in lexicographic order, n <= 4; (a b)(i) = a(b(i)).
    static FiniteGroup symmetric(int n);
    /// Element (g, h) has index g * |H| + h.
    static FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h);

    /// Line 1: element names (identity first); then |G| lines, row r giving r * c by name.
    static FiniteGroup parse_table(const std::string& text, const std::string& name = "table");
    static FiniteGroup from_table_file(const std::string& path);
    /// "cyclic:n", "klein", "dihedral:n", "symmetric:n", "trivial", or "@path" for a table file.
    static FiniteGroup from_spec(const std::string& spec);

    const std::string& name() const { return name_; }
    int order() const { return static_cast<int>(elements_.size()); }
    int identity() const { return 0; }
    int mul(int a, int b) const { return table_[a][b]; }
    int inverse(int a) const { return inverse_[a]; }
    const std::string& element_name(int a) const { return elements_[a]; }
    const std::vector<std::string>& element_names() const { return elements_; }

private:
    std::string name_;
    std::vector<std::string> elements_;
    std::vector<std::vector<int>> table_;
    std::vector<int> inverse_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

struct GroupHomomorphism {
    GroupPtr source;
    GroupPtr target;
    std::vector<int> images;

    int operator()(int g) const { return images[g]; }
};

/// Throws std::invalid_argument when the map is not a homomorphism.
GroupHomomorphism make_homomorphism(GroupPtr source, GroupPtr target, std::vector<int> images);

/// The diagonal G -> G x G.
GroupHomomorphism diagonal(GroupPtr g, GroupPtr gxg);

/// Projection of G x H onto its first (k = 0) or second (k = 1) factor.
GroupHomomorphism projection(GroupPtr g, GroupPtr h, GroupPtr gxh, int k);

}  // namespace steenrod::grp
