#include "steenrod/group.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace steenrod::grp {

FiniteGroup::FiniteGroup(std::string name, std::vector<std::string> elements, std::vector<std::vector<int>> table)
    : name_(std::move(name)), elements_(std::move(elements)), table_(std::move(table))
{
    const int n = order();
    if (n == 0)
        throw std::invalid_argument("group: empty element list");
    if (static_cast<int>(table_.size()) != n)
        throw std::invalid_argument("group: table has wrong number of rows");
    for (const auto& row : table_) {
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("group: table has a row of wrong length");
        for (int v : row)
            if (v < 0 || v >= n)
                throw std::invalid_argument("group: table entry outside the element list");
    }
    for (int a = 0; a < n; ++a)
        if (table_[0][a] != a || table_[a][0] != a)
            throw std::invalid_argument("group: first element is not the identity");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (table_[a][b] == 0 && table_[b][a] == 0)
                inverse_[a] = b;
        if (inverse_[a] < 0)
            throw std::invalid_argument("group: element " + elements_[a] + " has no inverse");
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
                    throw std::invalid_argument("group: multiplication is not associative");
}

FiniteGroup FiniteGroup::trivial() { return FiniteGroup("trivial", {"e"}, {{0}}); }

FiniteGroup FiniteGroup::cyclic(int n)
{
    if (n < 1)
        throw std::invalid_argument("cyclic group order must be positive");
    std::vector<std::string> names;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a) {
        names.push_back(std::to_string(a));
        for (int b = 0; b < n; ++b)
            t[a][b] = (a + b) % n;
    }
    return FiniteGroup("cyclic:" + std::to_string(n), names, t);
}

FiniteGroup FiniteGroup::klein()
{
    auto c2 = cyclic(2);
    auto k = direct_product(c2, c2);
    return FiniteGroup("klein", k.elements_, k.table_);
}

FiniteGroup FiniteGroup::dihedral(int n)
{
    if (n < 1)
        throw std::invalid_argument("dihedral group parameter must be positive");
    const int order = 2 * n;
    std::vector<std::string> names;
    std::vector<std::vector<int>> t(order, std::vector<int>(order));
    for (int x = 0; x < order; ++x) {
        int k = x % n, e = x / n;
        names.push_back((e ? "s" : "r") + std::to_string(k));
        for (int y = 0; y < order; ++y) {
            int l = y % n, f = y / n;
            int kk = ((k + (e ? -l : l)) % n + n) % n;
            t[x][y] = kk + n * ((e + f) % 2);
        }
    }
    return FiniteGroup("dihedral:" + std::to_string(n), names, t);
}

FiniteGroup FiniteGroup::symmetric(int n)
{
    if (n < 1 || n > 4)
        throw std::invalid_argument("symmetric:n is supported for 1 <= n <= 4");
    std::vector<std::vector<int>> perms;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    do
        perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < perms.size(); ++i) {
        index[perms[i]] = static_cast<int>(i);
        std::string s;
        for (int v : perms[i])
            s += std::to_string(v);
        names.push_back(s);
    }
    std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
    for (std::size_t a = 0; a < perms.size(); ++a)
        for (std::size_t b = 0; b < perms.size(); ++b) {
            std::vector<int> c(n);
            for (int i = 0; i < n; ++i)
                c[i] = perms[a][perms[b][i]];
            t[a][b] = index[c];
        }
    return FiniteGroup("symmetric:" + std::to_string(n), names, t);
}

FiniteGroup FiniteGroup::direct_product(const FiniteGroup& g, const FiniteGroup& h)
{
    const int m = h.order();
    const int n = g.order() * m;
    std::vector<std::string> names;
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x) {
        names.push_back("(" + g.element_name(x / m) + "," + h.element_name(x % m) + ")");
        for (int y = 0; y < n; ++y)
            t[x][y] = g.mul(x / m, y / m) * m + h.mul(x % m, y % m);
    }
    return FiniteGroup(g.name() + "x" + h.name(), names, t);
}

FiniteGroup FiniteGroup::parse_table(const std::string& text, const std::string& name)
{
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok)
            tokens.push_back(tok);
        if (!tokens.empty())
            rows.push_back(tokens);
    }
    if (rows.empty())
        throw std::invalid_argument("group table: empty input");
    const auto& names = rows.front();
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!index.emplace(names[i], static_cast<int>(i)).second)
            throw std::invalid_argument("group table: duplicate element name " + names[i]);
    if (rows.size() != names.size() + 1)
        throw std::invalid_argument("group table: expected " + std::to_string(names.size()) + " product rows, got " +
                                    std::to_string(rows.size() - 1));
    std::vector<std::vector<int>> t;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != names.size())
            throw std::invalid_argument("group table: row " + std::to_string(r) + " has wrong length");
        std::vector<int> row;
        for (const auto& tok : rows[r]) {
            auto it = index.find(tok);
            if (it == index.end())
                throw std::invalid_argument("group table: unknown element " + tok + " in row " + std::to_string(r));
            row.push_back(it->second);
        }
        t.push_back(row);
    }
    return FiniteGroup(name, names, t);
}

FiniteGroup FiniteGroup::from_table_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("group table: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_table(ss.str(), "@" + path);
}

FiniteGroup FiniteGroup::from_spec(const std::string& spec)
{
    if (!spec.empty() && spec[0] == '@')
        return from_table_file(spec.substr(1));
    auto colon = spec.find(':');
    std::string family = spec.substr(0, colon);
    int n = 0;
    if (colon != std::string::npos) {
        try {
            std::size_t used = 0;
            n = std::stoi(spec.substr(colon + 1), &used);
            if (used != spec.size() - colon - 1)
                throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("group: malformed parameter in " + spec);
        }
    }
    if (family == "trivial" && colon == std::string::npos)
        return trivial();
    if (family == "klein" && colon == std::string::npos)
        return klein();
    if (colon != std::string::npos) {
        if (family == "cyclic")
            return cyclic(n);
        if (family == "dihedral")
            return dihedral(n);
        if (family == "symmetric")
            return symmetric(n);
    }
    throw std::invalid_argument("group: unknown group " + spec);
}

GroupHomomorphism make_homomorphism(GroupPtr source, GroupPtr target, std::vector<int> images)
{
    if (static_cast<int>(images.size()) != source->order())
        throw std::invalid_argument("homomorphism: wrong number of images");
    for (int v : images)
        if (v < 0 || v >= target->order())
            throw std::invalid_argument("homomorphism: image outside target");
    for (int a = 0; a < source->order(); ++a)
        for (int b = 0; b < source->order(); ++b)
            if (images[source->mul(a, b)] != target->mul(images[a], images[b]))
                throw std::invalid_argument("homomorphism: map does not respect multiplication");
    return {std::move(source), std::move(target), std::move(images)};
}

GroupHomomorphism diagonal(GroupPtr g, GroupPtr gxg)
{
    std::vector<int> images;
    for (int a = 0; a < g->order(); ++a)
        images.push_back(a * g->order() + a);
    return make_homomorphism(std::move(g), std::move(gxg), std::move(images));
}

GroupHomomorphism projection(GroupPtr g, GroupPtr h, GroupPtr gxh, int k)
{
    std::vector<int> images;
    for (int x = 0; x < gxh->order(); ++x)
        images.push_back(k == 0 ? x / h->order() : x % h->order());
    return make_homomorphism(gxh, k == 0 ? std::move(g) : std::move(h), std::move(images));
}

}  // namespace steenrod::grp
