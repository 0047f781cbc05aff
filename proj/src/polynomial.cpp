#include "steenrod/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace steenrod::poly {

void GradedRingSpec::validate() const
{
    if (p < 2 || !la::is_prime(static_cast<std::uint64_t>(p)))
        throw std::invalid_argument("ring " + name + ": " + std::to_string(p) + " is not prime");
    std::set<std::string> seen;
    for (const auto& g : generators) {
        if (g.name.empty())
            throw std::invalid_argument("ring " + name + ": empty generator name");
        if (g.degree < 1)
            throw std::invalid_argument("ring " + name + ": generator " + g.name + " has degree < 1");
        if (!seen.insert(g.name).second)
            throw std::invalid_argument("ring " + name + ": repeated generator " + g.name);
    }
}

std::size_t GradedRingSpec::index_of(const std::string& n) const
{
    for (std::size_t k = 0; k < generators.size(); ++k)
        if (generators[k].name == n)
            return k;
    throw std::out_of_range("ring " + name + " has no generator " + n);
}

bool GradedRingSpec::has(const std::string& n) const
{
    return std::any_of(generators.begin(), generators.end(), [&](const Generator& g) { return g.name == n; });
}

RingPtr make_ring(GradedRingSpec spec)
{
    spec.validate();
    return std::make_shared<const GradedRingSpec>(std::move(spec));
}

int monomial_degree(const GradedRingSpec& ring, const Monomial& m)
{
    int d = 0;
    for (std::size_t k = 0; k < m.size(); ++k)
        d += m[k] * ring.generators[k].degree;
    return d;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const
{
    int da = monomial_degree(*ring, a), db = monomial_degree(*ring, b);
    if (da != db)
        return da < db;
    return a < b;
}

namespace {

bool admissible_monomial(const GradedRingSpec& ring, const Monomial& m)
{
    for (std::size_t k = 0; k < m.size(); ++k)
        if (m[k] < 0 || (ring.generators[k].square_zero && m[k] > 1))
            return false;
    return true;
}

la::Modulus field(const GradedRingSpec& ring)
{
    return la::Modulus(static_cast<std::uint32_t>(ring.p));
}

}  // namespace

FpPoly::FpPoly(RingPtr ring) : ring_(std::move(ring)), terms_(MonomialLess{ring_.get()})
{
}

FpPoly FpPoly::constant(RingPtr ring, std::int64_t c)
{
    FpPoly f(ring);
    f.add_term(Monomial(ring->generators.size(), 0), field(*ring).reduce(c));
    return f;
}

FpPoly FpPoly::generator(RingPtr ring, std::size_t index)
{
    Monomial m(ring->generators.size(), 0);
    m.at(index) = 1;
    return monomial(ring, m);
}

FpPoly FpPoly::generator(RingPtr ring, const std::string& name)
{
    std::size_t k = ring->index_of(name);
    return generator(std::move(ring), k);
}

FpPoly FpPoly::monomial(RingPtr ring, Monomial m, Residue c)
{
    if (m.size() != ring->generators.size())
        throw std::invalid_argument("monomial has the wrong number of exponents");
    FpPoly f(ring);
    f.add_term(m, c);
    return f;
}

void FpPoly::add_term(const Monomial& m, Residue c)
{
    if (!admissible_monomial(*ring_, m))
        return;
    c %= static_cast<Residue>(ring_->p);
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second = field(*ring_).add(it->second, c);
        if (it->second == 0)
            terms_.erase(it);
    }
}

void FpPoly::check_same_ring(const FpPoly& o) const
{
    if (ring_ != o.ring_)
        throw std::invalid_argument("polynomials from different rings (" + ring_->name + ", " + o.ring_->name + ")");
}

FpPoly& FpPoly::operator+=(const FpPoly& o)
{
    check_same_ring(o);
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

FpPoly& FpPoly::operator-=(const FpPoly& o)
{
    check_same_ring(o);
    auto mod = field(*ring_);
    for (const auto& [m, c] : o.terms_)
        add_term(m, mod.neg(c));
    return *this;
}

FpPoly operator*(const FpPoly& a, const FpPoly& b)
{
    a.check_same_ring(b);
    auto mod = field(a.spec());
    FpPoly r(a.ring_);
    Monomial m(a.spec().generators.size());
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t k = 0; k < m.size(); ++k)
                m[k] = ma[k] + mb[k];
            r.add_term(m, mod.mul(ca, cb));
        }
    return r;
}

FpPoly FpPoly::scaled(Residue c) const
{
    auto mod = field(*ring_);
    FpPoly r(ring_);
    for (const auto& [m, x] : terms_)
        r.add_term(m, mod.mul(x, c % mod.value()));
    return r;
}

FpPoly FpPoly::pow(unsigned k) const
{
    FpPoly result = constant(ring_, 1), base = *this;
    while (k) {
        if (k & 1)
            result = result * base;
        k >>= 1;
        if (k)
            base = base * base;
    }
    return result;
}

FpPoly FpPoly::homogeneous_part(int n) const
{
    FpPoly r(ring_);
    for (const auto& [m, c] : terms_)
        if (monomial_degree(*ring_, m) == n)
            r.terms_.emplace(m, c);
    return r;
}

std::vector<int> FpPoly::degrees() const
{
    std::vector<int> out;
    for (const auto& [m, c] : terms_) {
        int d = monomial_degree(*ring_, m);
        if (out.empty() || out.back() != d)
            out.push_back(d);
    }
    return out;
}

int FpPoly::max_degree() const
{
    return terms_.empty() ? -1 : monomial_degree(*ring_, terms_.rbegin()->first);
}

std::string FpPoly::to_string() const
{
    if (terms_.empty())
        return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        std::string term;
        for (std::size_t k = 0; k < m.size(); ++k) {
            if (m[k] == 0)
                continue;
            if (!term.empty())
                term += ' ';
            term += ring_->generators[k].name;
            if (m[k] > 1)
                term += '^' + std::to_string(m[k]);
        }
        if (term.empty())
            term = std::to_string(c);
        else if (c != 1)
            term = std::to_string(c) + ' ' + term;
        out += (out.empty() ? "" : " + ") + term;
    }
    return out;
}

bool operator==(const FpPoly& a, const FpPoly& b)
{
    if (a.ring_ != b.ring_ && !(a.is_zero() && b.is_zero()))
        return false;
    return std::equal(a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end());
}

FpPoly parse_poly(RingPtr ring, const std::string& text)
{
    auto mod = field(*ring);
    FpPoly result(ring);
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("cannot parse polynomial '" + text + "' at " + std::to_string(pos) + ": " + why);
    };
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    auto number = [&] {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
            ++pos;
        if (start == pos)
            fail("expected a number");
        return std::stoll(text.substr(start, pos - start));
    };
    bool negative = false;
    bool expect_term = true;
    bool any = false;
    skip();
    while (pos < text.size()) {
        if (!expect_term)
            fail("expected '+' or '-'");
        Monomial m(ring->generators.size(), 0);
        std::int64_t coeff = 1;
        bool factors = false;
        while (true) {
            skip();
            if (pos >= text.size() || text[pos] == '+' || text[pos] == '-')
                break;
            if (text[pos] == '*') {
                if (!factors)
                    fail("unexpected '*'");
                ++pos;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
                coeff *= number();
                coeff %= ring->p;
            } else if (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_') {
                std::size_t start = pos;
                while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                    ++pos;
                std::string name = text.substr(start, pos - start);
                if (!ring->has(name)) {
                    pos = start;
                    fail("unknown generator " + name);
                }
                int e = 1;
                if (pos < text.size() && text[pos] == '^') {
                    ++pos;
                    e = static_cast<int>(number());
                }
                m[ring->index_of(name)] += e;
            } else {
                fail("unexpected character");
            }
            factors = true;
        }
        if (!factors)
            fail("empty term");
        result.add_term(m, mod.reduce(negative ? -coeff : coeff));
        any = true;
        expect_term = false;
        if (pos < text.size()) {
            negative = text[pos] == '-';
            ++pos;
            expect_term = true;
        }
    }
    if (expect_term && any)
        fail("trailing operator");
    if (!any)
        fail("empty polynomial");
    return result;
}

namespace {

// Evaluates f with generator k replaced by images[k].
FpPoly substitute(const FpPoly& f, const std::vector<FpPoly>& images, const RingPtr& target)
{
    std::vector<std::vector<FpPoly>> powers(images.size());
    auto power = [&](std::size_t k, int e) -> const FpPoly& {
        auto& v = powers[k];
        if (v.empty())
            v.push_back(FpPoly::constant(target, 1));
        while (static_cast<int>(v.size()) <= e)
            v.push_back(v.back() * images[k]);
        return v[e];
    };
    FpPoly result(target);
    for (const auto& [m, c] : f.terms()) {
        FpPoly term = FpPoly::constant(target, c);
        for (std::size_t k = 0; k < m.size() && !term.is_zero(); ++k)
            if (m[k] > 0)
                term = term * power(k, m[k]);
        result += term;
    }
    return result;
}

void check_images(const RingPtr& source, const RingPtr& target, const std::vector<FpPoly>& images, bool as_operation)
{
    if (images.size() != source->generators.size())
        throw std::invalid_argument("ring map from " + source->name + " needs " +
                                    std::to_string(source->generators.size()) + " images");
    for (const auto& f : images)
        if (f.ring() != target)
            throw std::invalid_argument("image does not lie in " + target->name);
    if (source->p != target->p)
        throw std::invalid_argument("ring map between different characteristics");
    for (std::size_t k = 0; k < images.size(); ++k)
        if (source->generators[k].square_zero && !(images[k] * images[k]).is_zero()) {
            std::string msg = "image of " + source->generators[k].name + " does not square to zero: (" +
                              images[k].to_string() + ")^2 = " + (images[k] * images[k]).to_string();
            if (as_operation)
                throw InconsistentOperation(msg);
            throw std::invalid_argument(msg);
        }
}

}  // namespace

RingMap::RingMap(RingPtr source, RingPtr target, std::vector<FpPoly> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images))
{
    check_images(source_, target_, images_, false);
}

FpPoly RingMap::operator()(const FpPoly& f) const
{
    if (f.ring() != source_)
        throw std::invalid_argument("argument does not lie in " + source_->name);
    return substitute(f, images_, target_);
}

std::vector<Monomial> monomials_of_degree(const GradedRingSpec& ring, int n)
{
    std::vector<Monomial> out;
    Monomial m(ring.generators.size(), 0);
    auto rec = [&](auto&& self, std::size_t k, int left) -> void {
        if (k == m.size()) {
            if (left == 0)
                out.push_back(m);
            return;
        }
        const auto& g = ring.generators[k];
        int max_e = left / g.degree;
        if (g.square_zero)
            max_e = std::min(max_e, 1);
        for (int e = 0; e <= max_e; ++e) {
            m[k] = e;
            self(self, k + 1, left - e * g.degree);
        }
        m[k] = 0;
    };
    if (n >= 0)
        rec(rec, 0, n);
    std::sort(out.begin(), out.end(), MonomialLess{&ring});
    return out;
}

bool RingMap::injective_in_degree(int n) const
{
    auto basis = monomials_of_degree(*source_, n);
    std::map<Monomial, std::size_t> rows;
    std::vector<la::SparseVector> columns;
    for (const auto& m : basis) {
        FpPoly img = (*this)(FpPoly::monomial(source_, m));
        la::SparseVector col;
        for (const auto& [tm, c] : img.terms()) {
            auto [it, inserted] = rows.try_emplace(tm, rows.size());
            col.emplace_back(it->second, c);
        }
        std::sort(col.begin(), col.end());
        columns.push_back(std::move(col));
    }
    auto mat = la::FpMatrix::from_columns(field(*source_), rows.size(), columns);
    return la::rank(mat) == basis.size();
}

void TotalOperation::validate() const
{
    ring->validate();
    const int p = ring->p;
    if (values.size() != ring->generators.size())
        throw InconsistentOperation("operation on " + ring->name + " needs one value per generator");
    for (std::size_t k = 0; k < values.size(); ++k) {
        const auto& g = ring->generators[k];
        const FpPoly& v = values[k];
        if (v.ring() != ring)
            throw InconsistentOperation("value on " + g.name + " does not lie in " + ring->name);
        for (int d : v.degrees())
            if (d < g.degree || d > p * g.degree)
                throw InconsistentOperation("value on " + g.name + " has a part of degree " + std::to_string(d) +
                                            " outside [" + std::to_string(g.degree) + ", " +
                                            std::to_string(p * g.degree) + "]");
        FpPoly top = v.homogeneous_part(p * g.degree);
        FpPoly expected = FpPoly::generator(ring, k).pow(static_cast<unsigned>(p));
        if (!(top == expected))
            throw InconsistentOperation("top part of the value on " + g.name + " is " + top.to_string() + ", not " +
                                        expected.to_string());
    }
    check_images(ring, ring, values, true);
}

const FpPoly& TotalOperation::value(const std::string& name) const
{
    return values.at(ring->index_of(name));
}

TotalOperation frobenius_operation(RingPtr ring)
{
    TotalOperation op{ring, {}};
    for (std::size_t k = 0; k < ring->generators.size(); ++k)
        op.values.push_back(FpPoly::generator(ring, k).pow(static_cast<unsigned>(ring->p)));
    return op;
}

FpPoly extend_total(const TotalOperation& op, const FpPoly& f)
{
    check_images(op.ring, op.ring, op.values, true);
    if (f.ring() != op.ring)
        throw std::invalid_argument("argument does not lie in " + op.ring->name);
    return substitute(f, op.values, op.ring);
}

FpPoly operation_component(const TotalOperation& op, const FpPoly& f, int i)
{
    if (!f.is_homogeneous())
        throw std::invalid_argument("operation components need a homogeneous argument");
    if (f.is_zero())
        return f;
    const int p = op.ring->p;
    int shift = p == 2 ? i : 2 * i * (p - 1);
    return extend_total(op, f).homogeneous_part(f.max_degree() + shift);
}

namespace {

FpPoly transport(const FpPoly& f, const RingPtr& target, const std::vector<std::size_t>& index_map)
{
    FpPoly r(target);
    for (const auto& [m, c] : f.terms()) {
        Monomial n(target->generators.size(), 0);
        for (std::size_t k = 0; k < m.size(); ++k)
            n[index_map[k]] = m[k];
        r.add_term(n, c);
    }
    return r;
}

}  // namespace

TotalOperation kunneth_tensor(const TotalOperation& a, const TotalOperation& b, const std::string& name)
{
    if (a.ring->p != b.ring->p)
        throw std::invalid_argument("tensor product of rings over different primes");
    GradedRingSpec spec{name.empty() ? a.ring->name + "_x_" + b.ring->name : name, a.ring->p, a.ring->generators};
    for (const auto& g : b.ring->generators) {
        if (a.ring->has(g.name))
            throw std::invalid_argument("generator name clash: " + g.name);
        spec.generators.push_back(g);
    }
    auto ring = make_ring(std::move(spec));
    std::vector<std::size_t> ia(a.ring->generators.size()), ib(b.ring->generators.size());
    for (std::size_t k = 0; k < ia.size(); ++k)
        ia[k] = k;
    for (std::size_t k = 0; k < ib.size(); ++k)
        ib[k] = ia.size() + k;
    TotalOperation op{ring, {}};
    for (const auto& v : a.values)
        op.values.push_back(transport(v, ring, ia));
    for (const auto& v : b.values)
        op.values.push_back(transport(v, ring, ib));
    return op;
}

TotalOperation rename(const TotalOperation& op, const std::map<std::string, std::string>& names,
                      const std::string& ring_name)
{
    GradedRingSpec spec = *op.ring;
    if (!ring_name.empty())
        spec.name = ring_name;
    for (auto& g : spec.generators)
        if (auto it = names.find(g.name); it != names.end())
            g.name = it->second;
    auto ring = make_ring(std::move(spec));
    std::vector<std::size_t> id(ring->generators.size());
    for (std::size_t k = 0; k < id.size(); ++k)
        id[k] = k;
    TotalOperation out{ring, {}};
    for (const auto& v : op.values)
        out.values.push_back(transport(v, ring, id));
    return out;
}

bool equivalent(const TotalOperation& a, const TotalOperation& b)
{
    const auto& ga = a.ring->generators;
    const auto& gb = b.ring->generators;
    if (a.ring->p != b.ring->p || ga.size() != gb.size())
        return false;
    std::vector<std::size_t> b_to_a(gb.size());
    for (std::size_t k = 0; k < gb.size(); ++k) {
        if (!a.ring->has(gb[k].name))
            return false;
        std::size_t j = a.ring->index_of(gb[k].name);
        if (ga[j].degree != gb[k].degree || ga[j].square_zero != gb[k].square_zero)
            return false;
        b_to_a[k] = j;
    }
    for (std::size_t k = 0; k < gb.size(); ++k)
        if (!(transport(b.values[k], a.ring, b_to_a) == a.values[b_to_a[k]]))
            return false;
    return true;
}

FpPoly random_poly(RingPtr ring, int max_degree, std::mt19937_64& rng, int max_terms)
{
    const std::size_t n = ring->generators.size();
    FpPoly f(ring);
    int terms = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_terms));
    for (int t = 0; t < terms; ++t) {
        Monomial m(n, 0);
        int total = static_cast<int>(rng() % static_cast<unsigned>(max_degree + 1));
        for (int s = 0; s < total && n > 0; ++s) {
            std::size_t k = rng() % n;
            if (!(ring->generators[k].square_zero && m[k] == 1))
                ++m[k];
        }
        f.add_term(m, 1 + static_cast<Residue>(rng() % static_cast<unsigned>(ring->p - 1)));
    }
    return f;
}

TotalOperation parse_ring_spec(const std::string& text)
{
    GradedRingSpec spec;
    std::vector<std::pair<std::string, std::string>> totals;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_ring = false;
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("ring spec line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word))
            continue;
        if (word == "ring") {
            std::string kw;
            if (!(ls >> spec.name >> kw >> spec.p) || kw != "prime")
                fail("expected 'ring NAME prime P'");
            have_ring = true;
        } else if (word == "gen") {
            Generator g;
            if (!(ls >> g.name >> g.degree))
                fail("expected 'gen NAME DEGREE [square-zero]'");
            std::string flag;
            if (ls >> flag) {
                if (flag != "square-zero")
                    fail("unknown flag " + flag);
                g.square_zero = true;
            }
            spec.generators.push_back(g);
        } else if (word == "total") {
            std::string name, eq;
            if (!(ls >> name >> eq) || eq != "=")
                fail("expected 'total NAME = POLYNOMIAL'");
            std::string rest;
            std::getline(ls, rest);
            totals.emplace_back(name, rest);
        } else {
            fail("unknown statement " + word);
        }
    }
    if (!have_ring)
        throw std::invalid_argument("ring spec has no 'ring' line");
    auto ring = make_ring(std::move(spec));
    TotalOperation op = frobenius_operation(ring);
    std::set<std::string> seen;
    for (const auto& [name, poly_text] : totals) {
        if (!ring->has(name))
            throw std::invalid_argument("ring spec: total for unknown generator " + name);
        if (!seen.insert(name).second)
            throw std::invalid_argument("ring spec: repeated total for " + name);
        op.values[ring->index_of(name)] = parse_poly(ring, poly_text);
    }
    op.validate();
    return op;
}

std::string format_ring_spec(const TotalOperation& op)
{
    std::ostringstream os;
    os << "ring " << op.ring->name << " prime " << op.ring->p << "\n";
    for (const auto& g : op.ring->generators)
        os << "gen " << g.name << " " << g.degree << (g.square_zero ? " square-zero" : "") << "\n";
    for (std::size_t k = 0; k < op.values.size(); ++k)
        os << "total " << op.ring->generators[k].name << " = " << op.values[k].to_string() << "\n";
    return os.str();
}

}  // namespace steenrod::poly
