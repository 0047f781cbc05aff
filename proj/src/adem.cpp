#include "steenrod/adem.hpp"

#include <algorithm>
#include <cctype>

namespace steenrod::alg {

Residue mod_binomial(long n, long k, int p)
{
    if (k < 0)
        return 0;
    if (n < 0) {
        Residue c = mod_binomial(k - n - 1, k, p);
        return (k % 2 == 0 || c == 0) ? c : Residue(p) - c;
    }
    if (k > n)
        return 0;
    // Lucas: product of digit binomials.
    Residue result = 1;
    while (n > 0 || k > 0) {
        long nd = n % p, kd = k % p;
        if (kd > nd)
            return 0;
        long c = 1;
        for (long j = 0; j < kd; ++j)
            c = c * (nd - j) / (j + 1);
        result = static_cast<Residue>((result * (c % p)) % p);
        n /= p;
        k /= p;
    }
    return result;
}

int degree(const Letter& l, int p)
{
    return p == 2 ? l.power : l.beta + 2 * l.power * (p - 1);
}

int degree(const OpWord& w, int p)
{
    int d = 0;
    for (const auto& l : w)
        d += degree(l, p);
    return d;
}

bool admissible(const OpWord& w, int p)
{
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
        if (p == 2 ? w[k].power < 2 * w[k + 1].power : w[k].power < p * w[k + 1].power + w[k + 1].beta)
            return false;
    }
    return true;
}

OpPolynomial::OpPolynomial(int p) : p_(p)
{
    if (!la::is_prime(p))
        throw std::invalid_argument("operation polynomials need a prime");
}

OpPolynomial OpPolynomial::word(int p, OpWord w, Residue c)
{
    OpPolynomial f(p);
    f.add(w, c);
    return f;
}

void OpPolynomial::add(const OpWord& w, Residue c)
{
    c %= p_;
    if (c == 0)
        return;
    OpWord n;
    for (const auto& l : w) {
        if (l.power < 0 || l.beta < 0 || l.beta > 1)
            return;
        if (l.power == 0 && l.beta == 0)
            continue;
        n.push_back(l);
    }
    auto& slot = terms_[n];
    slot = (slot + c) % p_;
    if (slot == 0)
        terms_.erase(n);
}

OpPolynomial& OpPolynomial::operator+=(const OpPolynomial& other)
{
    for (const auto& [w, c] : other.terms_)
        add(w, c);
    return *this;
}

OpPolynomial operator*(const OpPolynomial& a, const OpPolynomial& b)
{
    OpPolynomial out(a.p_);
    for (const auto& [wa, ca] : a.terms_)
        for (const auto& [wb, cb] : b.terms_) {
            OpWord w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            out.add(w, static_cast<Residue>((std::uint64_t(ca) * cb) % a.p_));
        }
    return out;
}

std::string to_string(const OpWord& w, int p)
{
    if (w.empty())
        return "1";
    std::string s;
    for (const auto& l : w) {
        if (!s.empty())
            s += ' ';
        if (p == 2)
            s += "Sq" + std::to_string(l.power);
        else if (l.power == 0)
            s += "b";
        else
            s += (l.beta ? "bP" : "P") + std::to_string(l.power);
    }
    return s;
}

std::string to_string(const OpPolynomial& f)
{
    if (f.is_zero())
        return "0";
    std::vector<std::pair<OpWord, Residue>> terms(f.terms().begin(), f.terms().end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(b.first.begin(), b.first.end(), a.first.begin(), a.first.end(),
                                            [](const Letter& x, const Letter& y) {
                                                return std::pair(x.power, x.beta) < std::pair(y.power, y.beta);
                                            });
    });
    std::string s;
    for (const auto& [w, c] : terms) {
        if (!s.empty())
            s += " + ";
        if (c != 1)
            s += std::to_string(c) + " ";
        s += to_string(w, f.prime());
    }
    return s;
}

OpPolynomial adem_expand(const Letter& x, const Letter& y, int p)
{
    OpPolynomial out(p);
    const long a = x.power, b = y.power;
    auto sign = [p](long e) { return e % 2 == 0 ? Residue(1) : Residue(p - 1); };
    auto mul = [p](Residue u, Residue v) { return static_cast<Residue>((std::uint64_t(u) * v) % p); };
    if (p == 2) {
        if (x.beta || y.beta)
            throw std::invalid_argument("Adem: no Bockstein letters at p = 2");
        if (a >= 2 * b)
            throw std::invalid_argument("Adem: Sq" + std::to_string(a) + " Sq" + std::to_string(b) + " is admissible");
        for (long c = 0; 2 * c <= a; ++c)
            out.add({{0, int(a + b - c)}, {0, int(c)}}, mod_binomial(b - c - 1, a - 2 * c, 2));
        return out;
    }
    if (a >= p * b + y.beta)
        throw std::invalid_argument("Adem: " + to_string(OpWord{x, y}, p) + " is admissible");
    if (y.beta == 0) {
        // P^a P^b, a < pb.
        for (long i = 0; p * i <= a; ++i)
            out.add({{x.beta, int(a + b - i)}, {0, int(i)}},
                    mul(sign(a + i), mod_binomial((p - 1) * (b - i) - 1, a - p * i, p)));
        return out;
    }
    // P^a beta P^b, a <= pb. A leading beta annihilates the beta P^{a+b-i} P^i terms.
    if (x.beta == 0)
        for (long i = 0; p * i <= a; ++i)
            out.add({{1, int(a + b - i)}, {0, int(i)}}, mul(sign(a + i), mod_binomial((p - 1) * (b - i), a - p * i, p)));
    for (long i = 0; p * i <= a - 1; ++i)
        out.add({{x.beta, int(a + b - i)}, {1, int(i)}},
                mul(sign(a + i - 1), mod_binomial((p - 1) * (b - i) - 1, a - p * i - 1, p)));
    return out;
}

OpPolynomial rewrite_admissible(const OpPolynomial& f, std::size_t step_budget, std::vector<AppliedRelation>* log)
{
    const int p = f.prime();
    OpPolynomial done(p);
    std::map<OpWord, Residue> pending(f.terms().begin(), f.terms().end());
    std::size_t steps = 0;
    while (!pending.empty()) {
        auto it = pending.begin();
        OpWord w = it->first;
        Residue c = it->second;
        pending.erase(it);
        std::size_t k = 0;
        while (k + 1 < w.size() && admissible(OpWord{w[k], w[k + 1]}, p))
            ++k;
        if (k + 1 >= w.size()) {
            done.add(w, c);
            continue;
        }
        if (++steps > step_budget)
            throw RewriteBudgetExceeded("rewrite exceeded " + std::to_string(step_budget) + " steps");
        auto rhs = adem_expand(w[k], w[k + 1], p);
        if (log)
            log->push_back({w[k], w[k + 1], rhs});
        OpPolynomial prefix = OpPolynomial::word(p, OpWord(w.begin(), w.begin() + k));
        OpPolynomial suffix = OpPolynomial::word(p, OpWord(w.begin() + k + 2, w.end()));
        OpPolynomial expanded = prefix * rhs * suffix;
        for (const auto& [v, cv] : expanded.terms()) {
            auto& slot = pending[v];
            slot = static_cast<Residue>((slot + std::uint64_t(cv) * c) % p);
            if (slot == 0)
                pending.erase(v);
        }
    }
    return done;
}

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::invalid_argument(what + " at position " + std::to_string(pos)), position(pos)
{
}

OpWord parse_word(const std::string& text, int p)
{
    if (!la::is_prime(p))
        throw std::invalid_argument("parse_word: prime expected");
    OpWord w;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        std::size_t end = i;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
            ++end;
        std::string tok = text.substr(start, end - start);
        auto number = [&](std::size_t from) {
            if (from >= tok.size())
                throw ParseError("missing exponent in '" + tok + "'", start + from);
            int v = 0;
            for (std::size_t j = from; j < tok.size(); ++j) {
                if (!std::isdigit(static_cast<unsigned char>(tok[j])))
                    throw ParseError("unexpected character '" + std::string(1, tok[j]) + "'", start + j);
                v = v * 10 + (tok[j] - '0');
                if (v > 100000)
                    throw ParseError("exponent too large", start + j);
            }
            return v;
        };
        if (tok.rfind("Sq", 0) == 0) {
            if (p != 2)
                throw ParseError("Sq letters require p = 2", start);
            w.push_back({0, number(2)});
        } else if (tok.rfind("bP", 0) == 0) {
            if (p == 2)
                throw ParseError("bP letters require an odd prime", start);
            w.push_back({1, number(2)});
        } else if (tok.rfind("P", 0) == 0) {
            if (p == 2)
                throw ParseError("P letters require an odd prime", start);
            w.push_back({0, number(1)});
        } else if (tok == "b") {
            w.push_back(p == 2 ? Letter{0, 1} : Letter{1, 0});
        } else {
            throw ParseError("unknown letter '" + tok + "'", start);
        }
        i = end;
    }
    return w;
}

}  // namespace steenrod::alg
