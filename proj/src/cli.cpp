#include "steenrod/cli.hpp"

#include "steenrod/orthogonal.hpp"
#include "steenrod/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iomanip>
#include <sstream>

namespace steenrod::cli {

namespace {

using nlohmann::ordered_json;
using ops::Operation;
using ops::SteenrodContext;

struct JobConfig {
    int prime = 2;
    int degree = 4;
    std::string group = "cyclic:2";
    std::string format = "text";
    std::string cache_dir;
    std::int64_t budget = 2'000'000;
};

class BadRequest : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool json_output(const JobConfig& cfg)
{
    return cfg.format == "json";
}

grp::GroupPtr load_group(const JobConfig& cfg)
{
    return std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::from_spec(cfg.group));
}

ops::ContextOptions options(const JobConfig& cfg)
{
    return {cfg.cache_dir, cfg.budget};
}

std::string label(int q, std::size_t k)
{
    return "H" + std::to_string(q) + "[" + std::to_string(k) + "]";
}

ordered_json class_json(const ops::CohomologyClass& x)
{
    ordered_json j = ordered_json::object();
    for (std::size_t k = 0; k < x.coords.size(); ++k)
        if (x.coords[k] != 0)
            j[label(x.degree, k)] = x.coords[k];
    return j;
}

std::string class_text(const ops::CohomologyClass& x)
{
    std::string s;
    for (std::size_t k = 0; k < x.coords.size(); ++k) {
        if (x.coords[k] == 0)
            continue;
        if (!s.empty())
            s += " + ";
        if (x.coords[k] != 1)
            s += std::to_string(x.coords[k]) + " ";
        s += label(x.degree, k);
    }
    return s.empty() ? "0" : s;
}

ordered_json matrix_json(const la::FpMatrix& m)
{
    ordered_json rows = ordered_json::array();
    for (const auto& row : m.to_dense())
        rows.push_back(row);
    return rows;
}

void matrix_text(std::ostream& out, const la::FpMatrix& m)
{
    if (m.rows() == 0 || m.cols() == 0) {
        out << "    (" << m.rows() << "x" << m.cols() << ")\n";
        return;
    }
    for (const auto& row : m.to_dense()) {
        out << "   ";
        for (auto v : row)
            out << " " << std::setw(2) << v;
        out << "\n";
    }
}

int cmd_cohomology(const JobConfig& cfg, std::ostream& out)
{
    SteenrodContext ctx(load_group(cfg), cfg.prime, cfg.degree, options(cfg));
    const int d = cfg.degree;
    std::vector<std::pair<int, std::size_t>> basis;
    for (int q = 0; q <= d; ++q)
        for (std::size_t k = 0; k < ctx.dim(q); ++k)
            basis.emplace_back(q, k);

    if (json_output(cfg)) {
        ordered_json j;
        j["group"] = cfg.group;
        j["prime"] = cfg.prime;
        j["degree_bound"] = d;
        j["degrees"] = ordered_json::array();
        for (int q = 0; q <= d; ++q)
            j["degrees"].push_back({{"n", q}, {"dim", ctx.dim(q)}});
        j["products"] = ordered_json::array();
        for (std::size_t a = 0; a < basis.size(); ++a)
            for (std::size_t b = a; b < basis.size(); ++b) {
                auto [qa, ka] = basis[a];
                auto [qb, kb] = basis[b];
                if (qa + qb > d)
                    continue;
                auto prod = ctx.cup(ctx.basis_class(qa, ka), ctx.basis_class(qb, kb));
                j["products"].push_back({{"i", label(qa, ka)}, {"j", label(qb, kb)}, {"result", class_json(prod)}});
            }
        out << j.dump(2) << "\n";
        return Pass;
    }
    out << "cohomology of B(" << cfg.group << ") with F_" << cfg.prime << " coefficients, degrees 0.." << d << "\n";
    out << "   n  dim\n";
    for (int q = 0; q <= d; ++q)
        out << std::setw(4) << q << std::setw(5) << ctx.dim(q) << "\n";
    out << "products\n";
    for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a; b < basis.size(); ++b) {
            auto [qa, ka] = basis[a];
            auto [qb, kb] = basis[b];
            if (qa + qb > d)
                continue;
            auto prod = ctx.cup(ctx.basis_class(qa, ka), ctx.basis_class(qb, kb));
            out << "  " << std::left << std::setw(8) << label(qa, ka) << " * " << std::setw(8) << label(qb, kb)
                << std::right << " = " << class_text(prod) << "\n";
        }
    return Pass;
}

struct OpRequest {
    Operation op;
    int s;
};

std::vector<OpRequest> requested_operations(const SteenrodContext& ctx, const std::string& filter)
{
    const int p = ctx.prime(), d = ctx.degree_bound();
    std::vector<OpRequest> ops;
    auto want = [&](const std::string& name) { return filter == "all" || filter == name; };
    if (p == 2) {
        if (filter != "all" && filter != "sq" && filter != "b")
            throw BadRequest("operation " + filter + " needs an odd prime");
        if (want("sq"))
            for (int s = -1; s <= d; ++s)
                ops.push_back({Operation::Sq, s});
    } else {
        if (filter == "sq")
            throw BadRequest("Sq needs p = 2");
        if (want("p"))
            for (int s = -1; 2 * s * (p - 1) <= d; ++s)
                ops.push_back({Operation::P, s});
        if (want("bp"))
            for (int s = -1; 2 * s * (p - 1) + 1 <= d; ++s)
                ops.push_back({Operation::BetaP, s});
    }
    if (want("b"))
        ops.push_back({Operation::Bockstein, 0});
    return ops;
}

int cmd_steenrod(const JobConfig& cfg, const std::string& filter, std::ostream& out)
{
    SteenrodContext ctx(load_group(cfg), cfg.prime, cfg.degree, options(cfg));
    bool negatives_zero = true;
    ordered_json list = ordered_json::array();
    std::ostringstream text;
    for (const auto& req : requested_operations(ctx, filter)) {
        const std::string name = ops::operation_name(req.op, req.s);
        for (int q = 0; q <= cfg.degree; ++q) {
            const int target = ops::operation_degree(req.op, req.s, q, cfg.prime);
            if (target < 0 || target > cfg.degree)
                continue;
            la::FpMatrix m = ops::operation_matrix(ctx, req.op, req.s, q);
            ordered_json entry{{"name", name}, {"source_degree", q}, {"target_degree", target}};
            entry["matrix"] = matrix_json(m);
            text << name << ": H^" << q << " -> H^" << target;
            if (req.s < 0 && req.op != Operation::Bockstein) {
                entry["asserted_zero"] = true;
                entry["zero"] = m.is_zero();
                negatives_zero = negatives_zero && m.is_zero();
                text << (m.is_zero() ? "  (zero, as required)" : "  (NONZERO negative operation)");
            }
            text << "\n";
            matrix_text(text, m);
            list.push_back(std::move(entry));
        }
    }
    if (json_output(cfg)) {
        ordered_json j;
        j["group"] = cfg.group;
        j["prime"] = cfg.prime;
        j["degree_bound"] = cfg.degree;
        j["negative_operations_zero"] = negatives_zero;
        j["operations"] = std::move(list);
        out << j.dump(2) << "\n";
    } else {
        out << "operations on H^*(B(" << cfg.group << "); F_" << cfg.prime << "), degrees 0.." << cfg.degree << "\n"
            << text.str();
    }
    return negatives_zero ? Pass : VerificationFailed;
}

int emit_reports(const JobConfig& cfg, const std::vector<verify::Report>& reports, std::ostream& out)
{
    bool ok = true;
    for (const auto& r : reports)
        ok = ok && r.passed();
    if (json_output(cfg)) {
        ordered_json j;
        j["passed"] = ok;
        j["reports"] = ordered_json::array();
        for (const auto& r : reports)
            j["reports"].push_back(ordered_json::parse(r.to_json()));
        out << j.dump(2) << "\n";
    } else {
        for (const auto& r : reports)
            out << r.to_text();
        out << (ok ? "all checks passed" : "some checks FAILED") << "\n";
    }
    return ok ? Pass : VerificationFailed;
}

std::vector<std::string> expand_all(const std::vector<std::string>& chosen, const std::vector<std::string>& all)
{
    if (chosen.empty() || std::find(chosen.begin(), chosen.end(), "all") != chosen.end())
        return all;
    return chosen;
}

int cmd_verify(const JobConfig& cfg, const std::vector<std::string>& which, int max_degree, std::ostream& out)
{
    auto checks = expand_all(which, {"cartan", "adem", "axioms", "naturality", "bockstein"});
    auto g = load_group(cfg);
    SteenrodContext ctx(g, cfg.prime, cfg.degree, options(cfg));
    std::vector<verify::Report> reports;
    for (const auto& c : checks) {
        if (c == "cartan") {
            reports.push_back(verify::verify_cartan(ctx, max_degree));
        } else if (c == "adem") {
            reports.push_back(verify::verify_adem(ctx));
        } else if (c == "axioms") {
            reports.push_back(verify::verify_axioms(ctx));
        } else if (c == "bockstein") {
            reports.push_back(verify::verify_bockstein(ctx, max_degree));
        } else if (c == "naturality") {
            auto gg = std::make_shared<const grp::FiniteGroup>(grp::FiniteGroup::direct_product(*g, *g));
            SteenrodContext sq(gg, cfg.prime, cfg.degree, options(cfg));
            auto diag = simp::induced_map(grp::diagonal(g, gg), ctx.space(), sq.space());
            reports.push_back(verify::verify_naturality(diag, ctx, sq, "diagonal"));
            for (int k = 0; k < 2; ++k) {
                auto pr = simp::induced_map(grp::projection(g, g, gg, k), sq.space(), ctx.space());
                reports.push_back(verify::verify_naturality(pr, sq, ctx, "projection " + std::to_string(k + 1)));
            }
        }
    }
    return emit_reports(cfg, reports, out);
}

verify::Report restriction_report(int r)
{
    auto iota = orth::restriction_iota(r);
    verify::Report report{"restriction to (O_2)^" + std::to_string(r), {}};
    for (int k = 1; k <= 2 * r; ++k)
        report.records.push_back({"iota*(u_" + std::to_string(k) + ") = " + iota.image(k).to_string(), k,
                                  iota.map.image(k - 1) == iota.image(k), ""});
    for (int n = 0; n <= 2 * (2 * r + 1); ++n) {
        bool inj = iota.map.injective_in_degree(n);
        report.records.push_back({"iota* injective in degree " + std::to_string(n), n, inj,
                                  inj ? "" : "rank deficit in degree " + std::to_string(n)});
    }
    return report;
}

int cmd_orthogonal(const JobConfig& cfg, const std::vector<std::string>& which, int r, int max_a, int vars,
                   std::ostream& out)
{
    if (r < 1)
        throw BadRequest("--r must be at least 1");
    auto checks = expand_all(which, {"wu", "identities", "restriction", "kunneth", "so", "trivial"});
    std::vector<verify::Report> reports;
    for (const auto& c : checks) {
        if (c == "wu") {
            reports.push_back(orth::check_wu(r));
        } else if (c == "identities") {
            for (int a = 0; a <= max_a; ++a)
                for (int d = 0; d <= a; ++d)
                    reports.push_back(orth::check_orth_identities(a, d, r));
        } else if (c == "restriction") {
            reports.push_back(restriction_report(r));
        } else if (c == "kunneth") {
            reports.push_back(orth::check_kunneth(r));
        } else if (c == "so") {
            reports.push_back(orth::check_so_variants(r));
        } else if (c == "trivial") {
            reports.push_back(orth::reductive_trivial_check(cfg.prime, vars));
        }
    }
    return emit_reports(cfg, reports, out);
}

int cmd_rewrite(const JobConfig& cfg, const std::string& word, std::ostream& out)
{
    auto w = alg::parse_word(word, cfg.prime);
    auto normal = alg::rewrite_admissible(alg::OpPolynomial::word(cfg.prime, w));
    if (json_output(cfg)) {
        ordered_json j{{"word", word}, {"prime", cfg.prime}, {"result", alg::to_string(normal)}};
        out << j.dump(2) << "\n";
    } else {
        out << alg::to_string(normal) << "\n";
    }
    return Pass;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    JobConfig cfg;
    if (const char* env = std::getenv("STEENROD_CACHE_DIR"))
        cfg.cache_dir = env;

    CLI::App app{"Steenrod operations on the mod-p cohomology of finite groups, and symbolic checks."};
    app.name("steenrod");
    app.fallthrough();
    app.require_subcommand(1);
    auto prime_ok = CLI::Validator(
        [](std::string& s) {
            try {
                long v = std::stol(s);
                return v >= 2 && la::is_prime(static_cast<std::uint64_t>(v)) ? std::string() : s + " is not prime";
            } catch (const std::exception&) {
                return s + " is not a number";
            }
        },
        "PRIME");
    app.add_option("--prime", cfg.prime, "Coefficient prime")->check(prime_ok);
    app.add_option("--degree", cfg.degree, "Degree bound D")->check(CLI::NonNegativeNumber);
    app.add_option("--group", cfg.group, "cyclic:n, klein, dihedral:n, symmetric:n, trivial or @table-file");
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--cache", cfg.cache_dir, "Diagonal cache directory (default: $STEENROD_CACHE_DIR)");
    app.add_option("--budget", cfg.budget, "Maximum number of nondegenerate simplices")->check(CLI::PositiveNumber);

    auto* cohomology = app.add_subcommand("cohomology", "Dimensions and cup products");

    std::string op_filter = "all";
    auto* steenrod = app.add_subcommand("steenrod", "Operation matrices within the degree bound");
    steenrod->add_option("--op", op_filter, "Operation family")->check(CLI::IsMember({"all", "sq", "p", "bp", "b"}));

    std::vector<std::string> verify_which;
    int max_degree = -1;
    auto* verify_cmd = app.add_subcommand("verify", "Identity checks on operation matrices");
    verify_cmd->add_option("checks", verify_which, "cartan, adem, axioms, naturality, bockstein or all")
        ->check(CLI::IsMember({"all", "cartan", "adem", "axioms", "naturality", "bockstein"}));
    verify_cmd->add_option("--max-degree", max_degree, "Bound on |x| + |y| for Cartan and Bockstein pairs");

    std::vector<std::string> orth_which;
    int r = 2, max_a = 2, vars = 3;
    auto* orthogonal = app.add_subcommand("orthogonal", "Symbolic checks for orthogonal groups");
    orthogonal->add_option("checks", orth_which, "wu, identities, restriction, kunneth, so, trivial or all")
        ->check(CLI::IsMember({"all", "wu", "identities", "restriction", "kunneth", "so", "trivial"}));
    orthogonal->add_option("--r", r, "Rank r of O_{2r}");
    orthogonal->add_option("--max-a", max_a, "Largest a for the restriction identities");
    orthogonal->add_option("--vars", vars, "Number of generators for the triviality check");

    std::string word;
    auto* rewrite = app.add_subcommand("rewrite", "Admissible form of an operation word");
    rewrite->add_option("word", word, "Letters SqN, PN, bPN, b separated by spaces")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? Pass : UsageError;
    }

    try {
        if (*cohomology)
            return cmd_cohomology(cfg, out);
        if (*steenrod)
            return cmd_steenrod(cfg, op_filter, out);
        if (*verify_cmd)
            return cmd_verify(cfg, verify_which, max_degree, out);
        if (*orthogonal)
            return cmd_orthogonal(cfg, orth_which, r, max_a, vars, out);
        if (*rewrite)
            return cmd_rewrite(cfg, word, out);
    } catch (const ops::BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "; rerun with --budget " << e.needed << "\n";
        if (json_output(cfg))
            out << ordered_json{{"error", "budget"}, {"needed", e.needed}, {"budget", e.budget}}.dump(2) << "\n";
        return BudgetExceeded;
    } catch (const alg::ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return UsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    }
    return UsageError;
}

}  // namespace steenrod::cli
