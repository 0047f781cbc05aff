#include "doctest.h"

#include "steenrod/cli.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace steenrod;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "steenrod");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args, int expected_code = 0)
{
    args.push_back("--format");
    args.push_back("json");
    Run r = run(args);
    CAPTURE(r.err);
    CHECK(r.code == expected_code);
    return nlohmann::json::parse(r.out);
}

fs::path temp_dir()
{
    std::random_device rd;
    fs::path dir = fs::temp_directory_path() / ("steenrod_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cohomology command")
{
    auto j = run_json({"cohomology", "--group", "cyclic:2", "--degree", "5"});
    std::vector<int> dims;
    for (const auto& d : j["degrees"])
        dims.push_back(d["dim"]);
    CHECK(dims == std::vector<int>{1, 1, 1, 1, 1, 1});
    // t^a * t^b = t^{a+b} for every pair with a + b <= 5.
    int products = 0;
    for (const auto& p : j["products"]) {
        ++products;
        int a = std::stoi(p["i"].get<std::string>().substr(1)), b = std::stoi(p["j"].get<std::string>().substr(1));
        CHECK(p["result"] == nlohmann::json{{"H" + std::to_string(a + b) + "[0]", 1}});
    }
    CHECK(products == 12);

    auto k = run_json({"cohomology", "--group", "klein", "--degree", "4"});
    dims.clear();
    for (const auto& d : k["degrees"])
        dims.push_back(d["dim"]);
    CHECK(dims == std::vector<int>{1, 2, 3, 4, 5});

    auto t = run_json({"cohomology", "--group", "trivial", "--degree", "3"});
    dims.clear();
    for (const auto& d : t["degrees"])
        dims.push_back(d["dim"]);
    CHECK(dims == std::vector<int>{1, 0, 0, 0});

    Run text = run({"cohomology", "--group", "cyclic:2", "--degree", "2"});
    CHECK(text.code == 0);
    CHECK(text.out.find("H1[0]    * H1[0]    = H2[0]") != std::string::npos);
}

TEST_CASE("steenrod command")
{
    auto j = run_json({"steenrod", "--group", "cyclic:2", "--degree", "4"});
    CHECK(j["negative_operations_zero"] == true);
    bool saw_sq1 = false;
    for (const auto& o : j["operations"]) {
        if (o["name"] == "Sq1" && o["source_degree"] == 1) {
            CHECK(o["matrix"] == nlohmann::json::array({nlohmann::json::array({1})}));
            saw_sq1 = true;
        }
        if (o["name"] == "Sq0")
            CHECK(o["matrix"] == nlohmann::json::array({nlohmann::json::array({1})}));
        if (o["name"] == "Sq-1")
            CHECK(o["zero"] == true);
    }
    CHECK(saw_sq1);

    auto p3 = run_json({"steenrod", "--group", "cyclic:3", "--prime", "3", "--degree", "4", "--op", "p"});
    for (const auto& o : p3["operations"]) {
        int s = std::stoi(o["name"].get<std::string>().substr(1));
        int q = o["source_degree"];
        if (2 * s > q)
            for (const auto& row : o["matrix"])
                for (const auto& v : row)
                    CHECK(v == 0);
    }
    CHECK(run({"steenrod", "--group", "cyclic:2", "--op", "p"}).code == cli::UsageError);
    CHECK(run({"steenrod", "--group", "cyclic:3", "--prime", "3", "--op", "sq"}).code == cli::UsageError);
}

TEST_CASE("verify command")
{
    auto adem = run_json({"verify", "adem", "--group", "klein", "--degree", "6"});
    CHECK(adem["passed"] == true);
    REQUIRE(adem["reports"].size() == 1);
    CHECK(adem["reports"][0]["name"] == "adem");
    for (const auto& rec : adem["reports"][0]["records"]) {
        CHECK(rec.contains("relation"));
        CHECK(rec.contains("degree"));
        CHECK(rec["status"] == "pass");
        CHECK(rec.contains("witness"));
    }
    CHECK(run_json({"verify", "bockstein", "--group", "cyclic:2", "--degree", "8"})["passed"] == true);
    CHECK(run_json({"verify", "axioms", "--group", "cyclic:3", "--prime", "3", "--degree", "6"})["passed"] == true);
    auto all = run_json({"verify", "--group", "cyclic:2", "--degree", "5"});
    CHECK(all["passed"] == true);
    CHECK(all["reports"].size() == 7);
    CHECK(run({"verify", "frobnicate"}).code == cli::UsageError);
}

TEST_CASE("orthogonal command")
{
    auto wu = run_json({"orthogonal", "wu", "--r", "2"});
    CHECK(wu["passed"] == true);
    auto ids = run_json({"orthogonal", "identities", "--r", "3", "--max-a", "2"});
    CHECK(ids["passed"] == true);
    CHECK(ids["reports"].size() == 6);
    auto k = run_json({"orthogonal", "kunneth", "--r", "2"});
    CHECK(k["passed"] == true);
    CHECK(k["reports"][0]["name"] == "kunneth O_5");
    CHECK(run_json({"orthogonal", "--r", "2"})["passed"] == true);
    CHECK(run_json({"orthogonal", "trivial", "--prime", "3", "--vars", "2"})["passed"] == true);
    CHECK(run({"orthogonal", "--r", "0"}).code == cli::UsageError);
}

TEST_CASE("rewrite command")
{
    auto text = [](const std::string& w) { return run({"rewrite", w}).out; };
    CHECK(text("Sq2 Sq2") == "Sq3 Sq1\n");
    CHECK(text("Sq1 Sq1") == "0\n");
    CHECK(text("Sq4") == "Sq4\n");
    CHECK(run({"rewrite", "--prime", "3", "P1 P1"}).out == "2 P2\n");
    auto j = run_json({"rewrite", "Sq2 Sq3"});
    CHECK(j["result"] == "Sq5 + Sq4 Sq1");
    Run bad = run({"rewrite", "Sq2 Sqx"});
    CHECK(bad.code == cli::UsageError);
    CHECK(bad.err.find("position 6") != std::string::npos);
}

TEST_CASE("usage errors, budgets and table files")
{
    CHECK(run({}).code == cli::UsageError);
    CHECK(run({"--help"}).code == cli::Pass);
    CHECK(run({"cohomology", "--prime", "4"}).code == cli::UsageError);
    CHECK(run({"cohomology", "--degree", "-1"}).code == cli::UsageError);
    CHECK(run({"cohomology", "--budget", "0"}).code == cli::UsageError);
    CHECK(run({"cohomology", "--format", "xml"}).code == cli::UsageError);
    CHECK(run({"cohomology", "--group", "nope"}).code == cli::UsageError);

    Run budget = run({"cohomology", "--group", "symmetric:3", "--degree", "6", "--budget", "100"});
    CHECK(budget.code == cli::BudgetExceeded);
    CHECK(budget.err.find("--budget") != std::string::npos);
    auto bj = run_json({"cohomology", "--group", "symmetric:3", "--degree", "6", "--budget", "100"}, cli::BudgetExceeded);
    CHECK(bj["error"] == "budget");
    CHECK(bj["needed"].get<long long>() > 100);

    fs::path dir = temp_dir();
    {
        std::ofstream(dir / "z2.txt") << "e a\ne a\na e\n";
        std::ofstream(dir / "bad.txt") << "e a\ne a\na a\n";
    }
    auto z2 = run_json({"cohomology", "--group", "@" + (dir / "z2.txt").string(), "--degree", "3"});
    CHECK(z2["degrees"].size() == 4);
    CHECK(z2["degrees"][3]["dim"] == 1);
    CHECK(run({"cohomology", "--group", "@" + (dir / "bad.txt").string()}).code == cli::UsageError);
    CHECK(run({"cohomology", "--group", "@" + (dir / "missing.txt").string()}).code == cli::UsageError);
    fs::remove_all(dir);
}

TEST_CASE("reports are reproducible and independent of the cache")
{
    fs::path dir = temp_dir();
    std::vector<std::string> args{"steenrod", "--group", "klein", "--degree", "5", "--format", "json"};
    Run plain = run(args);
    auto cached_args = args;
    cached_args.insert(cached_args.end(), {"--cache", dir.string()});
    Run miss = run(cached_args);
    CHECK(!fs::is_empty(dir));
    Run hit = run(cached_args);
    CHECK(plain.code == 0);
    CHECK(plain.out == run(args).out);
    CHECK(miss.out == plain.out);
    CHECK(hit.out == plain.out);
    std::vector<std::string> v{"verify", "cartan", "adem", "axioms", "bockstein", "--group", "cyclic:3", "--prime", "3", "--degree", "5", "--format", "json"};
    CHECK(run(v).out == run(v).out);
    fs::remove_all(dir);
}
