#include "steenrod/report.hpp"

#include "json.hpp"
#include <sstream>

namespace steenrod::verify {

bool Report::passed() const
{
    return failures() == 0;
}

std::size_t Report::failures() const
{
    std::size_t n = 0;
    for (const auto& r : records)
        n += r.passed ? 0 : 1;
    return n;
}

std::string Report::to_json() const
{
    nlohmann::ordered_json j;
    j["name"] = name;
    j["passed"] = passed();
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records) {
        nlohmann::ordered_json rec;
        rec["relation"] = r.relation;
        rec["degree"] = r.degree;
        rec["status"] = r.passed ? "pass" : "fail";
        rec["witness"] = r.witness;
        j["records"].push_back(rec);
    }
    return j.dump(2);
}

std::string Report::to_text() const
{
    std::ostringstream os;
    os << name << ": " << (passed() ? "pass" : "FAIL") << " (" << records.size() - failures() << "/" << records.size()
       << " instances)\n";
    for (const auto& r : records)
        if (!r.passed)
            os << "  fail  " << r.relation << "  degree " << r.degree << "  " << r.witness << "\n";
    return os.str();
}

}  // namespace steenrod::verify
