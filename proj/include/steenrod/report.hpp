#pragma once

// Pass/fail records of identity checks, rendered as JSON or aligned text.

#include <string>
#include <vector>

namespace steenrod::verify {

struct Record {
    std::string relation;
    int degree = 0;
    bool passed = true;
    std::string witness;  // empty when passed
};

struct Report {
    std::string name;
    std::vector<Record> records;

    bool passed() const;
    std::size_t failures() const;
    /// {"name", "passed", "records": [{relation, degree, status, witness}]}.
    std::string to_json() const;
    std::string to_text() const;
};

}  // namespace steenrod::verify
