#pragma once
// Acceptance criteria: each criterion file pins a set of scenarios plus the
// tolerances its verdict is checked against.

#include <filesystem>
#include <string>
#include <vector>

#include "scenario.hpp"

namespace discenv::cli {

const std::vector<std::string>& criterion_ids();
bool is_criterion_id(const std::string& id);

/// Directory of the shipped criterion files.
std::filesystem::path default_criteria_dir();
/// <dir>/<id>.json when `where` is a directory, else `where` itself.
std::filesystem::path criterion_file(const std::string& id, const std::filesystem::path& where);

struct CriterionResult {
    std::string id;
    bool pass = false;
    double seconds = 0.0;
    std::string message;
    Json details = Json::object();

    Json to_json() const;
    /// "<id> PASS|FAIL <seconds>s <message>"
    std::string line() const;
};

/// {"schema_version", "criterion", "description", "seed", "runs": {name: scenario},
///  "tolerances": {...}, "max_seconds", "extra"?}
struct CriterionSpec {
    std::string id;
    std::string description;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, Scenario>> runs;
    Json tolerances = Json::object();
    double max_seconds = 0.0;
    Json extra = Json::object();
};

CriterionSpec parse_criterion(const Json& j, const std::string& expected_id);

/// Runs every scenario of the criterion file and checks the verdict.
/// Throws ValidationError for malformed files; numeric failures are reported
/// as a failed criterion.
CriterionResult run_criterion(const std::string& id, const std::filesystem::path& where, int threads);

} // namespace discenv::cli
