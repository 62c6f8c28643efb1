#pragma once
// Scenario documents: validation and execution of the CLI commands.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "discenv/json_io.hpp"

namespace discenv::cli {

/// green | functional | envelope | chain | siciak | siciak-variety | counterexample | lemma1
bool is_command(const std::string& s);
const std::vector<std::string>& command_names();

/// {"schema_version": 1, "command", "payload", "seed"?, "name"?}
struct Scenario {
    std::string command;
    Json payload = Json::object();
    std::uint64_t seed = 0;
    std::string name;  ///< artifact file prefix; defaults to the command
};

Scenario parse_scenario(const Json& j, const std::string& path = "");
/// Reads and validates a scenario file (ValidationError on parse failures).
Scenario load_scenario(const std::filesystem::path& file);
/// Parses JSON text; ValidationError("<file>", ...) on syntax errors.
Json read_json_file(const std::filesystem::path& file);

struct RunContext {
    std::uint64_t seed = 0;
    int threads = 0;
};

struct Artifact {
    std::string file;
    std::string content;
};

struct RunResult {
    Json summary;
    std::vector<Artifact> artifacts;
};

/// Validates the whole payload before computing anything, then runs it.
/// Throws ValidationError or NumericError.
RunResult run_scenario(const Scenario& s, const RunContext& ctx);

/// Writes <name>.summary.json and every artifact (already prefixed with <name>.) into dir.
void write_result(const std::filesystem::path& dir, const std::string& name, const RunResult& r);
void write_text(const std::filesystem::path& file, const std::string& text);

/// {"schema_version", "status": "error", "error": {"kind", "field", "message"}}
Json error_json(const std::string& kind, const std::string& field, const std::string& message);

/// Stable serialization used for every JSON output.
std::string dump(const Json& j);

} // namespace discenv::cli
