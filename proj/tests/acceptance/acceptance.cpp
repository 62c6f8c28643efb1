// Runs acceptance criteria and prints one pass/fail line per criterion.

#include <iostream>

#include "CLI11.hpp"

#include "criteria.hpp"
#include "discenv/error.hpp"

int main(int argc, char** argv) {
    using namespace discenv::cli;
    CLI::App app{"Acceptance criteria"};
    std::vector<std::string> ids;
    std::string dir = default_criteria_dir().string(), out;
    int threads = 0;
    app.add_option("ids", ids, "criterion ids (default: all)");
    app.add_option("--scenarios", dir, "directory of criterion files");
    app.add_option("--threads", threads, "worker threads (0: all cores)");
    app.add_option("--out", out, "directory for JSON reports");
    CLI11_PARSE(app, argc, argv);
    if (ids.empty()) ids = criterion_ids();
    bool all = true;
    for (const auto& id : ids) {
        try {
            const CriterionResult r = run_criterion(id, dir, threads);
            std::cout << r.line() << std::endl;
            if (!r.pass) std::cout << dump(r.details["checks"]);
            if (!out.empty()) {
                std::filesystem::create_directories(out);
                write_text(std::filesystem::path(out) / (id + ".report.json"), dump(r.to_json()));
            }
            all = all && r.pass;
        } catch (const discenv::Error& e) {
            std::cout << id << " FAIL error: " << e.what() << std::endl;
            all = false;
        }
    }
    return all ? 0 : 1;
}
