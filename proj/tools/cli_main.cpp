#include "cli_main.hpp"

#include <cstdint>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "criteria.hpp"
#include "discenv/error.hpp"
#include "scenario.hpp"

namespace discenv::cli {
namespace {

constexpr int kExitCriterion = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

int report_error(const std::string& kind, const std::string& field, const std::string& message,
                 const std::optional<std::filesystem::path>& summary_file) {
    const Json e = error_json(kind, field, message);
    std::cout << dump(e);
    if (summary_file) {
        try {
            std::filesystem::create_directories(summary_file->parent_path());
            write_text(*summary_file, dump(e));
        } catch (const std::exception&) {
        }
    }
    return kind == "validation" ? kExitValidation : kExitNumeric;
}

int run_command(const std::string& command, const std::string& scenario_file, std::optional<std::uint64_t> seed,
                int threads, const std::filesystem::path& out) {
    std::optional<std::filesystem::path> summary_file = out / (command + ".summary.json");
    try {
        Scenario s = load_scenario(scenario_file);
        summary_file = out / (s.name + ".summary.json");
        if (s.command != command)
            throw ValidationError("command", "scenario is for '" + s.command + "', not '" + command + "'");
        if (seed) s.seed = *seed;
        const RunResult r = run_scenario(s, {s.seed, threads});
        write_result(out, s.name, r);
        std::cout << dump({{"status", "ok"}, {"summary", summary_file->string()}});
        return 0;
    } catch (const ValidationError& e) {
        return report_error("validation", e.field(), e.what(), summary_file);
    } catch (const NumericError& e) {
        return report_error("numeric", "", e.what(), summary_file);
    } catch (const std::exception& e) {
        return report_error("numeric", "", e.what(), summary_file);
    }
}

int run_reproduce(const std::string& id, const std::string& where, int threads, const std::string& out) {
    try {
        if (!is_criterion_id(id)) throw ValidationError("criterion", "unknown criterion id '" + id + "'");
        const CriterionResult r = run_criterion(id, where.empty() ? default_criteria_dir() : std::filesystem::path(where), threads);
        std::cout << r.line() << "\n";
        if (!out.empty()) {
            std::filesystem::create_directories(out);
            write_text(std::filesystem::path(out) / (id + ".report.json"), dump(r.to_json()));
        }
        return r.pass ? 0 : kExitCriterion;
    } catch (const ValidationError& e) {
        return report_error("validation", e.field(), e.what(), std::nullopt);
    } catch (const std::exception& e) {
        return report_error("numeric", "", e.what(), std::nullopt);
    }
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"Disc envelope computations"};
    app.require_subcommand(1);
    std::string scenario, out = ".";
    std::uint64_t seed = 0;
    int threads = 0;
    std::string criterion;

    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--seed", seed, "override the scenario seed");
        sc->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
        sc->add_option("--out", out, "output directory");
    };
    std::vector<CLI::App*> commands;
    for (const auto& name : command_names()) {
        auto* sc = app.add_subcommand(name, "run a '" + name + "' scenario");
        sc->add_option("--scenario", scenario, "scenario JSON file")->required();
        add_common(sc);
        commands.push_back(sc);
    }
    auto* rep = app.add_subcommand("reproduce", "run the pinned scenario of an acceptance criterion");
    rep->add_option("criterion", criterion, "criterion id (A1 ... A10)")->required();
    rep->add_option("--scenario", scenario, "criterion file or directory of criterion files");
    add_common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << dump(error_json("validation", "arguments", e.what()));
        return kExitValidation;
    }
    if (rep->parsed()) return run_reproduce(criterion, scenario, threads, out == "." ? "" : out);
    for (auto* sc : commands) {
        if (!sc->parsed()) continue;
        const bool seeded = sc->count("--seed") > 0;
        return run_command(sc->get_name(), scenario, seeded ? std::optional<std::uint64_t>(seed) : std::nullopt, threads,
                           out);
    }
    return kExitValidation;
}

} // namespace discenv::cli
