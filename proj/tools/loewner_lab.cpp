// loewner-lab: runs one scenario config and writes a JSON report.
//
//   loewner-lab <operation> --config <path> [--force] [--out <path>]
//               [--seed <u64>] [--csv <path>]
//
// Exit codes: 0 pass, 1 fail, 2 error (schema, precondition, numerical).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "loewner/scenario.hpp"

namespace sc = loewner::scenario;

namespace {

struct Args {
    std::string config;
    std::string out;
    std::string csv;
    bool force = false;
    std::optional<std::uint64_t> seed;
};

int run(const std::string& op, const Args& a) {
    sc::RunOptions opt;
    opt.force = a.force;
    opt.seed = a.seed;
    opt.operation = op;
    try {
        const sc::Json cfg = sc::load_config(a.config);
        if (cfg.contains("operation") && cfg["operation"].is_string() &&
            cfg["operation"].get<std::string>() != op) {
            std::cerr << "warning: config names operation '" << cfg["operation"].get<std::string>()
                      << "'; running '" << op << "'\n";
        }
        const sc::Report rep = sc::run_scenario(cfg, opt);
        if (!a.out.empty()) {
            sc::emit_report(rep, a.out);
        } else {
            std::cout << rep.json.dump(2) << '\n';
        }
        if (!a.csv.empty()) sc::emit_csv(rep, a.csv);
        std::cerr << sc::summary(rep) << '\n';
        return rep.exit_code;
    } catch (const sc::SchemaError& e) {
        std::cerr << "schema error at " << e.what() << '\n';
        return 2;
    } catch (const loewner::Error& e) {
        std::cerr << e.kind() << " error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sampled certificates for Loewner chains on the unit ball"};
    app.set_version_flag("--version", std::string(sc::kToolName) + " " + sc::kToolVersion);
    app.require_subcommand(1);

    Args args;
    std::uint64_t seed = 0;
    std::string chosen;
    for (const auto& name : sc::operations()) {
        auto* sub = app.add_subcommand(name, "run the '" + name + "' operation");
        sub->add_option("--config", args.config, "scenario config (.json or .toml)")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_flag("--force", args.force, "proceed past failed preconditions (with warnings)");
        sub->add_option("--out", args.out, "write the JSON report here instead of stdout");
        sub->add_option("--csv", args.csv, "write per-sample margins as CSV");
        sub->add_option("--seed", seed, "override the sampling seed");
        sub->callback([&, name, sub] {
            chosen = name;
            if (sub->count("--seed") > 0) args.seed = seed;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    return run(chosen, args);
}
