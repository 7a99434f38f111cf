#include "CLI11.hpp"
#include "colmu/cli.hpp"

#include <iostream>

using namespace colmu;

int main(int argc, char** argv) {
    CLI::App app{"colmu: satisfiability, model checking and certificates for the coalgebraic mu-calculus"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string logic, formula, path;
    std::int64_t coeff_bound = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--logic", logic, "k|graded|prob|coalition:N|monotone");
        sub->add_option("--coeff-bound", coeff_bound, "bound on (G)/(P) coefficients")->check(CLI::PositiveNumber);
    };

    auto* sat = app.add_subcommand("sat", "decide satisfiability");
    add_common(sat);
    sat->add_option("formula", formula, "formula or @file")->required();
    sat->add_option("--max-positions", cfg.max_positions, "arena ceiling")->check(CLI::PositiveNumber);
    sat->add_option("--emit-model", cfg.emit_model, "write a model on SAT");
    sat->add_option("--emit-tableau", cfg.emit_tableau, "write a closed tableau on UNSAT");
    sat->add_flag("--stats", cfg.stats, "print statistics to stderr");

    auto* check = app.add_subcommand("check", "evaluate a formula on a model");
    add_common(check);
    check->add_option("model", path, "model JSON")->required();
    check->add_option("formula", formula, "formula or @file")->required();
    check->add_flag("--via-game", cfg.via_game, "cross-check with the model-checking game");
    check->add_option("--max-states", cfg.max_states, "state cap for --via-game")->check(CLI::PositiveNumber);

    auto* certify = app.add_subcommand("certify", "verify a closed tableau");
    add_common(certify);
    certify->add_option("tableau", path, "tableau JSON")->required();
    certify->add_option("formula", formula, "formula or @file")->required();

    auto* audit = app.add_subcommand("onestep-audit", "audit the one-step rules against the semantics");
    add_common(audit);
    audit->add_option("--samples", cfg.samples, "number of random premises")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_code::failure;
    }

    if (!logic.empty()) {
        try {
            cfg.logic = parse_signature(logic);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return exit_code::failure;
        }
    }
    if (coeff_bound > 0) cfg.coeff_bound = coeff_bound;

    if (sat->parsed()) return cmd_sat(cfg, formula, std::cout, std::cerr);
    if (check->parsed()) return cmd_check(cfg, path, formula, std::cout, std::cerr);
    if (certify->parsed()) return cmd_certify(cfg, path, formula, std::cout, std::cerr);
    return cmd_onestep_audit(cfg, std::cout, std::cerr);
}
