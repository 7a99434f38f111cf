#include "colmu/cli.hpp"

#include "colmu/model_extraction.hpp"
#include "colmu/onestep.hpp"
#include "colmu/parser.hpp"
#include "colmu/semantics.hpp"
#include "colmu/tableau_game.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace colmu {

namespace {

// Usage or input problem reported with exit code 1.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) throw InputError("cannot write " + path);
}

Formula read_formula(const std::string& source, const Signature& sig) {
    std::string text = read_formula_source(source);
    try {
        return parse(text, sig);
    } catch (const std::exception& e) {
        throw InputError(std::string("parse error: ") + e.what());
    }
}

Sequent root_sequent(const Formula& a) {
    try {
        return prepare_root(a);
    } catch (const FormulaError& e) {
        throw InputError(e.what());
    }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::failure;
    } catch (const CeilingExceeded& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::internal;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_code::internal;
    }
}

GameOptions game_options(const RunConfig& cfg) {
    GameOptions o;
    o.bounds.bound = cfg.coeff_bound;
    o.max_positions = cfg.max_positions;
    return o;
}

}  // namespace

std::string read_formula_source(const std::string& source) {
    std::string text = !source.empty() && source[0] == '@' ? read_file(source.substr(1)) : source;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    return text;
}

int cmd_sat(const RunConfig& cfg, const std::string& formula_source, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Signature sig = cfg.logic.value_or(Signature::kripke());
        Sequent gamma = root_sequent(read_formula(formula_source, sig));
        auto t0 = std::chrono::steady_clock::now();
        SatResult r = decide_sat(gamma, sig, game_options(cfg));
        if (r.satisfiable) {
            out << "SAT\n";
            if (!cfg.emit_model.empty()) {
                CoalgebraModel m = extract_model(*r.game, r.solution);
                if (!satisfies(m, 0, gamma[0])) throw std::logic_error("extracted model does not satisfy the formula");
                CoalgebraModel back = model_from_json(model_to_json(m), sig);
                if (!satisfies(back, 0, gamma[0])) throw std::logic_error("model JSON does not round-trip");
                write_file(cfg.emit_model, model_to_json(m));
                if (cfg.stats) err << "model states: " << m.size() << "\n";
            }
        } else {
            out << "UNSAT\n";
            if (!cfg.emit_tableau.empty()) {
                std::string text = tableau_to_json(*r.tableau);
                if (auto d = verify_closed(tableau_from_json(text, sig), gamma, sig))
                    throw std::logic_error("emitted tableau fails verification: " + *d);
                write_file(cfg.emit_tableau, text);
                if (cfg.stats) err << "tableau nodes: " << r.tableau->nodes.size() << "\n";
            }
        }
        if (cfg.stats) {
            const GameStats& s = r.game->stats();
            double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            err << "closure size: " << r.game->closure().size() << "\n"
                << "arena positions: " << r.game->arena().size() << " (forall " << s.forall_positions << ", exists "
                << s.exists_positions << ")\n"
                << "sequents: " << s.sequents << "\n"
                << "automaton states: " << s.automaton_states << "\n"
                << "priorities: " << s.priorities << "\n"
                << "max blueprints per sequent: " << s.max_blueprints << "\n"
                << "build time: " << s.build_seconds << " s\n"
                << "solve time: " << s.solve_seconds << " s\n"
                << "total time: " << total << " s\n";
        }
        return r.satisfiable ? exit_code::sat : exit_code::unsat;
    });
}

int cmd_check(const RunConfig& cfg, const std::string& model_path, const std::string& formula_source, std::ostream& out,
              std::ostream& err) {
    return guarded(err, [&] {
        std::string text = read_file(model_path);
        CoalgebraModel m;
        try {
            m = cfg.logic ? model_from_json(text, *cfg.logic) : model_from_json(text);
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
        Formula a = make_clean(read_formula(formula_source, m.sig));
        StateSet truth;
        try {
            truth = eval(m, a);
        } catch (const SemanticsError& e) {
            throw InputError(e.what());
        }
        if (cfg.via_game) {
            Sequent gamma = root_sequent(a);
            if (m.size() > cfg.max_states) {
                err << "error: model has " << m.size() << " states, more than --max-states " << cfg.max_states << "\n";
                return exit_code::internal;
            }
            ClosureIndex cl(gamma);
            FormulaId start = cl.id(gamma[0]);
            for (State x = 0; x < m.size(); ++x) {
                McGame g = build_mc_game(m, cl, start, x, cfg.max_states);
                bool wins = solve(g.arena).winner[g.arena.initial] == Player::Exists;
                if (wins != truth[x])
                    throw std::logic_error("model-checking game and evaluation disagree at " + m.states[x]);
            }
        }
        bool first = true;
        for (State x = 0; x < m.size(); ++x)
            if (truth[x]) {
                out << (first ? "" : " ") << m.states[x];
                first = false;
            }
        out << "\n";
        if (m.root && !truth[*m.root]) {
            err << "root " << m.states[*m.root] << " does not satisfy the formula\n";
            return exit_code::failure;
        }
        return exit_code::ok;
    });
}

int cmd_certify(const RunConfig& cfg, const std::string& tableau_path, const std::string& formula_source,
                std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Signature sig = cfg.logic.value_or(Signature::kripke());
        Sequent gamma = root_sequent(read_formula(formula_source, sig));
        Tableau t;
        try {
            t = tableau_from_json(read_file(tableau_path), sig);
        } catch (const TableauFormatError& e) {
            throw InputError(e.what());
        }
        if (auto d = verify_closed(t, gamma, sig)) {
            out << "REJECTED\n";
            err << *d << "\n";
            return exit_code::failure;
        }
        out << "CLOSED\n";
        return exit_code::ok;
    });
}

int cmd_onestep_audit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        Signature sig = cfg.logic.value_or(Signature::kripke());
        if (cfg.samples < 1) throw InputError("--samples must be positive");
        AuditOptions o;
        o.bounds.bound = cfg.coeff_bound;
        AuditReport rep = audit_ruleset(sig, cfg.samples, o);
        out << rep.to_string();
        return rep.ok() ? exit_code::ok : exit_code::failure;
    });
}

}  // namespace colmu
