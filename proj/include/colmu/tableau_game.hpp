#pragma once

#include "colmu/closure.hpp"
#include "colmu/onestep.hpp"
#include "colmu/parity_game.hpp"
#include "colmu/trace_automaton.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace colmu {

class CeilingExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GameOptions {
    CoefficientBounds bounds;
    std::size_t max_positions = 2000000;
};

struct GameStats {
    std::size_t forall_positions = 0;
    std::size_t exists_positions = 0;
    std::size_t sequents = 0;
    std::size_t automaton_states = 0;
    std::size_t max_blueprints = 0;
    int priorities = 0;  // distinct priorities after compression
    double build_seconds = 0, solve_seconds = 0;
};

// The tableau game for a clean, guarded root sequent, explored from
// (gamma, initial automaton state) and closed under moves.
//   forall positions (delta, a): priority Omega(a), moves to the blueprints
//   exists positions (delta, bp, a): priority 0, moves to the conclusions
class TableauGame {
public:
    using StateId = TraceAutomaton::StateId;
    struct Info {
        std::uint32_t sequent;
        StateId state;
        int blueprint;  // index into blueprints(sequent); -1 on forall positions
    };

    TableauGame(const Sequent& gamma, const Signature& sig, const GameOptions& opts = {});

    const ClosureIndex& closure() const { return *cl_; }
    TraceAutomaton& automaton() { return *dta_; }
    const Signature& signature() const { return sig_; }
    const ParityArena& arena() const { return arena_; }
    Position root() const { return 0; }
    const Info& info(Position p) const { return info_[p]; }
    const IdSet& sequent(std::uint32_t s) const { return seqs_[s].ids; }
    std::size_t sequent_count() const { return seqs_.size(); }
    const IdBlueprint& blueprint(Position exists_pos) const;  // move i of it is conclusion i
    int automaton_priority(Position p) const { return raw_priority_[p]; }
    GameStats& stats() { return stats_; }
    const GameStats& stats() const { return stats_; }

    // Upper bound |S(gamma)| * |Q| * (1 + max blueprints) as a double.
    double size_bound() const;

private:
    struct SeqData {
        IdSet ids;
        bool expanded = false;
        std::vector<IdBlueprint> bps;
        std::vector<std::vector<std::uint32_t>> concl;      // per blueprint
        std::vector<std::vector<TraceRelation>> relation;   // per blueprint and conclusion
    };
    struct Key {
        std::uint32_t s, a;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const { return (std::size_t(k.s) << 32) ^ k.a; }
    };

    std::uint32_t intern(const IdSet& s);
    void expand(std::uint32_t s);
    Position forall(std::uint32_t s, StateId a, std::vector<Position>& todo);
    void build();

    Signature sig_;
    GameOptions opts_;
    std::unique_ptr<ClosureIndex> cl_;
    std::unique_ptr<TraceAutomaton> dta_;
    ParityArena arena_;
    std::vector<Info> info_;
    std::vector<int> raw_priority_;
    std::vector<SeqData> seqs_;
    std::map<IdSet, std::uint32_t> seq_ids_;
    std::unordered_map<Key, Position, KeyHash> forall_ids_;
    GameStats stats_;
};

// A tableau: labels are sequents, annotations blueprints; edges run from a node
// to a node labelled by the given conclusion of its rule.
struct TableauNode {
    Sequent label;
    std::optional<Blueprint> annotation;
};
struct TableauEdge {
    std::size_t from, to, conclusion;
    friend bool operator==(const TableauEdge&, const TableauEdge&) = default;
};
struct Tableau {
    std::vector<TableauNode> nodes;
    std::vector<TableauEdge> edges;
    std::size_t root = 0;
};

struct SatResult {
    bool satisfiable = false;
    std::shared_ptr<TableauGame> game;
    ParitySolution solution;
    std::optional<Tableau> tableau;  // set on UNSAT
};

// Cleans (renaming bound variables) and checks guardedness; throws FormulaError.
Sequent prepare_root(const Formula& a);

SatResult decide_sat(const Sequent& gamma, const Signature& sig, const GameOptions& opts = {});
SatResult decide_sat(const Formula& a, const Signature& sig, const GameOptions& opts = {});

// Nodes are the forall positions reachable under forall's strategy; throws
// std::logic_error if forall does not win the root.
Tableau extract_tableau(const TableauGame& game, const ParitySolution& sol);

// nullopt iff t is a closed tableau for gamma; otherwise a diagnostic.
std::optional<std::string> verify_closed(const Tableau& t, const Sequent& gamma, const Signature& sig);

class TableauFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string tableau_to_json(const Tableau& t);
Tableau tableau_from_json(const std::string& text, const Signature& sig);  // throws TableauFormatError

}  // namespace colmu
