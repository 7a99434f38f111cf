#pragma once

#include "colmu/closure.hpp"
#include "colmu/onestep.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace colmu {

// Sorted, duplicate-free pairs (B, B') of closure ids.
using TraceRelation = std::vector<std::pair<FormulaId, FormulaId>>;

// Tr(delta, bp, i) for the i-th conclusion (0-based).
TraceRelation trace_relation(const ClosureIndex& cl, const IdSet& delta, const IdBlueprint& bp, std::size_t i);

struct TraceTile {
    Sequent sequent;
    Blueprint blueprint;
    std::size_t conclusion = 0;  // 0-based
};

std::vector<std::pair<Formula, Formula>> trace_relation(const TraceTile& tile);

// Nondeterministic parity automaton over tiles accepting the words that carry a
// bad trace: states Cl(gamma) plus an initial state, priority Omega + 1 on
// closure states and 0 on the initial one, max-even acceptance.
struct TraceNpw {
    std::size_t closure_size = 0;       // state closure_size is the initial state
    std::vector<int> priority;          // size closure_size + 1
    std::vector<FormulaId> start;       // root formulas: targets of the initial state
    static TraceNpw build(const ClosureIndex& cl);
    std::size_t initial() const { return closure_size; }
};

// Deterministic parity automaton accepting the tile words without bad trace,
// expanded lazily.  Priorities are max-even.
class TraceAutomaton {
public:
    using StateId = std::uint32_t;

    explicit TraceAutomaton(const ClosureIndex& cl);

    StateId initial() const { return 0; }
    StateId step(StateId a, const TraceRelation& rel);
    int priority(StateId a) const;
    std::size_t state_count() const;
    std::size_t nba_size() const { return nba_states_; }
    int max_priority() const { return 2 * static_cast<int>(nba_states_) + 2; }
    std::string describe(StateId a) const;
    std::string dump() const;

private:
    using Bits = boost::dynamic_bitset<>;
    struct Node {
        int name;
        Bits label;
        std::vector<int> children;  // indices, oldest first
    };
    struct Tree {
        std::vector<Node> nodes;  // nodes[0] is the root when non-empty
        int e = 0, f = 0;         // 0 = none
    };

    TraceNpw npw_;
    std::size_t nba_states_ = 0;
    std::vector<int> evens_;                       // commit levels
    std::vector<int> guess_index_;                 // npw state -> nba state
    std::vector<std::vector<int>> commit_index_;   // npw state x level -> nba state or -1
    std::vector<std::size_t> nba_q_;               // nba state -> npw state
    std::vector<int> nba_level_;                   // -1 for guess states
    Bits accepting_;

    mutable std::mutex mu_;
    std::vector<Tree> trees_;
    std::vector<int> prio_;
    std::map<std::string, StateId> ids_;
    std::map<TraceRelation, std::uint32_t> rel_ids_;
    std::map<std::pair<StateId, std::uint32_t>, StateId> cache_;

    StateId intern(Tree t);
    std::string key(const Tree& t) const;
    Tree successor(const Tree& t, const TraceRelation& rel) const;
    Bits post(const Bits& s, const std::vector<std::vector<FormulaId>>& adj) const;
};

// Brute-force check of the lasso stem.cycle^omega: a reachable cycle in the
// (formula, lasso position) trace graph whose largest priority is odd.
// Tiles must chain; otherwise std::invalid_argument.
struct IdTile {
    IdSet sequent;
    IdBlueprint blueprint;
    std::size_t conclusion = 0;
};
bool lasso_has_bad_trace(const ClosureIndex& cl, const std::vector<IdTile>& stem, const std::vector<IdTile>& cycle);
bool lasso_has_bad_trace(const std::vector<TraceTile>& stem, const std::vector<TraceTile>& cycle, const ParityMap& omega);

}  // namespace colmu
