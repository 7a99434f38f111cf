#pragma once

#include "colmu/closure.hpp"
#include "colmu/formula.hpp"
#include "colmu/parity_game.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace colmu {

using State = std::uint32_t;
using StateSet = boost::dynamic_bitset<>;

// One-shot game at a state: sizes[i] strategies for agent i+1, outcome indexed by
// the profile in mixed radix with agent 1 least significant.
struct GameForm {
    std::vector<int> sizes;
    std::vector<State> outcome;

    std::size_t profiles() const;
    std::vector<int> profile(std::size_t index) const;
    std::size_t index(const std::vector<int>& profile) const;
};

struct CoalgebraModel {
    Signature sig;
    std::vector<std::string> states;
    std::map<std::string, StateSet> valuation;
    std::optional<State> root;  // designated state, if any

    std::vector<std::vector<State>> successors;                          // kripke
    std::vector<std::vector<std::pair<State, std::int64_t>>> weights;    // graded
    std::vector<std::vector<std::pair<State, Rational>>> dist;          // probabilistic
    std::vector<std::vector<StateSet>> neighborhoods;                   // monotone generators
    std::vector<GameForm> games;                                         // coalition

    explicit CoalgebraModel(Signature s = {}) : sig(s) {}

    std::size_t size() const { return states.size(); }
    State add_state(const std::string& name);  // extends every structure table
    StateSet empty_set() const { return StateSet(size()); }
    StateSet full_set() const { return ~StateSet(size()); }
    std::optional<State> find_state(const std::string& name) const;

    // Throws std::invalid_argument when a structural invariant is broken.
    void validate() const;
};

class SemanticsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Whether gamma(x) lies in the lifting of op at u; barred operators by complement.
bool lifting_member(const CoalgebraModel& m, State x, const Modality& op, const StateSet& u);

// Knaster-Tarski evaluation of a clean formula.
StateSet eval(const CoalgebraModel& m, const Formula& a);
bool satisfies(const CoalgebraModel& m, State x, const Formula& a);

struct McGame {
    ParityArena arena;
    std::map<std::pair<FormulaId, State>, Position> formula_positions;
};

// The model-checking game on Cl(gamma) x states, explored from start.
McGame build_mc_game(const CoalgebraModel& m, const ClosureIndex& cl, FormulaId start, State x,
                     std::size_t state_cap = 5);

// Model JSON; unknown fields are rejected with std::invalid_argument.
CoalgebraModel model_from_json(const std::string& text, const Signature& expected);
CoalgebraModel model_from_json(const std::string& text);
std::string model_to_json(const CoalgebraModel& m);

std::string kind_name(const Signature& sig);

}  // namespace colmu
