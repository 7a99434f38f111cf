#pragma once

#include "colmu/semantics.hpp"
#include "colmu/tableau_game.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace colmu {

class ExtractionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Forall's fixed propositional strategy: the rule of the least non-atomic member.
// Throws std::logic_error on atomic sequents.
Blueprint propositional_strategy(const Sequent& delta);

// Model construction from a winning exists strategy.  Carrier states are the
// atomic forall positions reachable from sigma(root) via Suc, in discovery order.
class ModelExtractor {
public:
    ModelExtractor(const TableauGame& game, const ParitySolution& sol);  // throws std::logic_error if exists loses

    // The atomic position reached from a forall position by propositional rules
    // (forall) and the strategy (exists); throws ExtractionError if the guard trips.
    Position sigma(Position forall_pos) const;

    const std::vector<Position>& carrier() const { return carrier_; }
    std::size_t index_of(Position p) const;  // carrier index
    // Suc(A, y) as a set of carrier indices; empty if A has no children at y.
    StateSet suc(std::size_t y, FormulaId a) const;
    const std::vector<FormulaId>& atoms(std::size_t y) const { return atoms_[y]; }

    // Builds the coherent structure; throws ExtractionError naming the offending
    // position when a solver fails or the result is not coherent.
    CoalgebraModel model() const;

    // nullopt iff every modal atom of every carrier state holds of Suc in m.
    std::optional<std::string> check_coherent(const CoalgebraModel& m) const;

    std::size_t max_sigma_steps() const { return max_steps_; }
    std::string describe(std::size_t y) const;

private:
    const TableauGame& game_;
    const ParitySolution& sol_;
    std::vector<Position> carrier_;
    std::map<Position, std::size_t> index_;
    std::vector<std::map<FormulaId, std::vector<std::size_t>>> suc_;
    std::vector<std::vector<FormulaId>> atoms_;
    mutable std::map<Position, Position> sigma_memo_;
    mutable std::size_t max_steps_ = 0;
};

// Convenience: extract, verify coherence and the valuation, name states s0, s1, ...
// and set the root.
CoalgebraModel extract_model(const TableauGame& game, const ParitySolution& sol);

}  // namespace colmu
