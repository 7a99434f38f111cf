#pragma once

#include "colmu/formula.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace colmu {

// Smallest set containing gamma, closed under immediate subformulas of
// non-fixpoint formulas and under unfolding of fixpoint formulas; canonical order.
std::vector<Formula> closure(const Sequent& gamma);

// Priorities are attached to binder variables: a closure formula eta p.B gets the
// priority of p.  A binder receives the least positive number of its parity (odd
// for mu, even for nu) that is at least every priority bound inside its body.
class ParityMap {
public:
    ParityMap() = default;
    static ParityMap build(const Sequent& gamma);

    int operator()(const Formula& f) const;
    int of_binder(const std::string& x) const;
    int max_priority() const { return max_; }
    const std::map<std::string, int>& binders() const { return prio_; }

    // nullopt iff every parity-map condition holds on cl(gamma).
    std::optional<std::string> validate(const Sequent& gamma) const;

private:
    std::map<std::string, int> prio_;
    std::map<std::string, Kind> kind_;
    std::vector<std::pair<std::string, std::string>> nested_;  // (inner, outer)
    int max_ = 0;
};

using FormulaId = std::uint32_t;
inline constexpr FormulaId kNoFormula = 0xffffffffu;

struct ClosureEntry {
    Formula formula;
    Kind kind;
    FormulaId left = kNoFormula;   // first child, modal argument, or fixpoint unfolding
    FormulaId right = kNoFormula;  // second child of a binary connective
    FormulaId negation = kNoFormula;
    int priority = 0;
    bool atomic = false;
};

// Closure of a clean, guarded root sequent with dense ids in canonical order, so
// that sorting ids sorts formulas canonically.
class ClosureIndex {
public:
    explicit ClosureIndex(const Sequent& gamma);

    std::size_t size() const { return entries_.size(); }
    const ClosureEntry& operator[](FormulaId i) const { return entries_[i]; }
    const Formula& formula(FormulaId i) const { return entries_[i].formula; }
    std::optional<FormulaId> find(const Formula& f) const;
    FormulaId id(const Formula& f) const;  // throws std::out_of_range outside the closure
    const std::vector<FormulaId>& root() const { return root_; }
    const Sequent& root_sequent() const { return gamma_; }
    const ParityMap& parity() const { return parity_; }
    int max_priority() const { return parity_.max_priority(); }

private:
    Sequent gamma_;
    ParityMap parity_;
    std::vector<ClosureEntry> entries_;
    std::unordered_map<Formula, FormulaId, FormulaHash> ids_;
    std::vector<FormulaId> root_;
};

}  // namespace colmu
