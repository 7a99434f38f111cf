#pragma once

#include "colmu/closure.hpp"
#include "colmu/formula.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace colmu {

enum class Schema : std::uint8_t { K, G, P, C1, C2, M };
std::string schema_name(Schema s);
std::optional<Schema> parse_schema(const std::string& s);

// One-step rule over abstract variables 0..premise.size()-1; variable i occurs
// exactly once, under premise[i].  Premise layout per schema:
//   K  : dia p0, box p1..                        (split = 1)
//   M  : box p0, dia p1
//   C1 : [C_i] p_i
//   C2 : [C_i] p_i (split of them), <D> q, <N> r_j
//   G/P: diamonds <a_i> p_i (split of them), then boxes [b_j] q_j, coefficients r, s, bound k
struct OneStepRule {
    Schema schema;
    std::vector<Modality> premise;
    int split = 0;
    std::vector<std::int64_t> r, s;
    std::int64_t k = 0;
    std::vector<std::vector<int>> conclusions;  // sorted variable sets

    // (r1,a1,...,rn,an,s1,b1,...,sm,bm,k) for G/P; empty otherwise.
    std::vector<std::string> code() const;
};

// Builds the rule with the given premise and code, checking the schema's side
// conditions; nullopt (with a reason) if it is not an instance.
std::optional<OneStepRule> instantiate_rule(Schema schema, std::vector<Modality> premise, int split,
                                            std::vector<std::int64_t> r, std::vector<std::int64_t> s,
                                            std::int64_t k, const Signature& sig, std::string* why = nullptr);

struct CoefficientBounds {
    std::optional<std::int64_t> bound;  // unset: per-sequent default
};

std::int64_t default_coefficient_bound(const std::vector<Modality>& atoms, const Signature& sig);

struct MatchedRule {
    std::shared_ptr<const OneStepRule> rule;
    std::vector<int> atoms;  // atoms[i] = index (into the input list) of the atom under variable i
};

// All instances whose premise maps injectively onto the given distinct atoms,
// deduplicated by (premise atom set, conclusion atom sets); deterministic order.
std::vector<MatchedRule> match_modal_rules(const std::vector<Modality>& atoms, const Signature& sig,
                                           const CoefficientBounds& bounds);

// ---------------------------------------------------------------------------
// one-step semantics oracle

struct OracleCaps {
    int max_x = 4;              // |X|
    int graded_entry_cap = -1;  // <0: max index + 1
    int strategy_cap = 3;       // coalition strategy-set size per agent
};

// atoms[i] applies atom_ops[i] to the set tau[atom_args[i]] (a bitmask over X).
bool one_step_sat(const std::vector<Modality>& ops, const std::vector<int>& args, const std::vector<std::uint32_t>& tau,
                  int x_size, const Signature& sig, const OracleCaps& caps = {});

struct AuditOptions {
    std::uint64_t seed = 1;
    int max_x = 3;
    int max_atoms = 3;
    int max_vars = 3;
    CoefficientBounds bounds;
    OracleCaps caps;
};

struct AuditReport {
    Signature sig;
    int samples = 0;
    int satisfiable = 0;
    int soundness_failures = 0;
    int completeness_failures = 0;
    std::vector<std::string> counterexamples;
    std::string notes;
    bool ok() const { return soundness_failures == 0 && completeness_failures == 0; }
    std::string to_string() const;
};

AuditReport audit_ruleset(const Signature& sig, int samples, const AuditOptions& opts = {});

// ---------------------------------------------------------------------------
// blueprints

enum class BlueprintKind : std::uint8_t { And, Or, Fix, Axiom, Modal };

struct Blueprint {
    BlueprintKind kind;
    Formula principal;  // And/Or/Fix; the positive member A of an axiom pair
    Formula partner;    // Axiom: the negation of A
    std::shared_ptr<const OneStepRule> rule;
    std::vector<Formula> atoms;  // Modal: premise atoms in variable order
};

std::vector<Blueprint> enumerate_blueprints(const Sequent& delta, const Signature& sig,
                                            const CoefficientBounds& bounds = {});
std::vector<Sequent> conclusions(const Sequent& delta, const Blueprint& bp);
bool is_axiom(const Sequent& delta);

// Whether any rule schema instance (for some coefficients) applies.
bool some_rule_applies(const Sequent& delta, const Signature& sig);
bool some_modal_rule_applies(const std::vector<Modality>& atoms, const Signature& sig);

// Same, over closure ids: sequents are sorted id vectors.
using IdSet = std::vector<FormulaId>;

struct IdBlueprint {
    BlueprintKind kind;
    FormulaId principal = kNoFormula;
    FormulaId partner = kNoFormula;
    std::shared_ptr<const OneStepRule> rule;
    std::vector<FormulaId> atoms;
};

std::vector<IdBlueprint> enumerate_blueprints(const ClosureIndex& cl, const IdSet& delta, const Signature& sig,
                                              const CoefficientBounds& bounds = {});
std::vector<IdSet> conclusions(const ClosureIndex& cl, const IdSet& delta, const IdBlueprint& bp);

Blueprint to_blueprint(const ClosureIndex& cl, const IdBlueprint& bp);
std::optional<IdBlueprint> to_id_blueprint(const ClosureIndex& cl, const Blueprint& bp);

// The least non-atomic formula's rule, for a non-atomic id sequent.
IdBlueprint propositional_choice(const ClosureIndex& cl, const IdSet& delta);

}  // namespace colmu
