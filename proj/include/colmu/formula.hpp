#pragma once

#include "colmu/rational.hpp"

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace colmu {

enum class Logic : std::uint8_t { Kripke, Graded, Probabilistic, Coalition, Monotone };

struct Signature {
    Logic logic = Logic::Kripke;
    int agents = 0;  // coalition only

    static Signature kripke() { return {Logic::Kripke, 0}; }
    static Signature graded() { return {Logic::Graded, 0}; }
    static Signature probabilistic() { return {Logic::Probabilistic, 0}; }
    static Signature coalition(int n) { return {Logic::Coalition, n}; }
    static Signature monotone() { return {Logic::Monotone, 0}; }

    std::uint32_t grand_coalition() const {
        return agents >= 32 ? 0xffffffffu : ((1u << agents) - 1u);
    }
    std::string name() const;
    friend bool operator==(const Signature&, const Signature&) = default;
};

// Parses "k", "kripke", "graded", "prob", "probabilistic", "monotone", "coalition:N".
Signature parse_signature(const std::string& text);

// A unary modal operator of some logic.  The non-dual operator is the element of
// Lambda (box, <n>, <p>, [C]); `dual` selects its bar (dia, [n], [p], <C>).
struct Modality {
    Logic logic = Logic::Kripke;
    bool dual = false;
    std::int64_t grade = 0;       // graded index
    Rational prob;                // probabilistic index in [0,1]
    std::uint32_t coalition = 0;  // bit i-1 set iff agent i is in C

    static Modality box(Logic l) { return {l, false, 0, 0, 0}; }
    static Modality dia(Logic l) { return {l, true, 0, 0, 0}; }
    static Modality more_than(std::int64_t n) { return {Logic::Graded, false, n, 0, 0}; }
    static Modality graded_box(std::int64_t n) { return {Logic::Graded, true, n, 0, 0}; }
    static Modality at_least(const Rational& p) { return {Logic::Probabilistic, false, 0, p, 0}; }
    static Modality prob_box(const Rational& p) { return {Logic::Probabilistic, true, 0, p, 0}; }
    static Modality can_force(std::uint32_t c) { return {Logic::Coalition, false, 0, 0, c}; }
    static Modality cannot_prevent(std::uint32_t c) { return {Logic::Coalition, true, 0, 0, c}; }

    Modality dualized() const {
        Modality m = *this;
        m.dual = !dual;
        return m;
    }
    std::string to_string() const;
    int compare(const Modality& o) const;
    std::size_t hash() const;
    friend bool operator==(const Modality& a, const Modality& b) { return a.compare(b) == 0; }
};

std::string coalition_to_string(std::uint32_t c);

enum class Kind : std::uint8_t { Var, Or, And, Modal, Mu, Nu };

struct FormulaNode;

// Immutable NNF formula, shared structurally.  Equality and ordering are
// structural; the order is the canonical one (depth, kind, descriptor, children).
class Formula {
public:
    Formula() = default;

    static Formula var(std::string name, bool negated = false);
    static Formula disj(Formula a, Formula b);
    static Formula conj(Formula a, Formula b);
    static Formula modal(Modality m, Formula a);
    static Formula mu(std::string x, Formula body);
    static Formula nu(std::string x, Formula body);
    static Formula fix(Kind k, std::string x, Formula body);

    Kind kind() const;
    const std::string& name() const;  // variable name or binder
    bool negated() const;
    const Formula& left() const;
    const Formula& right() const;
    const Formula& arg() const { return left(); }
    const Formula& body() const { return left(); }
    const Modality& modality() const;
    std::size_t hash() const;
    int depth() const;

    bool is_var() const { return kind() == Kind::Var; }
    bool is_modal() const { return kind() == Kind::Modal; }
    bool is_fixpoint() const { return kind() == Kind::Mu || kind() == Kind::Nu; }
    bool is_atomic() const { return is_var() || is_modal(); }

    explicit operator bool() const { return static_cast<bool>(node_); }
    const FormulaNode* get() const { return node_.get(); }

private:
    explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
    Kind kind;
    bool negated = false;
    std::string name;
    Modality modality;
    Formula a, b;
    std::size_t hash = 0;
    int depth = 0;
};

int compare(const Formula& a, const Formula& b);
inline bool operator==(const Formula& a, const Formula& b) {
    return a.get() == b.get() || (a.hash() == b.hash() && compare(a, b) == 0);
}
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
inline bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Finite set of formulas kept in canonical order.
class Sequent {
public:
    Sequent() = default;
    Sequent(std::initializer_list<Formula> fs);
    explicit Sequent(std::vector<Formula> fs);

    bool insert(const Formula& f);
    bool contains(const Formula& f) const;
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const Formula& operator[](std::size_t i) const { return items_[i]; }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }
    const std::vector<Formula>& items() const { return items_; }
    std::size_t hash() const;
    friend bool operator==(const Sequent& a, const Sequent& b) { return a.items_ == b.items_; }

private:
    std::vector<Formula> items_;
};

Formula negate(const Formula& a);
Formula substitute(const Formula& a, const std::string& var, const Formula& replacement);
Formula unfold(const Formula& fixpoint);  // A[p := eta p.A]

std::string to_string(const Formula& f);
std::string to_string(const Sequent& s);

// Free variables (names only; polarity ignored).
std::set<std::string> free_variables(const Formula& f);
std::set<std::string> free_variables(const Sequent& s);

// size() of the size measure: one per subformula occurrence plus the index cost.
std::int64_t size(const Formula& f);
std::int64_t size(const Sequent& s);

// nullopt when the conjunction of the sequent is clean and every member guarded.
std::optional<std::string> check_clean_guarded(const Sequent& s);

// Renames bound variables apart from each other and from the free variables.
Sequent make_clean(const Sequent& s);
Formula make_clean(const Formula& f);

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace colmu

template <>
struct std::hash<colmu::Formula> {
    std::size_t operator()(const colmu::Formula& f) const { return f.hash(); }
};
