#include "colmu/closure.hpp"

#include <algorithm>
#include <unordered_set>

namespace colmu {

std::vector<Formula> closure(const Sequent& gamma) {
    std::unordered_set<Formula, FormulaHash> seen;
    std::vector<Formula> todo(gamma.begin(), gamma.end());
    std::vector<Formula> out;
    while (!todo.empty()) {
        Formula f = todo.back();
        todo.pop_back();
        if (!seen.insert(f).second) continue;
        out.push_back(f);
        switch (f.kind()) {
            case Kind::Var: break;
            case Kind::Or:
            case Kind::And:
                todo.push_back(f.left());
                todo.push_back(f.right());
                break;
            case Kind::Modal: todo.push_back(f.arg()); break;
            case Kind::Mu:
            case Kind::Nu: todo.push_back(unfold(f)); break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ParityBuilder {
    std::map<std::string, int>& prio;
    std::map<std::string, Kind>& kind;
    std::vector<std::pair<std::string, std::string>>& nested;
    std::vector<std::string> scope;

    // Returns the largest priority bound inside f.
    int visit(const Formula& f) {
        switch (f.kind()) {
            case Kind::Var: return 0;
            case Kind::Or:
            case Kind::And: return std::max(visit(f.left()), visit(f.right()));
            case Kind::Modal: return visit(f.arg());
            case Kind::Mu:
            case Kind::Nu: {
                for (const auto& outer : scope) nested.emplace_back(f.name(), outer);
                scope.push_back(f.name());
                int inner = visit(f.body());
                scope.pop_back();
                int want = f.kind() == Kind::Mu ? 1 : 0;
                int p = std::max(inner, 1);
                if (p % 2 != want) ++p;
                prio[f.name()] = p;
                kind[f.name()] = f.kind();
                return p;
            }
        }
        return 0;
    }
};

}  // namespace

ParityMap ParityMap::build(const Sequent& gamma) {
    ParityMap m;
    ParityBuilder b{m.prio_, m.kind_, m.nested_, {}};
    for (const auto& f : gamma) m.max_ = std::max(m.max_, b.visit(f));
    return m;
}

int ParityMap::of_binder(const std::string& x) const {
    auto it = prio_.find(x);
    if (it == prio_.end()) throw std::out_of_range("parity map: unknown binder " + x);
    return it->second;
}

int ParityMap::operator()(const Formula& f) const {
    if (!f.is_fixpoint()) return 0;
    return of_binder(f.name());
}

std::optional<std::string> ParityMap::validate(const Sequent& gamma) const {
    auto cl = closure(gamma);
    for (const auto& f : cl) {
        if (!f.is_fixpoint()) continue;
        auto it = prio_.find(f.name());
        if (it == prio_.end()) return "no priority for binder " + f.name();
        int p = it->second;
        if (p <= 0) return "non-positive priority on " + to_string(f);
        if (f.kind() == Kind::Mu && p % 2 == 0) return "even priority on least fixpoint " + to_string(f);
        if (f.kind() == Kind::Nu && p % 2 == 1) return "odd priority on greatest fixpoint " + to_string(f);
        if (static_cast<std::size_t>(p) > cl.size()) return "priority exceeds closure size on " + to_string(f);
    }
    for (const auto& [inner, outer] : nested_)
        if (prio_.at(inner) > prio_.at(outer))
            return "binder " + inner + " nested in " + outer + " has a larger priority";
    return std::nullopt;
}

// ---------------------------------------------------------------------------

ClosureIndex::ClosureIndex(const Sequent& gamma) : gamma_(gamma), parity_(ParityMap::build(gamma)) {
    auto cl = closure(gamma);
    entries_.reserve(cl.size());
    for (std::size_t i = 0; i < cl.size(); ++i) {
        ids_.emplace(cl[i], static_cast<FormulaId>(i));
        ClosureEntry e;
        e.formula = cl[i];
        e.kind = cl[i].kind();
        e.atomic = cl[i].is_atomic();
        e.priority = parity_(cl[i]);
        entries_.push_back(std::move(e));
    }
    for (auto& e : entries_) {
        const Formula& f = e.formula;
        switch (f.kind()) {
            case Kind::Var: break;
            case Kind::Or:
            case Kind::And:
                e.left = id(f.left());
                e.right = id(f.right());
                break;
            case Kind::Modal: e.left = id(f.arg()); break;
            case Kind::Mu:
            case Kind::Nu: e.left = id(unfold(f)); break;
        }
        if (auto n = find(negate(f))) e.negation = *n;
    }
    for (const auto& f : gamma) root_.push_back(id(f));
    std::sort(root_.begin(), root_.end());
}

std::optional<FormulaId> ClosureIndex::find(const Formula& f) const {
    auto it = ids_.find(f);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

FormulaId ClosureIndex::id(const Formula& f) const {
    auto it = ids_.find(f);
    if (it == ids_.end()) throw std::out_of_range("formula outside the closure: " + to_string(f));
    return it->second;
}

}  // namespace colmu
