#include "colmu/model_extraction.hpp"

#include "colmu/lp.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

namespace colmu {

Blueprint propositional_strategy(const Sequent& delta) {
    for (const auto& f : delta) {
        switch (f.kind()) {
            case Kind::And: return {BlueprintKind::And, f, {}, nullptr, {}};
            case Kind::Or: return {BlueprintKind::Or, f, {}, nullptr, {}};
            case Kind::Mu:
            case Kind::Nu: return {BlueprintKind::Fix, f, {}, nullptr, {}};
            default: break;
        }
    }
    throw std::logic_error("propositional_strategy: atomic sequent");
}

namespace {

bool atomic(const ClosureIndex& cl, const IdSet& s) {
    return std::all_of(s.begin(), s.end(), [&](FormulaId f) { return cl[f].atomic; });
}

}  // namespace

ModelExtractor::ModelExtractor(const TableauGame& game, const ParitySolution& sol) : game_(game), sol_(sol) {
    const auto& arena = game.arena();
    if (sol.winner.size() != arena.size() || sol.winner[game.root()] != Player::Exists)
        throw std::logic_error("model extraction: exists does not win the root");
    std::deque<Position> queue;
    auto visit = [&](Position p) {
        auto [it, fresh] = index_.emplace(p, carrier_.size());
        if (fresh) {
            carrier_.push_back(p);
            queue.push_back(p);
        }
        return it->second;
    };
    visit(sigma(game.root()));
    while (!queue.empty()) {
        Position v = queue.front();
        queue.pop_front();
        std::size_t y = index_[v];
        if (suc_.size() <= y) {
            suc_.resize(y + 1);
            atoms_.resize(y + 1);
        }
        const ClosureIndex& cl = game.closure();
        for (FormulaId f : game.sequent(game.info(v).sequent))
            if (cl[f].kind == Kind::Modal) atoms_[y].push_back(f);
        std::map<FormulaId, std::vector<std::size_t>> succ;
        for (Position e : arena.moves[v]) {
            if (game.blueprint(e).kind != BlueprintKind::Modal) continue;
            Position child = sol.strategy[e];
            if (child == kNoPosition)
                throw ExtractionError("model extraction: no strategy move at a modal position of " + describe(y));
            std::size_t z = visit(sigma(child));
            for (FormulaId a : game.sequent(game.info(child).sequent)) succ[a].push_back(z);
        }
        for (auto& [a, v2] : succ) {
            std::sort(v2.begin(), v2.end());
            v2.erase(std::unique(v2.begin(), v2.end()), v2.end());
        }
        suc_[y] = std::move(succ);
    }
}

Position ModelExtractor::sigma(Position p) const {
    auto memo = sigma_memo_.find(p);
    if (memo != sigma_memo_.end()) return memo->second;
    const ClosureIndex& cl = game_.closure();
    const auto& arena = game_.arena();
    Position v = p;
    std::size_t steps = 0;
    while (!atomic(cl, game_.sequent(game_.info(v).sequent))) {
        if (++steps > arena.size()) throw ExtractionError("model extraction: propositional unfolding does not terminate");
        IdBlueprint g = propositional_choice(cl, game_.sequent(game_.info(v).sequent));
        Position next = kNoPosition;
        for (Position e : arena.moves[v]) {
            const IdBlueprint& b = game_.blueprint(e);
            if (b.kind == g.kind && b.principal == g.principal) {
                next = sol_.strategy[e];
                break;
            }
        }
        if (next == kNoPosition) throw ExtractionError("model extraction: exists has no answer to the propositional rule");
        v = next;
    }
    max_steps_ = std::max(max_steps_, steps);
    sigma_memo_[p] = v;
    return v;
}

std::size_t ModelExtractor::index_of(Position p) const {
    auto it = index_.find(p);
    if (it == index_.end()) throw std::out_of_range("model extraction: not a carrier position");
    return it->second;
}

StateSet ModelExtractor::suc(std::size_t y, FormulaId a) const {
    StateSet s(carrier_.size());
    auto it = suc_[y].find(a);
    if (it != suc_[y].end())
        for (std::size_t z : it->second) s.set(z);
    return s;
}

std::string ModelExtractor::describe(std::size_t y) const {
    const ClosureIndex& cl = game_.closure();
    std::vector<Formula> fs;
    for (FormulaId f : game_.sequent(game_.info(carrier_[y]).sequent)) fs.push_back(cl.formula(f));
    return "s" + std::to_string(y) + " = (" + to_string(Sequent(fs)) + ", automaton state " +
           std::to_string(game_.info(carrier_[y]).state) + ")";
}

namespace {

struct Atom {
    Modality op;
    StateSet set;
};

// States grouped by membership in the atom sets; each cell is represented by its
// least state.
struct Cells {
    std::vector<State> rep;
    std::vector<std::vector<bool>> in;  // in[c][i]: cell c inside atom i's set
};

Cells cells_of(const std::vector<Atom>& atoms, std::size_t n) {
    Cells c;
    std::map<std::vector<bool>, std::size_t> seen;
    for (State y = 0; y < n; ++y) {
        std::vector<bool> sig;
        for (const auto& a : atoms) sig.push_back(a.set[y]);
        if (seen.emplace(sig, c.rep.size()).second) {
            c.rep.push_back(y);
            c.in.push_back(sig);
        }
    }
    return c;
}

std::optional<std::vector<State>> kripke_solver(const std::vector<Atom>& atoms, std::size_t n) {
    StateSet inter(n);
    inter.set();
    bool boxes = false, diamonds = false;
    for (const auto& a : atoms)
        if (!a.op.dual) {
            inter &= a.set;
            boxes = true;
        }
    StateSet out(n);
    for (const auto& a : atoms) {
        if (!a.op.dual) continue;
        diamonds = true;
        StateSet w = inter & a.set;
        auto first = w.find_first();
        if (first == StateSet::npos) return std::nullopt;
        out.set(first);
    }
    if (!diamonds && boxes) out = inter;
    std::vector<State> succ;
    for (auto i = out.find_first(); i != StateSet::npos; i = out.find_next(i)) succ.push_back(static_cast<State>(i));
    return succ;
}

std::optional<std::vector<StateSet>> monotone_solver(const std::vector<Atom>& atoms) {
    std::vector<StateSet> gens;
    for (const auto& a : atoms)
        if (!a.op.dual) gens.push_back(a.set);
    for (const auto& a : atoms)
        if (a.op.dual)
            for (const auto& g : gens)
                if (!g.intersects(a.set)) return std::nullopt;
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    std::vector<StateSet> minimal;
    for (const auto& g : gens) {
        bool has_smaller = false;
        for (const auto& h : gens)
            if (h != g && h.is_subset_of(g)) has_smaller = true;
        if (!has_smaller) minimal.push_back(g);
    }
    return minimal;
}

std::optional<std::vector<std::pair<State, std::int64_t>>> graded_solver(const std::vector<Atom>& atoms, std::size_t n) {
    Cells cells = cells_of(atoms, n);
    std::size_t nc = cells.rep.size();
    std::int64_t cap = 1;
    for (const auto& a : atoms) cap += a.op.grade;
    // lower: sum over cells inside >= grade + 1; upper: sum over cells outside <= grade
    std::vector<std::int64_t> acc(atoms.size(), 0);
    std::vector<std::int64_t> count(nc, 0);
    std::size_t budget = 2000000;
    std::function<bool(std::size_t)> dfs = [&](std::size_t c) -> bool {
        if (budget-- == 0) return false;
        if (c == nc) {
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (!atoms[i].op.dual && acc[i] < atoms[i].op.grade + 1) return false;
            return true;
        }
        std::int64_t rest = cap * static_cast<std::int64_t>(nc - c - 1);
        for (std::int64_t k = 0; k <= cap; ++k) {
            bool ok = true;
            for (std::size_t i = 0; i < atoms.size() && ok; ++i) {
                bool counted = atoms[i].op.dual ? !cells.in[c][i] : cells.in[c][i];
                std::int64_t v = acc[i] + (counted ? k : 0);
                if (atoms[i].op.dual) ok = v <= atoms[i].op.grade;
                else ok = v + rest >= atoms[i].op.grade + 1;
            }
            if (!ok) continue;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i].op.dual ? !cells.in[c][i] : cells.in[c][i]) acc[i] += k;
            count[c] = k;
            if (dfs(c + 1)) return true;
            for (std::size_t i = 0; i < atoms.size(); ++i)
                if (atoms[i].op.dual ? !cells.in[c][i] : cells.in[c][i]) acc[i] -= k;
        }
        return false;
    };
    if (!dfs(0)) return std::nullopt;
    std::vector<std::pair<State, std::int64_t>> w;
    for (std::size_t c = 0; c < nc; ++c)
        if (count[c] > 0) w.emplace_back(cells.rep[c], count[c]);
    std::sort(w.begin(), w.end());
    return w;
}

std::optional<std::vector<std::pair<State, Rational>>> prob_solver(const std::vector<Atom>& atoms, std::size_t n) {
    Cells cells = cells_of(atoms, n);
    std::size_t nc = cells.rep.size();
    std::vector<LinearConstraint> cs;
    cs.push_back({std::vector<Rational>(nc, Rational(1)), Rel::EQ, Rational(1)});
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        LinearConstraint k{std::vector<Rational>(nc, Rational(0)), Rel::GE, atoms[i].op.prob};
        for (std::size_t c = 0; c < nc; ++c)
            if (atoms[i].op.dual ? !cells.in[c][i] : cells.in[c][i]) k.a[c] = 1;
        // barred: the mass outside the set stays below the index
        if (atoms[i].op.dual) k.rel = Rel::LT;
        cs.push_back(std::move(k));
    }
    auto x = lp_feasible_point(nc, cs);
    if (!x) return std::nullopt;
    std::vector<std::pair<State, Rational>> d;
    for (std::size_t c = 0; c < nc; ++c)
        if ((*x)[c] != 0) d.emplace_back(cells.rep[c], (*x)[c]);
    std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return d;
}

// Each agent votes for one [C]-atom containing it (or none) and names a number
// t; the numbers summed modulo (duals + 1) select a <D>-atom to honour.
std::optional<GameForm> coalition_solver(const std::vector<Atom>& atoms, std::size_t n, const Signature& sig,
                                         std::string& why) {
    const std::uint32_t grand = sig.grand_coalition();
    std::vector<std::size_t> plain, duals;
    StateSet always(n);
    always.set();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!atoms[i].op.dual) plain.push_back(i);
        else if (atoms[i].op.coalition == grand) always &= atoms[i].set;
        else duals.push_back(i);
    }
    const int agents = sig.agents;
    const int m = static_cast<int>(duals.size()) + 1;
    std::vector<std::vector<int>> votes(agents, std::vector<int>{-1});
    for (int a = 0; a < agents; ++a)
        for (std::size_t k = 0; k < plain.size(); ++k)
            if (atoms[plain[k]].op.coalition & (1u << a)) votes[a].push_back(static_cast<int>(k));
    GameForm g;
    std::size_t total = 1;
    for (int a = 0; a < agents; ++a) {
        g.sizes.push_back(static_cast<int>(votes[a].size()) * m);
        total *= static_cast<std::size_t>(g.sizes.back());
        if (total > 1000000) {
            why = "game form too large";
            return std::nullopt;
        }
    }
    g.outcome.resize(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        auto prof = g.profile(idx);
        std::vector<int> vote(agents);
        int tsum = 0;
        for (int a = 0; a < agents; ++a) {
            vote[a] = votes[a][prof[a] / m];
            tsum += prof[a] % m;
        }
        StateSet base = always;
        std::uint32_t used = 0;
        for (std::size_t k = 0; k < plain.size(); ++k) {
            std::uint32_t c = atoms[plain[k]].op.coalition;
            bool all = true;
            for (int a = 0; a < agents; ++a)
                if ((c & (1u << a)) && vote[a] != static_cast<int>(k)) all = false;
            if (all) {
                base &= atoms[plain[k]].set;
                used |= c;
            }
        }
        StateSet target = base;
        int j = tsum % m;
        if (j > 0) {
            const Atom& d = atoms[duals[j - 1]];
            if ((used & ~d.op.coalition) == 0) target &= d.set;
        }
        auto first = target.find_first();
        if (first == StateSet::npos) {
            why = "no outcome for profile " + std::to_string(idx);
            return std::nullopt;
        }
        g.outcome[idx] = static_cast<State>(first);
    }
    return g;
}

}  // namespace

CoalgebraModel ModelExtractor::model() const {
    const ClosureIndex& cl = game_.closure();
    const Signature& sig = game_.signature();
    std::size_t n = carrier_.size();
    CoalgebraModel m(sig);
    for (std::size_t y = 0; y < n; ++y) m.add_state("s" + std::to_string(y));
    m.root = 0;
    std::set<std::string> vars;
    for (FormulaId f = 0; f < cl.size(); ++f)
        if (cl[f].kind == Kind::Var) vars.insert(cl.formula(f).name());
    for (const auto& v : vars) m.valuation[v] = m.empty_set();
    for (std::size_t y = 0; y < n; ++y)
        for (FormulaId f : game_.sequent(game_.info(carrier_[y]).sequent))
            if (cl[f].kind == Kind::Var && !cl.formula(f).negated()) m.valuation[cl.formula(f).name()].set(y);

    for (std::size_t y = 0; y < n; ++y) {
        std::vector<Atom> atoms;
        for (FormulaId a : atoms_[y]) atoms.push_back({cl.formula(a).modality(), suc(y, cl[a].left)});
        auto fail = [&](const std::string& what) {
            throw ExtractionError("model extraction: " + what + " at " + describe(y));
        };
        switch (sig.logic) {
            case Logic::Kripke: {
                auto s = kripke_solver(atoms, n);
                if (!s) fail("no kripke witness");
                m.successors[y] = *s;
                break;
            }
            case Logic::Monotone: {
                auto s = monotone_solver(atoms);
                if (!s) fail("neighbourhood generators miss a diamond set");
                m.neighborhoods[y] = *s;
                break;
            }
            case Logic::Graded: {
                auto s = graded_solver(atoms, n);
                if (!s) fail("no multiplicity map within the bound");
                m.weights[y] = *s;
                break;
            }
            case Logic::Probabilistic: {
                if (atoms.empty()) {
                    m.dist[y] = {{static_cast<State>(y), Rational(1)}};
                    break;
                }
                auto s = prob_solver(atoms, n);
                if (!s) fail("probability constraints infeasible");
                m.dist[y] = *s;
                break;
            }
            case Logic::Coalition: {
                if (atoms.empty()) break;
                std::string why;
                auto s = coalition_solver(atoms, n, sig, why);
                if (!s) fail("coalition game construction failed (" + why + ")");
                m.games[y] = *s;
                break;
            }
        }
    }
    m.validate();
    if (auto err = check_coherent(m)) throw ExtractionError("model extraction: " + *err);
    return m;
}

std::optional<std::string> ModelExtractor::check_coherent(const CoalgebraModel& m) const {
    const ClosureIndex& cl = game_.closure();
    if (m.size() != carrier_.size()) return std::string("model size differs from the carrier");
    for (std::size_t y = 0; y < carrier_.size(); ++y) {
        for (FormulaId a : atoms_[y])
            if (!lifting_member(m, static_cast<State>(y), cl.formula(a).modality(), suc(y, cl[a].left)))
                return "incoherent at " + describe(y) + " for " + to_string(cl.formula(a));
        for (FormulaId f : game_.sequent(game_.info(carrier_[y]).sequent)) {
            if (cl[f].kind != Kind::Var) continue;
            const auto& name = cl.formula(f).name();
            auto it = m.valuation.find(name);
            bool in = it != m.valuation.end() && it->second[y];
            if (in == cl.formula(f).negated()) return "valuation incoherent at " + describe(y) + " for " + name;
        }
    }
    return std::nullopt;
}

CoalgebraModel extract_model(const TableauGame& game, const ParitySolution& sol) {
    ModelExtractor ex(game, sol);
    return ex.model();
}

}  // namespace colmu
