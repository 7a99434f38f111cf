#include "colmu/trace_automaton.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace colmu {

TraceRelation trace_relation(const ClosureIndex& cl, const IdSet& delta, const IdBlueprint& bp, std::size_t i) {
    TraceRelation r;
    auto diag = [&](FormulaId principal) {
        for (FormulaId c : delta)
            if (c != principal) r.emplace_back(c, c);
    };
    switch (bp.kind) {
        case BlueprintKind::Axiom: throw std::invalid_argument("trace_relation: an axiom has no conclusions");
        case BlueprintKind::And:
            if (i != 0) throw std::invalid_argument("trace_relation: conclusion index out of range");
            r.emplace_back(bp.principal, cl[bp.principal].left);
            r.emplace_back(bp.principal, cl[bp.principal].right);
            diag(bp.principal);
            break;
        case BlueprintKind::Or:
            if (i > 1) throw std::invalid_argument("trace_relation: conclusion index out of range");
            r.emplace_back(bp.principal, i == 0 ? cl[bp.principal].left : cl[bp.principal].right);
            diag(bp.principal);
            break;
        case BlueprintKind::Fix:
            if (i != 0) throw std::invalid_argument("trace_relation: conclusion index out of range");
            r.emplace_back(bp.principal, cl[bp.principal].left);
            diag(bp.principal);
            break;
        case BlueprintKind::Modal:
            if (i >= bp.rule->conclusions.size()) throw std::invalid_argument("trace_relation: conclusion index out of range");
            for (int j : bp.rule->conclusions[i]) r.emplace_back(bp.atoms[j], cl[bp.atoms[j]].left);
            break;
    }
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

std::vector<std::pair<Formula, Formula>> trace_relation(const TraceTile& tile) {
    const Blueprint& bp = tile.blueprint;
    std::vector<std::pair<Formula, Formula>> r;
    auto diag = [&](const Formula& principal) {
        for (const auto& c : tile.sequent)
            if (c != principal) r.emplace_back(c, c);
    };
    auto concl = conclusions(tile.sequent, bp);
    if (tile.conclusion >= concl.size()) throw std::invalid_argument("trace_relation: conclusion index out of range");
    switch (bp.kind) {
        case BlueprintKind::Axiom: break;
        case BlueprintKind::And:
            r.emplace_back(bp.principal, bp.principal.left());
            r.emplace_back(bp.principal, bp.principal.right());
            diag(bp.principal);
            break;
        case BlueprintKind::Or:
            r.emplace_back(bp.principal, tile.conclusion == 0 ? bp.principal.left() : bp.principal.right());
            diag(bp.principal);
            break;
        case BlueprintKind::Fix:
            r.emplace_back(bp.principal, unfold(bp.principal));
            diag(bp.principal);
            break;
        case BlueprintKind::Modal:
            for (int j : bp.rule->conclusions[tile.conclusion]) r.emplace_back(bp.atoms[j], bp.atoms[j].arg());
            break;
    }
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) {
        int c = compare(a.first, b.first);
        return c != 0 ? c < 0 : compare(a.second, b.second) < 0;
    });
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

TraceNpw TraceNpw::build(const ClosureIndex& cl) {
    TraceNpw a;
    a.closure_size = cl.size();
    a.priority.resize(cl.size() + 1);
    for (FormulaId i = 0; i < cl.size(); ++i) a.priority[i] = cl[i].priority + 1;
    a.priority[cl.size()] = 0;
    a.start = cl.root();
    return a;
}

// ---------------------------------------------------------------------------
// Piterman's compact Safra trees over the Buechi automaton obtained from the
// parity automaton by guessing the largest priority seen infinitely often.

TraceAutomaton::TraceAutomaton(const ClosureIndex& cl) : npw_(TraceNpw::build(cl)) {
    const std::size_t q = npw_.closure_size + 1;
    for (std::size_t s = 0; s < npw_.closure_size; ++s)
        if (npw_.priority[s] % 2 == 0) evens_.push_back(npw_.priority[s]);
    std::sort(evens_.begin(), evens_.end());
    evens_.erase(std::unique(evens_.begin(), evens_.end()), evens_.end());
    guess_index_.assign(q, -1);
    commit_index_.assign(q, std::vector<int>(evens_.size(), -1));
    for (std::size_t s = 0; s < q; ++s) {
        guess_index_[s] = static_cast<int>(nba_q_.size());
        nba_q_.push_back(s);
        nba_level_.push_back(-1);
    }
    for (std::size_t s = 0; s < npw_.closure_size; ++s)
        for (std::size_t l = 0; l < evens_.size(); ++l)
            if (npw_.priority[s] <= evens_[l]) {
                commit_index_[s][l] = static_cast<int>(nba_q_.size());
                nba_q_.push_back(s);
                nba_level_.push_back(static_cast<int>(l));
            }
    nba_states_ = nba_q_.size();
    accepting_.resize(nba_states_);
    for (std::size_t v = 0; v < nba_states_; ++v)
        if (nba_level_[v] >= 0 && npw_.priority[nba_q_[v]] == evens_[nba_level_[v]]) accepting_.set(v);

    Tree t;
    Node root{1, Bits(nba_states_), {}};
    root.label.set(guess_index_[npw_.initial()]);
    t.nodes.push_back(root);
    intern(std::move(t));
}

TraceAutomaton::Bits TraceAutomaton::post(const Bits& s, const std::vector<std::vector<FormulaId>>& adj) const {
    Bits out(nba_states_);
    for (auto v = s.find_first(); v != Bits::npos; v = s.find_next(v)) {
        std::size_t q = nba_q_[v];
        int level = nba_level_[v];
        auto visit = [&](FormulaId t) {
            int p = npw_.priority[t];
            if (level < 0) {
                out.set(guess_index_[t]);
                for (std::size_t l = 0; l < evens_.size(); ++l)
                    if (p <= evens_[l]) out.set(commit_index_[t][l]);
            } else if (p <= evens_[level]) {
                out.set(commit_index_[t][level]);
            }
        };
        if (q == npw_.initial()) {
            for (FormulaId a : npw_.start)
                for (FormulaId t : adj[a]) visit(t);
        } else {
            for (FormulaId t : adj[q]) visit(t);
        }
    }
    return out;
}

TraceAutomaton::Tree TraceAutomaton::successor(const Tree& src, const TraceRelation& rel) const {
    const int n = static_cast<int>(nba_states_);
    std::vector<std::vector<FormulaId>> adj(npw_.closure_size);
    for (const auto& [a, b] : rel) adj[a].push_back(b);

    std::vector<Node> nodes = src.nodes;
    std::vector<char> alive(nodes.size(), 1);
    // 1. move every label
    for (auto& v : nodes) v.label = post(v.label, adj);
    // 2. spawn youngest children carrying the accepting states
    const std::size_t old = nodes.size();
    int next_name = n + 1;
    for (std::size_t v = 0; v < old; ++v) {
        Bits acc = nodes[v].label & accepting_;
        if (acc.none()) continue;
        nodes.push_back(Node{next_name++, acc, {}});
        alive.push_back(1);
        nodes[v].children.push_back(static_cast<int>(nodes.size() - 1));
    }
    // 3. horizontal merge: a state stays only in the oldest branch holding it
    if (!nodes.empty()) {
        std::function<void(int, const Bits&)> prune = [&](int v, const Bits& forbidden) {
            nodes[v].label -= forbidden;
            Bits acc = forbidden;
            for (int c : nodes[v].children) {
                prune(c, acc);
                acc |= nodes[c].label;
            }
        };
        prune(0, Bits(nba_states_));
    }
    // 4. drop empty nodes
    int e = 0, f = 0;
    std::function<void(int)> kill = [&](int v) {
        alive[v] = 0;
        if (nodes[v].name <= n && (e == 0 || nodes[v].name < e)) e = nodes[v].name;
        for (int c : nodes[v].children) kill(c);
    };
    for (std::size_t v = 0; v < nodes.size(); ++v)
        if (alive[v] && nodes[v].label.none()) kill(static_cast<int>(v));
    // 5. vertical merge: a node covered by its children absorbs them
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (!alive[v]) continue;
        Bits u(nba_states_);
        bool any = false;
        for (int c : nodes[v].children)
            if (alive[c]) {
                u |= nodes[c].label;
                any = true;
            }
        if (!any || u != nodes[v].label) continue;
        for (int c : nodes[v].children)
            if (alive[c]) kill(c);
        if (nodes[v].name <= n && (f == 0 || nodes[v].name < f)) f = nodes[v].name;
    }
    // rebuild in preorder with compacted names
    Tree out;
    out.e = e;
    out.f = f;
    std::vector<int> names;
    for (std::size_t v = 0; v < nodes.size(); ++v)
        if (alive[v]) names.push_back(nodes[v].name);
    std::sort(names.begin(), names.end());
    auto rename = [&](int name) {
        return static_cast<int>(std::lower_bound(names.begin(), names.end(), name) - names.begin()) + 1;
    };
    if (!nodes.empty() && alive[0]) {
        std::function<int(int)> copy = [&](int v) {
            int idx = static_cast<int>(out.nodes.size());
            out.nodes.push_back(Node{rename(nodes[v].name), nodes[v].label, {}});
            for (int c : nodes[v].children)
                if (alive[c]) {
                    int ci = copy(c);
                    out.nodes[idx].children.push_back(ci);
                }
            return idx;
        };
        copy(0);
    }
    return out;
}

std::string TraceAutomaton::key(const Tree& t) const {
    std::ostringstream os;
    os << t.e << ',' << t.f << ':';
    std::function<void(int)> go = [&](int v) {
        std::string bits;
        boost::to_string(t.nodes[v].label, bits);
        os << '(' << t.nodes[v].name << ' ' << bits;
        for (int c : t.nodes[v].children) go(c);
        os << ')';
    };
    if (!t.nodes.empty()) go(0);
    return os.str();
}

TraceAutomaton::StateId TraceAutomaton::intern(Tree t) {
    std::string k = key(t);
    auto it = ids_.find(k);
    if (it != ids_.end()) return it->second;
    StateId id = static_cast<StateId>(trees_.size());
    // min-parity priority of the Buechi determinisation, complemented and
    // mirrored into a max-even priority
    const int n = static_cast<int>(nba_states_);
    int pd = 2 * n + 1;
    if (t.f != 0 && (t.e == 0 || t.f < t.e)) pd = 2 * t.f;
    else if (t.e != 0) pd = 2 * t.e - 1;
    prio_.push_back(2 * n + 3 - pd);
    trees_.push_back(std::move(t));
    ids_.emplace(std::move(k), id);
    return id;
}

TraceAutomaton::StateId TraceAutomaton::step(StateId a, const TraceRelation& rel) {
    std::lock_guard<std::mutex> lock(mu_);
    auto rit = rel_ids_.find(rel);
    std::uint32_t rid;
    if (rit == rel_ids_.end()) {
        rid = static_cast<std::uint32_t>(rel_ids_.size());
        rel_ids_.emplace(rel, rid);
    } else {
        rid = rit->second;
    }
    auto key = std::make_pair(a, rid);
    auto cit = cache_.find(key);
    if (cit != cache_.end()) return cit->second;
    StateId b = intern(successor(trees_.at(a), rel));
    cache_.emplace(key, b);
    return b;
}

int TraceAutomaton::priority(StateId a) const {
    std::lock_guard<std::mutex> lock(mu_);
    return prio_.at(a);
}

std::size_t TraceAutomaton::state_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return trees_.size();
}

std::string TraceAutomaton::describe(StateId a) const {
    std::lock_guard<std::mutex> lock(mu_);
    return key(trees_.at(a));
}

std::string TraceAutomaton::dump() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::ostringstream os;
    os << "states " << trees_.size() << " nba " << nba_states_ << "\n";
    for (StateId s = 0; s < trees_.size(); ++s) os << s << " prio " << prio_[s] << " " << key(trees_[s]) << "\n";
    for (const auto& [k, v] : cache_) os << k.first << " -r" << k.second << "-> " << v << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// lasso oracle

namespace {

// nodes: (formula, position); edges between consecutive positions.  Decides
// whether some reachable cycle has an odd maximum priority.
bool odd_cycle(std::size_t positions, std::size_t formulas, const std::vector<TraceRelation>& rels,
               const std::vector<FormulaId>& starts, const std::vector<int>& prio, std::size_t loop_to) {
    const std::size_t total = positions * formulas;
    std::vector<std::vector<std::size_t>> succ(total);
    for (std::size_t i = 0; i < positions; ++i) {
        std::size_t j = i + 1 == positions ? loop_to : i + 1;
        for (const auto& [a, b] : rels[i]) succ[i * formulas + a].push_back(j * formulas + b);
    }
    auto reach = [&](const std::vector<std::size_t>& from, const std::function<bool(std::size_t)>& ok) {
        std::vector<char> seen(total, 0);
        std::vector<std::size_t> stack;
        for (auto s : from)
            if (ok(s) && !seen[s]) {
                seen[s] = 1;
                stack.push_back(s);
            }
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            for (auto w : succ[v])
                if (!seen[w] && ok(w)) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        return seen;
    };
    std::vector<std::size_t> init;
    for (FormulaId a : starts) init.push_back(a);
    auto reachable = reach(init, [](std::size_t) { return true; });
    for (std::size_t v = 0; v < total; ++v) {
        if (!reachable[v]) continue;
        int p = prio[v % formulas];
        if (p % 2 == 0) continue;
        auto ok = [&](std::size_t w) { return prio[w % formulas] <= p; };
        auto back = reach(succ[v], ok);
        if (back[v]) return true;
    }
    return false;
}

}  // namespace

bool lasso_has_bad_trace(const ClosureIndex& cl, const std::vector<IdTile>& stem, const std::vector<IdTile>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("lasso: empty cycle");
    std::vector<IdTile> word = stem;
    word.insert(word.end(), cycle.begin(), cycle.end());
    std::vector<TraceRelation> rels;
    for (std::size_t i = 0; i < word.size(); ++i) {
        auto concl = conclusions(cl, word[i].sequent, word[i].blueprint);
        if (word[i].conclusion >= concl.size()) throw std::invalid_argument("lasso: conclusion index out of range");
        const IdSet& next = i + 1 < word.size() ? word[i + 1].sequent : cycle.front().sequent;
        if (concl[word[i].conclusion] != next) throw std::invalid_argument("lasso: tiles do not chain");
        rels.push_back(trace_relation(cl, word[i].sequent, word[i].blueprint, word[i].conclusion));
    }
    std::vector<int> prio(cl.size());
    for (FormulaId i = 0; i < cl.size(); ++i) prio[i] = cl[i].priority;
    return odd_cycle(word.size(), cl.size(), rels, word.front().sequent, prio, stem.size());
}

bool lasso_has_bad_trace(const std::vector<TraceTile>& stem, const std::vector<TraceTile>& cycle, const ParityMap& omega) {
    if (cycle.empty()) throw std::invalid_argument("lasso: empty cycle");
    std::vector<TraceTile> word = stem;
    word.insert(word.end(), cycle.begin(), cycle.end());
    // number the formulas occurring in the lasso
    std::vector<Formula> fs;
    auto id = [&](const Formula& f) {
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (fs[i] == f) return static_cast<FormulaId>(i);
        fs.push_back(f);
        return static_cast<FormulaId>(fs.size() - 1);
    };
    std::vector<TraceRelation> rels;
    for (std::size_t i = 0; i < word.size(); ++i) {
        auto concl = conclusions(word[i].sequent, word[i].blueprint);
        if (word[i].conclusion >= concl.size()) throw std::invalid_argument("lasso: conclusion index out of range");
        const Sequent& next = i + 1 < word.size() ? word[i + 1].sequent : cycle.front().sequent;
        if (!(concl[word[i].conclusion] == next)) throw std::invalid_argument("lasso: tiles do not chain");
        for (const auto& f : word[i].sequent) id(f);
    }
    for (const auto& t : word) {
        TraceRelation r;
        for (const auto& [a, b] : trace_relation(t)) r.emplace_back(id(a), id(b));
        rels.push_back(std::move(r));
    }
    std::vector<int> prio;
    for (const auto& f : fs) prio.push_back(omega(f));
    std::vector<FormulaId> starts;
    for (const auto& f : word.front().sequent) starts.push_back(id(f));
    return odd_cycle(word.size(), fs.size(), rels, starts, prio, stem.size());
}

}  // namespace colmu
