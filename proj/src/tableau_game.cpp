#include "colmu/tableau_game.hpp"

#include "colmu/parser.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <functional>
#include <set>
#include <sstream>

namespace colmu {

using nlohmann::json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Order- and parity-preserving renumbering onto 0..d.
int compress_priorities(std::vector<int>& prio) {
    std::vector<int> vals(prio.begin(), prio.end());
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::map<int, int> to;
    int c = -1;
    for (int v : vals) {
        if (c < 0) c = v % 2;
        else if ((c - v) % 2 != 0) ++c;
        to[v] = c;
    }
    for (int& p : prio) p = to[p];
    return static_cast<int>(vals.size());
}

}  // namespace

TableauGame::TableauGame(const Sequent& gamma, const Signature& sig, const GameOptions& opts)
    : sig_(sig), opts_(opts) {
    if (auto err = check_clean_guarded(gamma)) throw FormulaError(*err);
    cl_ = std::make_unique<ClosureIndex>(gamma);
    dta_ = std::make_unique<TraceAutomaton>(*cl_);
    build();
}

const IdBlueprint& TableauGame::blueprint(Position p) const {
    const Info& i = info_[p];
    if (i.blueprint < 0) throw std::invalid_argument("blueprint: not an exists position");
    return seqs_[i.sequent].bps[i.blueprint];
}

std::uint32_t TableauGame::intern(const IdSet& s) {
    auto [it, fresh] = seq_ids_.emplace(s, static_cast<std::uint32_t>(seqs_.size()));
    if (fresh) seqs_.push_back(SeqData{s, false, {}, {}, {}});
    return it->second;
}

void TableauGame::expand(std::uint32_t s) {
    if (seqs_[s].expanded) return;
    IdSet ids = seqs_[s].ids;
    auto all = enumerate_blueprints(*cl_, ids, sig_, opts_.bounds);
    std::vector<IdBlueprint> bps;
    for (auto& bp : all)
        if (bp.kind == BlueprintKind::Axiom) {
            bps.push_back(bp);
            break;
        }
    if (bps.empty()) bps = std::move(all);
    std::vector<std::vector<std::uint32_t>> concl;
    std::vector<std::vector<TraceRelation>> rel;
    for (const auto& bp : bps) {
        auto cs = conclusions(*cl_, ids, bp);
        std::vector<std::uint32_t> v;
        std::vector<TraceRelation> r;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            v.push_back(intern(cs[i]));
            r.push_back(trace_relation(*cl_, ids, bp, i));
        }
        concl.push_back(std::move(v));
        rel.push_back(std::move(r));
    }
    SeqData& d = seqs_[s];
    d.bps = std::move(bps);
    d.concl = std::move(concl);
    d.relation = std::move(rel);
    d.expanded = true;
    stats_.max_blueprints = std::max(stats_.max_blueprints, d.bps.size());
}

Position TableauGame::forall(std::uint32_t s, StateId a, std::vector<Position>& todo) {
    auto [it, fresh] = forall_ids_.emplace(Key{s, a}, static_cast<Position>(arena_.size()));
    if (!fresh) return it->second;
    if (arena_.size() >= opts_.max_positions)
        throw CeilingExceeded("tableau game: more than " + std::to_string(opts_.max_positions) + " positions");
    int p = dta_->priority(a);
    arena_.add(Player::Forall, p);
    info_.push_back({s, a, -1});
    raw_priority_.push_back(p);
    todo.push_back(it->second);
    ++stats_.forall_positions;
    return it->second;
}

void TableauGame::build() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Position> todo;
    forall(intern(cl_->root()), dta_->initial(), todo);
    while (!todo.empty()) {
        Position v = todo.back();
        todo.pop_back();
        std::uint32_t s = info_[v].sequent;
        StateId a = info_[v].state;
        expand(s);
        std::size_t nb = seqs_[s].bps.size();
        for (std::size_t b = 0; b < nb; ++b) {
            if (arena_.size() >= opts_.max_positions)
                throw CeilingExceeded("tableau game: more than " + std::to_string(opts_.max_positions) + " positions");
            Position e = arena_.add(Player::Exists, 0);
            info_.push_back({s, a, static_cast<int>(b)});
            raw_priority_.push_back(0);
            ++stats_.exists_positions;
            arena_.add_move(v, e);
            std::size_t nc = seqs_[s].concl[b].size();
            for (std::size_t i = 0; i < nc; ++i) {
                StateId a2 = dta_->step(a, seqs_[s].relation[b][i]);
                Position w = forall(seqs_[s].concl[b][i], a2, todo);
                arena_.add_move(e, w);
            }
        }
    }
    stats_.sequents = seqs_.size();
    stats_.automaton_states = dta_->state_count();
    stats_.priorities = compress_priorities(arena_.priority);
    stats_.build_seconds = seconds_since(t0);
}

double TableauGame::size_bound() const {
    return std::pow(2.0, static_cast<double>(cl_->size())) * static_cast<double>(dta_->state_count()) *
           static_cast<double>(1 + stats_.max_blueprints);
}

// ---------------------------------------------------------------------------

Sequent prepare_root(const Formula& a) {
    Sequent g{make_clean(a)};
    if (auto err = check_clean_guarded(g)) throw FormulaError(*err);
    return g;
}

SatResult decide_sat(const Sequent& gamma, const Signature& sig, const GameOptions& opts) {
    SatResult res;
    res.game = std::make_shared<TableauGame>(gamma, sig, opts);
    auto t0 = std::chrono::steady_clock::now();
    res.solution = solve(res.game->arena());
    res.game->stats().solve_seconds = seconds_since(t0);
    res.satisfiable = res.solution.winner[res.game->root()] == Player::Exists;
    if (!res.satisfiable) res.tableau = extract_tableau(*res.game, res.solution);
    return res;
}

SatResult decide_sat(const Formula& a, const Signature& sig, const GameOptions& opts) {
    return decide_sat(prepare_root(a), sig, opts);
}

Tableau extract_tableau(const TableauGame& game, const ParitySolution& sol) {
    const auto& arena = game.arena();
    if (sol.winner.size() != arena.size() || sol.winner[game.root()] != Player::Forall)
        throw std::logic_error("extract_tableau: forall does not win the root");
    const ClosureIndex& cl = game.closure();
    Tableau t;
    std::map<Position, std::size_t> node_of;
    std::deque<Position> queue;
    auto node = [&](Position v) {
        auto [it, fresh] = node_of.emplace(v, t.nodes.size());
        if (fresh) {
            std::vector<Formula> fs;
            for (FormulaId f : game.sequent(game.info(v).sequent)) fs.push_back(cl.formula(f));
            t.nodes.push_back({Sequent(fs), std::nullopt});
            queue.push_back(v);
        }
        return it->second;
    };
    t.root = node(game.root());
    while (!queue.empty()) {
        Position v = queue.front();
        queue.pop_front();
        std::size_t n = node_of[v];
        if (sol.winner[v] != Player::Forall) throw std::logic_error("extract_tableau: strategy leaves the winning region");
        Position e = sol.strategy[v];
        if (e == kNoPosition) throw std::logic_error("extract_tableau: no strategy move");
        t.nodes[n].annotation = to_blueprint(cl, game.blueprint(e));
        const auto& mv = arena.moves[e];
        for (std::size_t i = 0; i < mv.size(); ++i) {
            std::size_t m = node(mv[i]);
            t.edges.push_back({n, m, i});
        }
    }
    return t;
}

// ---------------------------------------------------------------------------
// verification

namespace {

std::string node_text(const Tableau& t, std::size_t n) { return "node " + std::to_string(n) + " " + to_string(t.nodes[n].label); }

// Rebuilds the annotated rule from its own data; conclusions come from the rebuild.
std::optional<std::string> check_annotation(const Sequent& label, const Blueprint& bp, const Signature& sig,
                                            Blueprint& rebuilt, std::vector<Sequent>& concl) {
    rebuilt = bp;
    auto has = [&](const Formula& f) { return f && label.contains(f); };
    switch (bp.kind) {
        case BlueprintKind::Axiom:
            if (!has(bp.principal) || !has(bp.partner) || negate(bp.principal) != bp.partner)
                return "axiom pair not in label";
            break;
        case BlueprintKind::And:
        case BlueprintKind::Or:
        case BlueprintKind::Fix: {
            if (!has(bp.principal)) return "principal formula not in label";
            Kind k = bp.principal.kind();
            bool ok = bp.kind == BlueprintKind::And ? k == Kind::And
                      : bp.kind == BlueprintKind::Or ? k == Kind::Or
                                                     : (k == Kind::Mu || k == Kind::Nu);
            if (!ok) return "principal formula does not match the rule";
            break;
        }
        case BlueprintKind::Modal: {
            if (!bp.rule) return "modal annotation without rule";
            std::vector<Modality> prem;
            std::set<Formula> seen;
            for (const auto& a : bp.atoms) {
                if (!has(a) || !a.is_modal()) return "rule atom not a modal member of the label";
                if (!seen.insert(a).second) return "rule atoms not distinct";
                prem.push_back(a.modality());
            }
            const OneStepRule& r = *bp.rule;
            if (prem.size() != r.premise.size()) return "rule premise size mismatch";
            for (std::size_t i = 0; i < prem.size(); ++i)
                if (!(prem[i] == r.premise[i])) return "rule premise does not match the atoms";
            std::string why;
            auto inst = instantiate_rule(r.schema, prem, r.split, r.r, r.s, r.k, sig, &why);
            if (!inst) return "not a rule instance: " + why;
            rebuilt.rule = std::make_shared<OneStepRule>(*inst);
            concl = conclusions(label, rebuilt);
            return std::nullopt;
        }
    }
    concl = conclusions(label, bp);
    return std::nullopt;
}

// Iterative Tarjan over the vertices allowed by `keep`.
std::vector<int> scc_ids(const std::vector<std::vector<std::size_t>>& adj, const std::vector<bool>& keep) {
    std::size_t n = adj.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on(n, false);
    std::vector<std::size_t> stack;
    int counter = 0, comps = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (!keep[s] || index[s] >= 0) continue;
        std::vector<std::pair<std::size_t, std::size_t>> call{{s, 0}};
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on[s] = true;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < adj[v].size()) {
                std::size_t w = adj[v][i++];
                if (!keep[w]) continue;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on[w] = true;
                    call.push_back({w, 0});
                } else if (on[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on[w] = false;
                    comp[w] = comps;
                } while (w != v);
                ++comps;
            }
            std::size_t done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

// Shortest path from `from` to `to` inside the allowed vertices (from != to or a cycle).
std::vector<std::size_t> find_path(const std::vector<std::vector<std::size_t>>& adj, std::size_t from, std::size_t to,
                                   const std::function<bool(std::size_t)>& allowed) {
    std::vector<std::size_t> parent(adj.size(), SIZE_MAX);
    std::deque<std::size_t> q;
    for (std::size_t w : adj[from])
        if (allowed(w) && parent[w] == SIZE_MAX) {
            parent[w] = from;
            q.push_back(w);
        }
    while (!q.empty() && parent[to] == SIZE_MAX) {
        std::size_t v = q.front();
        q.pop_front();
        for (std::size_t w : adj[v])
            if (allowed(w) && parent[w] == SIZE_MAX) {
                parent[w] = v;
                q.push_back(w);
            }
    }
    std::vector<std::size_t> path;
    if (parent[to] == SIZE_MAX) return path;
    for (std::size_t v = to;; v = parent[v]) {
        path.push_back(v);
        if (parent[v] == from) break;
    }
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::optional<std::string> verify_closed(const Tableau& t, const Sequent& gamma, const Signature& sig) {
    if (auto err = check_clean_guarded(gamma)) return "root sequent not clean and guarded: " + *err;
    std::size_t n = t.nodes.size();
    if (t.root >= n) return std::string("root is not a node");
    if (!(t.nodes[t.root].label == gamma)) return "root label " + to_string(t.nodes[t.root].label) + " is not " + to_string(gamma);
    ClosureIndex cl(gamma);

    std::vector<std::vector<std::vector<std::size_t>>> succ(n);  // per node and conclusion
    std::vector<std::vector<Sequent>> concl(n);
    std::vector<Blueprint> rule(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = t.nodes[i];
        for (const auto& f : node.label)
            if (!cl.find(f)) return node_text(t, i) + ": " + to_string(f) + " is not in the closure";
        if (!node.annotation) continue;
        if (auto err = check_annotation(node.label, *node.annotation, sig, rule[i], concl[i])) return node_text(t, i) + ": " + *err;
        succ[i].resize(concl[i].size());
    }
    for (const auto& e : t.edges) {
        if (e.from >= n || e.to >= n) return std::string("edge endpoint is not a node");
        if (!t.nodes[e.from].annotation) return node_text(t, e.from) + ": successors without annotation";
        if (e.conclusion >= concl[e.from].size())
            return node_text(t, e.from) + ": edge conclusion index " + std::to_string(e.conclusion) + " out of range";
        if (!(t.nodes[e.to].label == concl[e.from][e.conclusion]))
            return node_text(t, e.from) + ": conclusion " + std::to_string(e.conclusion) + " should be " +
                   to_string(concl[e.from][e.conclusion]) + ", edge leads to " + node_text(t, e.to);
        succ[e.from][e.conclusion].push_back(e.to);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = t.nodes[i];
        if (!node.annotation) {
            if (some_rule_applies(node.label, sig)) return node_text(t, i) + ": a rule applies but no annotation is given";
            return node_text(t, i) + ": open leaf (no rule applies and it is not an axiom)";
        }
        for (std::size_t c = 0; c < succ[i].size(); ++c)
            if (succ[i][c].empty()) return node_text(t, i) + ": no edge for conclusion " + std::to_string(c);
    }

    // product with the trace automaton, reachable part
    TraceAutomaton dta(cl);
    std::vector<IdSet> ids(n);
    std::vector<IdBlueprint> ibp(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& f : t.nodes[i].label) ids[i].push_back(cl.id(f));
        std::sort(ids[i].begin(), ids[i].end());
        auto b = to_id_blueprint(cl, rule[i]);
        if (!b) return node_text(t, i) + ": annotation mentions formulas outside the closure";
        ibp[i] = *b;
    }
    std::map<std::pair<std::size_t, TraceAutomaton::StateId>, std::size_t> pid;
    std::vector<std::pair<std::size_t, TraceAutomaton::StateId>> pstate;
    std::vector<std::vector<std::size_t>> padj;
    std::deque<std::size_t> q;
    auto product = [&](std::size_t node, TraceAutomaton::StateId a) {
        auto [it, fresh] = pid.emplace(std::make_pair(node, a), pstate.size());
        if (fresh) {
            pstate.push_back({node, a});
            padj.emplace_back();
            q.push_back(it->second);
        }
        return it->second;
    };
    product(t.root, dta.initial());
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        auto [node, a] = pstate[v];
        for (std::size_t c = 0; c < succ[node].size(); ++c) {
            auto a2 = dta.step(a, trace_relation(cl, ids[node], ibp[node], c));
            for (std::size_t m : succ[node][c]) {
                std::size_t w = product(m, a2);
                padj[v].push_back(w);
            }
        }
    }
    // a reachable cycle whose largest priority is even is an infinite path without bad trace
    std::vector<int> prio(pstate.size());
    std::set<int> evens;
    for (std::size_t v = 0; v < pstate.size(); ++v) {
        prio[v] = dta.priority(pstate[v].second);
        if (prio[v] % 2 == 0) evens.insert(prio[v]);
    }
    for (int p : evens) {
        std::vector<bool> keep(pstate.size());
        for (std::size_t v = 0; v < pstate.size(); ++v) keep[v] = prio[v] <= p;
        auto comp = scc_ids(padj, keep);
        for (std::size_t v = 0; v < pstate.size(); ++v) {
            if (prio[v] != p) continue;
            auto cyc = find_path(padj, v, v, [&](std::size_t w) { return keep[w] && comp[w] == comp[v]; });
            if (cyc.empty()) continue;
            auto stem = v == 0 ? std::vector<std::size_t>{0}
                               : find_path(padj, 0, v, [](std::size_t) { return true; });
            std::ostringstream os;
            os << "infinite path without bad trace: nodes";
            for (std::size_t i = 0; i + 1 < stem.size(); ++i) os << ' ' << pstate[stem[i]].first;
            os << " (";
            for (std::size_t i = 0; i + 1 < cyc.size(); ++i) os << (i ? " " : "") << pstate[cyc[i]].first;
            os << ")^omega";
            return os.str();
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json blueprint_json(const Blueprint& bp) {
    json j;
    switch (bp.kind) {
        case BlueprintKind::Axiom:
            j["rule"] = "axiom";
            j["principal"] = to_string(bp.principal);
            j["partner"] = to_string(bp.partner);
            break;
        case BlueprintKind::And: j["rule"] = "and"; j["principal"] = to_string(bp.principal); break;
        case BlueprintKind::Or: j["rule"] = "or"; j["principal"] = to_string(bp.principal); break;
        case BlueprintKind::Fix: j["rule"] = "fix"; j["principal"] = to_string(bp.principal); break;
        case BlueprintKind::Modal: {
            j["rule"] = "modal";
            j["schema"] = schema_name(bp.rule->schema);
            j["split"] = bp.rule->split;
            json atoms = json::array();
            for (const auto& a : bp.atoms) atoms.push_back(to_string(a));
            j["atoms"] = atoms;
            j["code"] = bp.rule->code();
            break;
        }
    }
    return j;
}

[[noreturn]] void bad(const std::string& msg) { throw TableauFormatError("tableau: " + msg); }

Formula formula_field(const json& j, const char* key, const Signature& sig) {
    if (!j.contains(key) || !j[key].is_string()) bad(std::string("missing formula field '") + key + "'");
    try {
        return parse(j[key].get<std::string>(), sig);
    } catch (const std::exception& e) {
        bad(std::string("field '") + key + "': " + e.what());
    }
}

std::int64_t int_text(const json& j) {
    if (!j.is_string()) bad("code entries must be strings");
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        bad("bad integer '" + s + "' in code");
    }
    if (used != s.size()) bad("bad integer '" + s + "' in code");
    return v;
}

Blueprint blueprint_from(const json& j, const Signature& sig) {
    if (!j.is_object() || !j.contains("rule") || !j["rule"].is_string()) bad("annotation needs a 'rule'");
    std::string r = j["rule"];
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }))
                bad("unknown annotation field '" + it.key() + "'");
    };
    Blueprint bp{};
    if (r == "axiom") {
        allow({"rule", "principal", "partner"});
        bp.kind = BlueprintKind::Axiom;
        bp.principal = formula_field(j, "principal", sig);
        bp.partner = formula_field(j, "partner", sig);
    } else if (r == "and" || r == "or" || r == "fix") {
        allow({"rule", "principal"});
        bp.kind = r == "and" ? BlueprintKind::And : r == "or" ? BlueprintKind::Or : BlueprintKind::Fix;
        bp.principal = formula_field(j, "principal", sig);
    } else if (r == "modal") {
        allow({"rule", "schema", "split", "atoms", "code"});
        bp.kind = BlueprintKind::Modal;
        if (!j.contains("schema") || !j["schema"].is_string()) bad("modal annotation needs a 'schema'");
        auto schema = parse_schema(j["schema"]);
        if (!schema) bad("unknown schema " + j["schema"].get<std::string>());
        if (!j.contains("split") || !j["split"].is_number_integer()) bad("modal annotation needs an integer 'split'");
        if (!j.contains("atoms") || !j["atoms"].is_array()) bad("modal annotation needs 'atoms'");
        auto rule = std::make_shared<OneStepRule>();
        rule->schema = *schema;
        rule->split = j["split"].get<int>();
        for (const auto& a : j["atoms"]) {
            if (!a.is_string()) bad("atoms must be formula strings");
            Formula f;
            try {
                f = parse(a.get<std::string>(), sig);
            } catch (const std::exception& e) {
                bad(std::string("atom: ") + e.what());
            }
            if (!f.is_modal()) bad("atom " + a.get<std::string>() + " is not modal");
            bp.atoms.push_back(f);
            rule->premise.push_back(f.modality());
        }
        std::vector<std::string> given;
        if (j.contains("code")) {
            if (!j["code"].is_array()) bad("'code' must be an array");
            for (const auto& c : j["code"]) {
                if (!c.is_string()) bad("code entries must be strings");
                given.push_back(c);
            }
        }
        if (*schema == Schema::G || *schema == Schema::P) {
            int n = rule->split;
            std::size_t m = rule->premise.size() - std::min<std::size_t>(rule->premise.size(), std::max(n, 0));
            if (n < 0 || given.size() != 2 * static_cast<std::size_t>(n) + 2 * m + 1) bad("code has the wrong length");
            for (int i = 0; i < n; ++i) rule->r.push_back(int_text(j["code"][2 * i]));
            for (std::size_t i = 0; i < m; ++i) rule->s.push_back(int_text(j["code"][2 * n + 2 * i]));
            rule->k = int_text(j["code"].back());
            if (rule->code() != given) bad("code indices do not match the atoms");
        } else if (!given.empty()) {
            bad("code is only used by the G and P schemas");
        }
        bp.rule = rule;
    } else {
        bad("unknown rule '" + r + "'");
    }
    return bp;
}

}  // namespace

std::string tableau_to_json(const Tableau& t) {
    json nodes = json::array();
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        json n;
        n["id"] = i;
        json label = json::array();
        for (const auto& f : t.nodes[i].label) label.push_back(to_string(f));
        n["label"] = label;
        n["annotation"] = t.nodes[i].annotation ? blueprint_json(*t.nodes[i].annotation) : json(nullptr);
        nodes.push_back(n);
    }
    json edges = json::array();
    for (const auto& e : t.edges) edges.push_back({{"from", e.from}, {"to", e.to}, {"conclusionIndex", e.conclusion}});
    json j{{"nodes", nodes}, {"edges", edges}, {"root", t.root}};
    return j.dump(2) + "\n";
}

Tableau tableau_from_json(const std::string& text, const Signature& sig) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) bad("top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "nodes" && it.key() != "edges" && it.key() != "root") bad("unknown field '" + it.key() + "'");
    if (!j.contains("nodes") || !j["nodes"].is_array()) bad("missing 'nodes'");
    if (!j.contains("edges") || !j["edges"].is_array()) bad("missing 'edges'");
    if (!j.contains("root") || !j["root"].is_number_unsigned()) bad("missing 'root'");
    Tableau t;
    std::map<std::uint64_t, std::size_t> index;
    for (const auto& n : j["nodes"]) {
        if (!n.is_object() || !n.contains("id") || !n["id"].is_number_unsigned()) bad("node needs an unsigned 'id'");
        for (auto it = n.begin(); it != n.end(); ++it)
            if (it.key() != "id" && it.key() != "label" && it.key() != "annotation")
                bad("unknown node field '" + it.key() + "'");
        std::uint64_t id = n["id"];
        if (!index.emplace(id, t.nodes.size()).second) bad("duplicate node id " + std::to_string(id));
        if (!n.contains("label") || !n["label"].is_array()) bad("node needs a 'label' list");
        std::vector<Formula> fs;
        for (const auto& f : n["label"]) {
            if (!f.is_string()) bad("labels are formula strings");
            try {
                fs.push_back(parse(f.get<std::string>(), sig));
            } catch (const std::exception& e) {
                bad(std::string("label: ") + e.what());
            }
        }
        TableauNode node{Sequent(fs), std::nullopt};
        if (n.contains("annotation") && !n["annotation"].is_null()) node.annotation = blueprint_from(n["annotation"], sig);
        t.nodes.push_back(std::move(node));
    }
    auto lookup = [&](const json& v) {
        if (!v.is_number_unsigned()) bad("node references must be unsigned ids");
        auto it = index.find(v.get<std::uint64_t>());
        if (it == index.end()) bad("unknown node id " + v.dump());
        return it->second;
    };
    for (const auto& e : j["edges"]) {
        if (!e.is_object() || !e.contains("from") || !e.contains("to") || !e.contains("conclusionIndex"))
            bad("edges need 'from', 'to' and 'conclusionIndex'");
        if (e.size() != 3) bad("unknown edge field");
        if (!e["conclusionIndex"].is_number_unsigned()) bad("conclusionIndex must be unsigned");
        t.edges.push_back({lookup(e["from"]), lookup(e["to"]), e["conclusionIndex"].get<std::size_t>()});
    }
    t.root = lookup(j["root"]);
    return t;
}

}  // namespace colmu
