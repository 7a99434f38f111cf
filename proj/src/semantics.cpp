#include "colmu/semantics.hpp"

#include "json.hpp"

#include <deque>
#include <set>
#include <sstream>

namespace colmu {

using nlohmann::json;

std::size_t GameForm::profiles() const {
    std::size_t n = 1;
    for (int s : sizes) n *= static_cast<std::size_t>(s);
    return n;
}

std::vector<int> GameForm::profile(std::size_t index) const {
    std::vector<int> p(sizes.size());
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        p[a] = static_cast<int>(index % sizes[a]);
        index /= sizes[a];
    }
    return p;
}

std::size_t GameForm::index(const std::vector<int>& p) const {
    std::size_t idx = 0, stride = 1;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
        idx += stride * static_cast<std::size_t>(p[a]);
        stride *= sizes[a];
    }
    return idx;
}

State CoalgebraModel::add_state(const std::string& name) {
    State s = static_cast<State>(states.size());
    states.push_back(name);
    for (auto& [v, set] : valuation) set.resize(states.size());
    for (auto& gens : neighborhoods)
        for (auto& g : gens) g.resize(states.size());
    successors.emplace_back();
    weights.emplace_back();
    dist.emplace_back();
    neighborhoods.emplace_back();
    games.push_back(GameForm{std::vector<int>(sig.logic == Logic::Coalition ? sig.agents : 0, 1), {s}});
    return s;
}

std::optional<State> CoalgebraModel::find_state(const std::string& name) const {
    for (State s = 0; s < states.size(); ++s)
        if (states[s] == name) return s;
    return std::nullopt;
}

void CoalgebraModel::validate() const {
    const std::size_t n = size();
    auto fail = [](const std::string& m) { throw std::invalid_argument("model: " + m); };
    std::set<std::string> names(states.begin(), states.end());
    if (names.size() != n) fail("duplicate state names");
    if (root && *root >= n) fail("root out of range");
    for (const auto& [v, s] : valuation)
        if (s.size() != n) fail("valuation of " + v + " has the wrong width");
    switch (sig.logic) {
        case Logic::Kripke:
            if (successors.size() != n) fail("successor table size");
            for (const auto& row : successors)
                for (State t : row)
                    if (t >= n) fail("successor out of range");
            break;
        case Logic::Graded:
            if (weights.size() != n) fail("weight table size");
            for (const auto& row : weights)
                for (const auto& [t, w] : row)
                    if (t >= n || w < 0) fail("bad weight entry");
            break;
        case Logic::Probabilistic:
            if (dist.size() != n) fail("distribution table size");
            for (State s = 0; s < n; ++s) {
                Rational sum = 0;
                for (const auto& [t, p] : dist[s]) {
                    if (t >= n || p < 0 || p > 1) fail("bad probability entry");
                    sum += p;
                }
                if (sum != 1) fail("distribution at " + states[s] + " sums to " + format_rational(sum));
            }
            break;
        case Logic::Monotone:
            if (neighborhoods.size() != n) fail("neighbourhood table size");
            for (State s = 0; s < n; ++s) {
                const auto& g = neighborhoods[s];
                for (std::size_t i = 0; i < g.size(); ++i) {
                    if (g[i].size() != n) fail("generator width");
                    for (std::size_t j = 0; j < g.size(); ++j)
                        if (i != j && g[i].is_subset_of(g[j])) fail("generators at " + states[s] + " are not an antichain");
                }
            }
            break;
        case Logic::Coalition:
            if (games.size() != n) fail("game table size");
            for (State s = 0; s < n; ++s) {
                const auto& g = games[s];
                if (static_cast<int>(g.sizes.size()) != sig.agents) fail("strategy sizes at " + states[s]);
                for (int k : g.sizes)
                    if (k < 1) fail("empty strategy set at " + states[s]);
                if (g.outcome.size() != g.profiles()) fail("outcome function at " + states[s] + " is not total");
                for (State t : g.outcome)
                    if (t >= n) fail("outcome out of range");
            }
            break;
    }
}

// ---------------------------------------------------------------------------

namespace {

bool plain_member(const CoalgebraModel& m, State x, const Modality& op, const StateSet& u) {
    switch (m.sig.logic) {
        case Logic::Kripke:
            for (State t : m.successors[x])
                if (!u[t]) return false;
            return true;
        case Logic::Graded: {
            std::int64_t sum = 0;
            for (const auto& [t, w] : m.weights[x])
                if (u[t]) sum += w;
            return sum > op.grade;
        }
        case Logic::Probabilistic: {
            Rational sum = 0;
            for (const auto& [t, p] : m.dist[x])
                if (u[t]) sum += p;
            return sum >= op.prob;
        }
        case Logic::Monotone:
            for (const auto& g : m.neighborhoods[x])
                if (g.is_subset_of(u)) return true;
            return false;
        case Logic::Coalition: {
            const GameForm& g = m.games[x];
            const int agents = static_cast<int>(g.sizes.size());
            // enumerate choices of C, then all completions
            std::vector<int> in_c, out_c;
            for (int a = 0; a < agents; ++a) (op.coalition & (1u << a) ? in_c : out_c).push_back(a);
            std::vector<int> prof(agents, 0);
            std::function<bool(std::size_t)> all_out = [&](std::size_t i) -> bool {
                if (i == out_c.size()) return u[g.outcome[g.index(prof)]];
                for (int s = 0; s < g.sizes[out_c[i]]; ++s) {
                    prof[out_c[i]] = s;
                    if (!all_out(i + 1)) return false;
                }
                return true;
            };
            std::function<bool(std::size_t)> some_in = [&](std::size_t i) -> bool {
                if (i == in_c.size()) return all_out(0);
                for (int s = 0; s < g.sizes[in_c[i]]; ++s) {
                    prof[in_c[i]] = s;
                    if (some_in(i + 1)) return true;
                }
                return false;
            };
            return some_in(0);
        }
    }
    return false;
}

class Evaluator {
public:
    explicit Evaluator(const CoalgebraModel& m) : m_(m) {}

    StateSet run(const Formula& f) {
        switch (f.kind()) {
            case Kind::Var: {
                auto e = env_.find(f.name());
                if (e != env_.end()) {
                    if (f.negated()) throw SemanticsError("negated bound variable " + f.name());
                    return e->second;
                }
                auto v = m_.valuation.find(f.name());
                if (v == m_.valuation.end()) throw SemanticsError("uncovered free variable " + f.name());
                return f.negated() ? ~v->second : v->second;
            }
            case Kind::Or: return run(f.left()) | run(f.right());
            case Kind::And: return run(f.left()) & run(f.right());
            case Kind::Modal: {
                StateSet u = run(f.arg());
                StateSet out = m_.empty_set();
                for (State x = 0; x < m_.size(); ++x) out[x] = lifting_member(m_, x, f.modality(), u);
                return out;
            }
            case Kind::Mu:
            case Kind::Nu: {
                StateSet cur = f.kind() == Kind::Mu ? m_.empty_set() : m_.full_set();
                auto saved = env_.find(f.name()) != env_.end() ? std::optional<StateSet>(env_[f.name()]) : std::nullopt;
                for (;;) {
                    env_[f.name()] = cur;
                    StateSet next = run(f.body());
                    if (next == cur) break;
                    cur = std::move(next);
                }
                if (saved) env_[f.name()] = *saved;
                else env_.erase(f.name());
                return cur;
            }
        }
        return m_.empty_set();
    }

private:
    const CoalgebraModel& m_;
    std::map<std::string, StateSet> env_;
};

}  // namespace

bool lifting_member(const CoalgebraModel& m, State x, const Modality& op, const StateSet& u) {
    if (op.logic != m.sig.logic) throw SemanticsError("modality " + op.to_string() + " does not belong to the model's logic");
    if (x >= m.size() || u.size() != m.size()) throw SemanticsError("lifting_member: argument width mismatch");
    if (!op.dual) return plain_member(m, x, op, u);
    return !plain_member(m, x, op, ~u);
}

StateSet eval(const CoalgebraModel& m, const Formula& a) { return Evaluator(m).run(a); }

bool satisfies(const CoalgebraModel& m, State x, const Formula& a) { return eval(m, a)[x]; }

// ---------------------------------------------------------------------------

McGame build_mc_game(const CoalgebraModel& m, const ClosureIndex& cl, FormulaId start, State x0, std::size_t state_cap) {
    if (m.size() > state_cap) throw SemanticsError("model has more states than the game cap");
    if (m.size() > 20) throw SemanticsError("model too large for the game");
    McGame g;
    std::map<std::pair<FormulaId, unsigned long>, Position> choice;
    std::deque<std::pair<FormulaId, State>> todo;
    auto at = [&](FormulaId f, State x) {
        auto key = std::make_pair(f, x);
        auto it = g.formula_positions.find(key);
        if (it != g.formula_positions.end()) return it->second;
        Position p = g.arena.add(Player::Exists, cl[f].priority);
        g.formula_positions.emplace(key, p);
        todo.emplace_back(f, x);
        return p;
    };
    g.arena.initial = at(start, x0);
    const unsigned long subsets = 1ul << m.size();
    while (!todo.empty()) {
        auto [f, x] = todo.front();
        todo.pop_front();
        Position p = g.formula_positions.at({f, x});
        const ClosureEntry& e = cl[f];
        const Formula& a = e.formula;
        switch (e.kind) {
            case Kind::Var: {
                auto v = m.valuation.find(a.name());
                bool in = v != m.valuation.end() && v->second[x];
                if (a.negated()) in = !in;
                g.arena.owner[p] = in ? Player::Forall : Player::Exists;
                break;
            }
            case Kind::Or:
            case Kind::And: {
                g.arena.owner[p] = e.kind == Kind::Or ? Player::Exists : Player::Forall;
                Position l = at(e.left, x), r = at(e.right, x);
                g.arena.add_move(p, l);
                g.arena.add_move(p, r);
                break;
            }
            case Kind::Mu:
            case Kind::Nu: {
                Position n = at(e.left, x);
                g.arena.add_move(p, n);
                break;
            }
            case Kind::Modal: {
                for (unsigned long bits = subsets; bits-- > 0;) {
                    StateSet u(m.size(), bits);
                    if (!lifting_member(m, x, a.modality(), u)) continue;
                    auto key = std::make_pair(f, bits);
                    auto it = choice.find(key);
                    Position c;
                    if (it == choice.end()) {
                        c = g.arena.add(Player::Forall, 0);
                        choice.emplace(key, c);
                        for (State y = 0; y < m.size(); ++y)
                            if (u[y]) {
                                Position t = at(e.left, y);
                                g.arena.add_move(c, t);
                            }
                    } else {
                        c = it->second;
                    }
                    g.arena.add_move(p, c);
                }
                break;
            }
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// JSON

std::string kind_name(const Signature& sig) {
    switch (sig.logic) {
        case Logic::Kripke: return "kripke";
        case Logic::Graded: return "graded";
        case Logic::Probabilistic: return "probabilistic";
        case Logic::Coalition: return "coalition";
        case Logic::Monotone: return "monotone";
    }
    return "?";
}

namespace {

[[noreturn]] void bad(const std::string& m) { throw std::invalid_argument("model json: " + m); }

void only_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) bad(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : keys) ok |= it.key() == k;
        if (!ok) bad("unknown field \"" + it.key() + "\" in " + where);
    }
}

State state_ref(const CoalgebraModel& m, const json& v) {
    if (!v.is_string()) bad("state reference must be a string");
    auto s = m.find_state(v.get<std::string>());
    if (!s) bad("unknown state \"" + v.get<std::string>() + "\"");
    return *s;
}

StateSet state_list(const CoalgebraModel& m, const json& v) {
    if (!v.is_array()) bad("expected a list of states");
    StateSet s = m.empty_set();
    for (const auto& e : v) s.set(state_ref(m, e));
    return s;
}

json set_json(const CoalgebraModel& m, const StateSet& s) {
    json a = json::array();
    for (State x = 0; x < m.size(); ++x)
        if (s[x]) a.push_back(m.states[x]);
    return a;
}

std::string profile_key(const std::vector<int>& p) {
    std::string k;
    for (std::size_t i = 0; i < p.size(); ++i) k += (i ? "," : "") + std::to_string(p[i]);
    return k;
}

}  // namespace

CoalgebraModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) bad("missing \"kind\"");
    std::string kind = j["kind"];
    Signature sig;
    if (kind == "kripke") sig = Signature::kripke();
    else if (kind == "graded") sig = Signature::graded();
    else if (kind == "probabilistic") sig = Signature::probabilistic();
    else if (kind == "monotone") sig = Signature::monotone();
    else if (kind == "coalition") {
        if (!j.contains("agents") || !j["agents"].is_number_integer()) bad("coalition model needs \"agents\"");
        int n = j["agents"];
        if (n < 1 || n > 16) bad("agent count out of range");
        sig = Signature::coalition(n);
    } else {
        bad("unknown kind \"" + kind + "\"");
    }
    switch (sig.logic) {
        case Logic::Kripke: only_keys(j, {"kind", "states", "valuation", "transitions", "root"}, "model"); break;
        case Logic::Graded: only_keys(j, {"kind", "states", "valuation", "weights", "root"}, "model"); break;
        case Logic::Probabilistic: only_keys(j, {"kind", "states", "valuation", "dist", "root"}, "model"); break;
        case Logic::Monotone: only_keys(j, {"kind", "states", "valuation", "neighborhoods", "root"}, "model"); break;
        case Logic::Coalition:
            only_keys(j, {"kind", "states", "valuation", "agents", "strategies", "outcome", "root"}, "model");
            break;
    }
    CoalgebraModel m(sig);
    if (!j.contains("states") || !j["states"].is_array() || j["states"].empty()) bad("\"states\" must be a non-empty list");
    for (const auto& s : j["states"]) {
        if (!s.is_string()) bad("state names must be strings");
        if (m.find_state(s.get<std::string>())) bad("duplicate state \"" + s.get<std::string>() + "\"");
        m.add_state(s.get<std::string>());
    }
    if (j.contains("root")) {
        if (!j["root"].is_string() || !m.find_state(j["root"].get<std::string>())) bad("\"root\" must name a state");
        m.root = *m.find_state(j["root"].get<std::string>());
    }
    if (j.contains("valuation")) {
        if (!j["valuation"].is_object()) bad("\"valuation\" must be an object");
        for (auto it = j["valuation"].begin(); it != j["valuation"].end(); ++it)
            m.valuation[it.key()] = state_list(m, it.value());
    }
    auto per_state = [&](const char* key, bool required) -> const json* {
        if (!j.contains(key)) {
            if (required) bad(std::string("missing \"") + key + "\"");
            return nullptr;
        }
        if (!j[key].is_object()) bad(std::string("\"") + key + "\" must be an object");
        for (auto it = j[key].begin(); it != j[key].end(); ++it)
            if (!m.find_state(it.key())) bad(std::string("unknown state \"") + it.key() + "\" in " + key);
        return &j[key];
    };
    if (sig.logic == Logic::Kripke) {
        if (const json* t = per_state("transitions", false))
            for (auto it = t->begin(); it != t->end(); ++it) {
                State s = *m.find_state(it.key());
                StateSet succ = state_list(m, it.value());
                for (State x = 0; x < m.size(); ++x)
                    if (succ[x]) m.successors[s].push_back(x);
            }
    }
    if (sig.logic == Logic::Graded) {
        if (const json* t = per_state("weights", false))
            for (auto it = t->begin(); it != t->end(); ++it) {
                State s = *m.find_state(it.key());
                if (!it.value().is_object()) bad("weights row must be an object");
                for (auto w = it.value().begin(); w != it.value().end(); ++w) {
                    if (!w.value().is_number_integer() || w.value().get<std::int64_t>() < 0)
                        bad("weights must be natural numbers");
                    auto tgt = m.find_state(w.key());
                    if (!tgt) bad("unknown state \"" + w.key() + "\" in weights");
                    if (w.value().get<std::int64_t>() > 0) m.weights[s].emplace_back(*tgt, w.value().get<std::int64_t>());
                }
                std::sort(m.weights[s].begin(), m.weights[s].end());
            }
    }
    if (sig.logic == Logic::Probabilistic) {
        const json* t = per_state("dist", true);
        for (auto it = t->begin(); it != t->end(); ++it) {
            State s = *m.find_state(it.key());
            if (!it.value().is_object()) bad("dist row must be an object");
            for (auto w = it.value().begin(); w != it.value().end(); ++w) {
                if (!w.value().is_string()) bad("probabilities must be \"n/d\" strings");
                Rational p;
                try {
                    p = parse_rational(w.value().get<std::string>());
                } catch (const std::invalid_argument& e) {
                    bad(e.what());
                }
                auto tgt = m.find_state(w.key());
                if (!tgt) bad("unknown state \"" + w.key() + "\" in dist");
                if (p != 0) m.dist[s].emplace_back(*tgt, p);
            }
            std::sort(m.dist[s].begin(), m.dist[s].end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        }
    }
    if (sig.logic == Logic::Monotone) {
        if (const json* t = per_state("neighborhoods", false))
            for (auto it = t->begin(); it != t->end(); ++it) {
                State s = *m.find_state(it.key());
                if (!it.value().is_array()) bad("neighborhoods row must be a list of state lists");
                for (const auto& g : it.value()) m.neighborhoods[s].push_back(state_list(m, g));
            }
    }
    if (sig.logic == Logic::Coalition) {
        const json* st = per_state("strategies", true);
        const json* out = per_state("outcome", true);
        for (State s = 0; s < m.size(); ++s) {
            const std::string& name = m.states[s];
            if (!st->contains(name)) bad("missing strategies for \"" + name + "\"");
            const json& sz = (*st)[name];
            if (!sz.is_array() || static_cast<int>(sz.size()) != sig.agents) bad("strategies row must list one size per agent");
            GameForm gf;
            for (const auto& k : sz) {
                if (!k.is_number_integer() || k.get<int>() < 1) bad("strategy-set sizes must be positive");
                gf.sizes.push_back(k.get<int>());
            }
            if (gf.profiles() > 100000) bad("profile grid too large");
            if (!out->contains(name)) bad("missing outcome for \"" + name + "\"");
            const json& o = (*out)[name];
            if (!o.is_object()) bad("outcome row must be an object");
            gf.outcome.assign(gf.profiles(), 0);
            std::vector<char> seen(gf.profiles(), 0);
            for (auto it = o.begin(); it != o.end(); ++it) {
                std::vector<int> p;
                std::stringstream ss(it.key());
                std::string part;
                while (std::getline(ss, part, ',')) {
                    try {
                        std::size_t used = 0;
                        int v = std::stoi(part, &used);
                        if (used != part.size()) throw std::invalid_argument(part);
                        p.push_back(v);
                    } catch (const std::exception&) {
                        bad("bad profile key \"" + it.key() + "\"");
                    }
                }
                if (static_cast<int>(p.size()) != sig.agents) bad("profile key \"" + it.key() + "\" has the wrong arity");
                for (int a = 0; a < sig.agents; ++a)
                    if (p[a] < 0 || p[a] >= gf.sizes[a]) bad("profile key \"" + it.key() + "\" out of range");
                std::size_t idx = gf.index(p);
                gf.outcome[idx] = state_ref(m, it.value());
                seen[idx] = 1;
            }
            for (char c : seen)
                if (!c) bad("outcome at \"" + name + "\" is not total");
            m.games[s] = std::move(gf);
        }
    }
    try {
        m.validate();
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
    return m;
}

CoalgebraModel model_from_json(const std::string& text, const Signature& expected) {
    CoalgebraModel m = model_from_json(text);
    if (!(m.sig == expected))
        bad("model kind " + kind_name(m.sig) + (m.sig.logic == Logic::Coalition ? ":" + std::to_string(m.sig.agents) : "") +
            " does not match the requested logic " + expected.name());
    return m;
}

std::string model_to_json(const CoalgebraModel& m) {
    json j;
    j["kind"] = kind_name(m.sig);
    j["states"] = m.states;
    if (m.root) j["root"] = m.states.at(*m.root);
    json val = json::object();
    for (const auto& [v, s] : m.valuation) val[v] = set_json(m, s);
    j["valuation"] = val;
    switch (m.sig.logic) {
        case Logic::Kripke: {
            json t = json::object();
            for (State s = 0; s < m.size(); ++s) {
                json a = json::array();
                for (State x : m.successors[s]) a.push_back(m.states[x]);
                t[m.states[s]] = a;
            }
            j["transitions"] = t;
            break;
        }
        case Logic::Graded: {
            json t = json::object();
            for (State s = 0; s < m.size(); ++s) {
                json row = json::object();
                for (const auto& [x, w] : m.weights[s]) row[m.states[x]] = w;
                t[m.states[s]] = row;
            }
            j["weights"] = t;
            break;
        }
        case Logic::Probabilistic: {
            json t = json::object();
            for (State s = 0; s < m.size(); ++s) {
                json row = json::object();
                for (const auto& [x, p] : m.dist[s]) row[m.states[x]] = format_rational(p);
                t[m.states[s]] = row;
            }
            j["dist"] = t;
            break;
        }
        case Logic::Monotone: {
            json t = json::object();
            for (State s = 0; s < m.size(); ++s) {
                json gens = json::array();
                for (const auto& g : m.neighborhoods[s]) gens.push_back(set_json(m, g));
                t[m.states[s]] = gens;
            }
            j["neighborhoods"] = t;
            break;
        }
        case Logic::Coalition: {
            j["agents"] = m.sig.agents;
            json st = json::object(), out = json::object();
            for (State s = 0; s < m.size(); ++s) {
                const GameForm& g = m.games[s];
                st[m.states[s]] = g.sizes;
                json row = json::object();
                for (std::size_t i = 0; i < g.profiles(); ++i) row[profile_key(g.profile(i))] = m.states[g.outcome[i]];
                out[m.states[s]] = row;
            }
            j["strategies"] = st;
            j["outcome"] = out;
            break;
        }
    }
    return j.dump(2) + "\n";
}

}  // namespace colmu
