#include "colmu/onestep.hpp"

#include "colmu/lp.hpp"
#include "colmu/prime_implicants.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace colmu {

std::string schema_name(Schema s) {
    switch (s) {
        case Schema::K: return "K";
        case Schema::G: return "G";
        case Schema::P: return "P";
        case Schema::C1: return "C1";
        case Schema::C2: return "C2";
        case Schema::M: return "M";
    }
    return "?";
}

std::optional<Schema> parse_schema(const std::string& s) {
    for (Schema x : {Schema::K, Schema::G, Schema::P, Schema::C1, Schema::C2, Schema::M})
        if (schema_name(x) == s) return x;
    return std::nullopt;
}

namespace {

std::string index_text(const Modality& m) {
    return m.logic == Logic::Graded ? std::to_string(m.grade) : format_rational(m.prob);
}

bool popcount_disjoint(const std::vector<std::uint32_t>& cs) {
    std::uint32_t seen = 0;
    for (auto c : cs) {
        if (seen & c) return false;
        seen |= c;
    }
    return true;
}

std::vector<int> all_vars(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Conclusions of the (G)/(P) instance: prime implicants of
// sum_j s_j (1 - v(q_j)) - sum_i r_i v(p_i) < k.
std::vector<std::vector<int>> threshold_conclusions(const std::vector<std::int64_t>& r, const std::vector<std::int64_t>& s,
                                                    std::int64_t k) {
    std::vector<LinearTerm> terms;
    int n = static_cast<int>(r.size());
    for (int i = 0; i < n; ++i) terms.push_back({i, -r[i], false});
    for (std::size_t j = 0; j < s.size(); ++j) terms.push_back({n + static_cast<int>(j), s[j], true});
    std::vector<std::vector<int>> out;
    for (const auto& imp : prime_implicants(terms, k)) {
        std::vector<int> c;
        for (const auto& lit : imp) {
            if (!lit.positive) throw std::logic_error("sign property violated in threshold conclusion");
            c.push_back(lit.var);
        }
        out.push_back(std::move(c));
    }
    return out;
}

// Least k admitted by the probabilistic side condition (see instantiate_rule).
std::int64_t least_prob_bound(const std::vector<Modality>& prem, int n, const std::vector<std::int64_t>& r,
                              const std::vector<std::int64_t>& s) {
    Rational ra = 0, sb = 0;
    for (int i = 0; i < n; ++i) ra += Rational(r[i]) * prem[i].prob;
    for (std::size_t j = 0; j < s.size(); ++j) sb += Rational(s[j]) * prem[n + j].prob;
    if (!s.empty()) return static_cast<std::int64_t>(ceil_of(sb - ra));
    return static_cast<std::int64_t>(floor_of(-ra)) + 1;
}

}  // namespace

std::vector<std::string> OneStepRule::code() const {
    std::vector<std::string> out;
    if (schema != Schema::G && schema != Schema::P) return out;
    for (int i = 0; i < split; ++i) {
        out.push_back(std::to_string(r[i]));
        out.push_back(index_text(premise[i]));
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
        out.push_back(std::to_string(s[j]));
        out.push_back(index_text(premise[split + j]));
    }
    out.push_back(std::to_string(k));
    return out;
}

std::optional<OneStepRule> instantiate_rule(Schema schema, std::vector<Modality> premise, int split,
                                            std::vector<std::int64_t> r, std::vector<std::int64_t> s,
                                            std::int64_t k, const Signature& sig, std::string* why) {
    auto reject = [&](const std::string& msg) -> std::optional<OneStepRule> {
        if (why) *why = schema_name(schema) + ": " + msg;
        return std::nullopt;
    };
    const int size = static_cast<int>(premise.size());
    if (size == 0) return reject("empty premise");
    for (const auto& m : premise) {
        if (m.logic != sig.logic) return reject("modality of another logic");
        if (m.logic == Logic::Coalition && (m.coalition & ~sig.grand_coalition())) return reject("unknown agent");
    }
    OneStepRule rule;
    rule.schema = schema;
    rule.split = split;
    auto plain = [&](int i) { return !premise[i].dual; };
    switch (schema) {
        case Schema::K:
            if (sig.logic != Logic::Kripke) return reject("schema not in this logic");
            if (split != 1 || plain(0)) return reject("premise must start with one diamond");
            for (int i = 1; i < size; ++i)
                if (!plain(i)) return reject("only boxes may follow the diamond");
            rule.conclusions = {all_vars(size)};
            break;
        case Schema::M:
            if (sig.logic != Logic::Monotone) return reject("schema not in this logic");
            if (size != 2 || split != 1 || !plain(0) || plain(1)) return reject("premise must be box, dia");
            rule.conclusions = {all_vars(2)};
            break;
        case Schema::C1: {
            if (sig.logic != Logic::Coalition) return reject("schema not in this logic");
            if (split != size) return reject("bad premise layout");
            std::vector<std::uint32_t> cs;
            for (int i = 0; i < size; ++i) {
                if (!plain(i)) return reject("premise must consist of [C] atoms");
                cs.push_back(premise[i].coalition);
            }
            if (!popcount_disjoint(cs)) return reject("coalitions not pairwise disjoint");
            rule.conclusions = {all_vars(size)};
            break;
        }
        case Schema::C2: {
            if (sig.logic != Logic::Coalition) return reject("schema not in this logic");
            if (split < 0 || split >= size) return reject("bad premise layout");
            std::vector<std::uint32_t> cs;
            for (int i = 0; i < split; ++i) {
                if (!plain(i)) return reject("leading atoms must be [C] atoms");
                cs.push_back(premise[i].coalition);
            }
            if (plain(split)) return reject("missing <D> atom");
            std::uint32_t d = premise[split].coalition;
            for (auto c : cs)
                if (c & ~d) return reject("coalition not contained in D");
            if (!popcount_disjoint(cs)) return reject("coalitions not pairwise disjoint");
            for (int i = split + 1; i < size; ++i)
                if (plain(i) || premise[i].coalition != sig.grand_coalition())
                    return reject("trailing atoms must be <N> atoms");
            rule.conclusions = {all_vars(size)};
            break;
        }
        case Schema::G: {
            if (sig.logic != Logic::Graded) return reject("schema not in this logic");
            int n = split, m = size - split;
            if (n < 1) return reject("needs at least one <k> atom");
            for (int i = 0; i < size; ++i)
                if (plain(i) != (i < n)) return reject("premise must list <k> atoms before [l] atoms");
            if (static_cast<int>(r.size()) != n || static_cast<int>(s.size()) != m) return reject("coefficient count");
            for (auto x : r)
                if (x < 1) return reject("coefficients must be positive");
            for (auto x : s)
                if (x < 1) return reject("coefficients must be positive");
            if (k != 0) return reject("bound must be 0");
            std::int64_t lhs = 0, rhs = 1;
            for (int i = 0; i < n; ++i) lhs += r[i] * (premise[i].grade + 1);
            for (int j = 0; j < m; ++j) rhs += s[j] * premise[n + j].grade;
            if (lhs < rhs) return reject("side condition sum r(k+1) >= 1 + sum s l fails");
            rule.conclusions = threshold_conclusions(r, s, 0);
            break;
        }
        case Schema::P: {
            if (sig.logic != Logic::Probabilistic) return reject("schema not in this logic");
            int n = split, m = size - split;
            if (n < 0 || m < 0) return reject("bad premise layout");
            for (int i = 0; i < size; ++i)
                if (plain(i) != (i < n)) return reject("premise must list <a> atoms before [b] atoms");
            if (static_cast<int>(r.size()) != n || static_cast<int>(s.size()) != m) return reject("coefficient count");
            for (auto x : r)
                if (x < 1) return reject("coefficients must be positive");
            for (auto x : s)
                if (x < 1) return reject("coefficients must be positive");
            if (k < least_prob_bound(premise, n, r, s)) return reject("side condition on k fails");
            rule.conclusions = threshold_conclusions(r, s, k);
            break;
        }
    }
    rule.premise = std::move(premise);
    rule.r = std::move(r);
    rule.s = std::move(s);
    rule.k = k;
    return rule;
}

std::int64_t default_coefficient_bound(const std::vector<Modality>& atoms, const Signature& sig) {
    const auto count = static_cast<std::int64_t>(atoms.size());
    if (sig.logic == Logic::Graded) {
        std::int64_t sum = 0;
        for (const auto& m : atoms) sum += m.grade;
        return sum + count + 1;
    }
    if (sig.logic == Logic::Probabilistic) {
        BigInt l = 1;
        for (const auto& m : atoms) {
            BigInt d = denominator(m.prob);
            l = l / boost::multiprecision::gcd(l, d) * d;
            if (l > 64) {
                l = 64;
                break;
            }
        }
        return static_cast<std::int64_t>(l) + count;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// matching

namespace {

struct MatchKey {
    std::vector<int> premise;
    std::vector<std::vector<int>> conclusions;
    auto operator<=>(const MatchKey&) const = default;
};

class Matcher {
public:
    Matcher(const std::vector<Modality>& atoms, const Signature& sig, std::int64_t bound)
        : atoms_(atoms), sig_(sig), bound_(bound) {}

    std::vector<MatchedRule> run() {
        switch (sig_.logic) {
            case Logic::Kripke: kripke(); break;
            case Logic::Monotone: monotone(); break;
            case Logic::Coalition: coalition(); break;
            case Logic::Graded: threshold(Schema::G); break;
            case Logic::Probabilistic: threshold(Schema::P); break;
        }
        return std::move(out_);
    }

private:
    const std::vector<Modality>& atoms_;
    const Signature& sig_;
    std::int64_t bound_;
    std::vector<MatchedRule> out_;
    std::set<MatchKey> seen_;

    void emit(const std::vector<int>& idx, std::optional<OneStepRule> rule) {
        if (!rule) return;
        MatchKey key;
        key.premise = idx;
        std::sort(key.premise.begin(), key.premise.end());
        for (const auto& c : rule->conclusions) {
            std::vector<int> a;
            for (int v : c) a.push_back(idx[v]);
            std::sort(a.begin(), a.end());
            key.conclusions.push_back(std::move(a));
        }
        std::sort(key.conclusions.begin(), key.conclusions.end());
        if (!seen_.insert(std::move(key)).second) return;
        out_.push_back({std::make_shared<const OneStepRule>(std::move(*rule)), idx});
    }

    std::vector<Modality> mods(const std::vector<int>& idx) const {
        std::vector<Modality> m;
        for (int i : idx) m.push_back(atoms_[i]);
        return m;
    }

    std::vector<int> where(bool dual) const {
        std::vector<int> v;
        for (int i = 0; i < static_cast<int>(atoms_.size()); ++i)
            if (atoms_[i].dual == dual) v.push_back(i);
        return v;
    }

    static std::vector<int> pick(const std::vector<int>& from, std::uint64_t mask) {
        std::vector<int> v;
        for (std::size_t i = 0; i < from.size(); ++i)
            if (mask & (1ull << i)) v.push_back(from[i]);
        return v;
    }

    void kripke() {
        auto dias = where(true), boxes = where(false);
        for (int d : dias)
            for (std::uint64_t mask = 0; mask < (1ull << boxes.size()); ++mask) {
                std::vector<int> idx{d};
                for (int b : pick(boxes, mask)) idx.push_back(b);
                emit(idx, instantiate_rule(Schema::K, mods(idx), 1, {}, {}, 0, sig_));
            }
    }

    void monotone() {
        for (int b : where(false))
            for (int d : where(true)) {
                std::vector<int> idx{b, d};
                emit(idx, instantiate_rule(Schema::M, mods(idx), 1, {}, {}, 0, sig_));
            }
    }

    void coalition() {
        auto boxes = where(false), dias = where(true);
        const std::uint32_t n = sig_.grand_coalition();
        std::vector<std::vector<int>> disjoint;  // disjoint box families
        for (std::uint64_t mask = 0; mask < (1ull << boxes.size()); ++mask) {
            auto fam = pick(boxes, mask);
            std::vector<std::uint32_t> cs;
            for (int i : fam) cs.push_back(atoms_[i].coalition);
            if (popcount_disjoint(cs)) disjoint.push_back(std::move(fam));
        }
        for (const auto& fam : disjoint) {
            if (fam.empty()) continue;
            emit(fam, instantiate_rule(Schema::C1, mods(fam), static_cast<int>(fam.size()), {}, {}, 0, sig_));
        }
        for (int d : dias) {
            std::uint32_t dc = atoms_[d].coalition;
            std::vector<int> others;
            for (int e : dias)
                if (e != d && atoms_[e].coalition == n) others.push_back(e);
            for (const auto& fam : disjoint) {
                bool inside = true;
                for (int i : fam) inside &= (atoms_[i].coalition & ~dc) == 0;
                if (!inside) continue;
                for (std::uint64_t mask = 0; mask < (1ull << others.size()); ++mask) {
                    std::vector<int> idx = fam;
                    idx.push_back(d);
                    for (int e : pick(others, mask)) idx.push_back(e);
                    emit(idx, instantiate_rule(Schema::C2, mods(idx), static_cast<int>(fam.size()), {}, {}, 0, sig_));
                }
            }
        }
    }

    void threshold(Schema schema) {
        if (bound_ < 1) return;
        auto dias = where(false), boxes = where(true);
        for (std::uint64_t dm = 0; dm < (1ull << dias.size()); ++dm) {
            if (schema == Schema::G && dm == 0) continue;
            for (std::uint64_t bm = 0; bm < (1ull << boxes.size()); ++bm) {
                if (dm == 0 && bm == 0) continue;
                std::vector<int> idx = pick(dias, dm);
                int n = static_cast<int>(idx.size());
                for (int b : pick(boxes, bm)) idx.push_back(b);
                int total = static_cast<int>(idx.size());
                auto prem = mods(idx);
                std::vector<std::int64_t> coef(total, 1);
                for (;;) {
                    if (gcd_one(coef)) {
                        std::vector<std::int64_t> r(coef.begin(), coef.begin() + n), s(coef.begin() + n, coef.end());
                        std::int64_t k = schema == Schema::P ? least_prob_bound(prem, n, r, s) : 0;
                        emit(idx, instantiate_rule(schema, prem, n, r, s, k, sig_));
                    }
                    int i = 0;
                    while (i < total && coef[i] == bound_) coef[i++] = 1;
                    if (i == total) break;
                    ++coef[i];
                }
            }
        }
    }

    static bool gcd_one(const std::vector<std::int64_t>& v) {
        std::int64_t g = 0;
        for (auto x : v) g = std::gcd(g, x);
        return g == 1;
    }
};

struct MatchCacheKey {
    std::vector<Modality> atoms;
    Signature sig;
    std::int64_t bound;
    bool operator<(const MatchCacheKey& o) const {
        if (bound != o.bound) return bound < o.bound;
        if (sig.logic != o.sig.logic) return sig.logic < o.sig.logic;
        if (sig.agents != o.sig.agents) return sig.agents < o.sig.agents;
        return std::lexicographical_compare(atoms.begin(), atoms.end(), o.atoms.begin(), o.atoms.end(),
                                            [](const Modality& a, const Modality& b) { return a.compare(b) < 0; });
    }
};

}  // namespace

std::vector<MatchedRule> match_modal_rules(const std::vector<Modality>& atoms, const Signature& sig,
                                           const CoefficientBounds& bounds) {
    std::int64_t b = bounds.bound ? *bounds.bound : default_coefficient_bound(atoms, sig);
    static std::mutex mu;
    static std::map<MatchCacheKey, std::vector<MatchedRule>> cache;
    MatchCacheKey key{atoms, sig, b};
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto result = Matcher(atoms, sig, b).run();
    std::lock_guard<std::mutex> lock(mu);
    if (cache.size() > 200000) cache.clear();
    cache.emplace(std::move(key), result);
    return result;
}

bool some_modal_rule_applies(const std::vector<Modality>& atoms, const Signature& sig) {
    bool plain = false, barred = false;
    for (const auto& m : atoms) (m.dual ? barred : plain) = true;
    switch (sig.logic) {
        case Logic::Kripke: return barred;
        case Logic::Monotone: return plain && barred;
        case Logic::Coalition: return !atoms.empty();
        case Logic::Graded: return plain;
        case Logic::Probabilistic: return !atoms.empty();
    }
    return false;
}

// ---------------------------------------------------------------------------
// oracle

namespace {

std::uint32_t full_mask(int x) { return x >= 32 ? 0xffffffffu : ((1u << x) - 1u); }

bool kripke_member(std::uint32_t succ, std::uint32_t u, const Modality& m, int x) {
    if (!m.dual) return (succ & ~u) == 0;
    return !((succ & ~(full_mask(x) & ~u)) == 0);
}

bool coalition_search(const std::vector<Modality>& ops, const std::vector<std::uint32_t>& sets, int x,
                      const std::vector<int>& sizes) {
    const int agents = static_cast<int>(sizes.size());
    int cells = 1;
    for (int s : sizes) cells *= s;
    std::vector<int> stride(agents);
    for (int a = 0, st = 1; a < agents; ++a) {
        stride[a] = st;
        st *= sizes[a];
    }
    auto coord = [&](int cell, int a) { return (cell / stride[a]) % sizes[a]; };

    // decisions: for a [C] atom one assignment to C; for a <D> atom, one cell per
    // assignment to D, agreeing with it on D
    struct Decision {
        std::vector<std::vector<int>> options;  // each option lists cells forced into the set
        std::uint32_t set;
    };
    std::vector<Decision> decisions;
    auto projections = [&](std::uint32_t coal) {
        // group cells by their restriction to coal
        std::map<std::vector<int>, std::vector<int>> groups;
        for (int c = 0; c < cells; ++c) {
            std::vector<int> key;
            for (int a = 0; a < agents; ++a)
                if (coal & (1u << a)) key.push_back(coord(c, a));
            groups[key].push_back(c);
        }
        return groups;
    };
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Modality& m = ops[i];
        if (!m.dual) {
            Decision d;
            d.set = sets[i];
            for (auto& [k, cs] : projections(m.coalition)) d.options.push_back(cs);
            decisions.push_back(std::move(d));
        } else {
            // <D>U: for every choice of D some completion lands in U
            for (auto& [k, cs] : projections(m.coalition)) {
                Decision d;
                d.set = sets[i];
                for (int c : cs) d.options.push_back({c});
                decisions.push_back(std::move(d));
            }
        }
    }
    std::vector<std::uint32_t> mask(cells, full_mask(x));
    auto settled = [&](const Decision& d, const std::vector<int>& opt) {
        for (int c : opt)
            if (mask[c] & ~d.set) return false;
        return true;
    };
    auto viable = [&](const Decision& d) {
        for (const auto& opt : d.options) {
            bool ok = true;
            for (int c : opt) ok &= (mask[c] & d.set) != 0;
            if (ok) return true;
        }
        return false;
    };
    std::function<bool(std::size_t)> go = [&](std::size_t di) -> bool {
        if (di == decisions.size()) return true;
        const Decision& d = decisions[di];
        // an option that changes nothing dominates every other one
        for (const auto& opt : d.options)
            if (settled(d, opt)) return go(di + 1);
        for (const auto& opt : d.options) {
            std::vector<std::pair<int, std::uint32_t>> undo;
            bool ok = true;
            for (int c : opt) {
                undo.emplace_back(c, mask[c]);
                mask[c] &= d.set;
                if (!mask[c]) ok = false;
            }
            for (std::size_t dj = di + 1; ok && dj < decisions.size(); ++dj) ok = viable(decisions[dj]);
            if (ok && go(di + 1)) return true;
            for (auto it = undo.rbegin(); it != undo.rend(); ++it) mask[it->first] = it->second;
        }
        return false;
    };
    return go(0);
}

}  // namespace

bool one_step_sat(const std::vector<Modality>& ops, const std::vector<int>& args, const std::vector<std::uint32_t>& tau,
                  int x, const Signature& sig, const OracleCaps& caps) {
    if (x < 1 || x > caps.max_x) throw std::invalid_argument("one_step_sat: |X| outside 1..cap");
    std::vector<std::uint32_t> sets;
    for (int a : args) sets.push_back(tau.at(a) & full_mask(x));
    const std::uint32_t all = full_mask(x);
    switch (sig.logic) {
        case Logic::Kripke:
            for (std::uint32_t v = 0; v <= all; ++v) {
                bool ok = true;
                for (std::size_t i = 0; i < ops.size() && ok; ++i) ok = kripke_member(v, sets[i], ops[i], x);
                if (ok) return true;
            }
            return false;
        case Logic::Monotone: {
            // upward-closed families of subsets of X, as bitmasks over P(X)
            const int subsets = 1 << x;
            const std::uint64_t families = 1ull << subsets;
            for (std::uint64_t fam = 0; fam < families; ++fam) {
                bool up = true;
                for (int s = 0; s < subsets && up; ++s) {
                    if (!(fam & (1ull << s))) continue;
                    for (int y = 0; y < x && up; ++y)
                        if (!(fam & (1ull << (s | (1 << y))))) up = false;
                }
                if (!up) continue;
                bool ok = true;
                for (std::size_t i = 0; i < ops.size() && ok; ++i) {
                    std::uint32_t u = sets[i];
                    if (!ops[i].dual) ok = fam & (1ull << u);
                    else ok = !(fam & (1ull << (all & ~u)));
                }
                if (ok) return true;
            }
            return false;
        }
        case Logic::Graded: {
            std::int64_t cap = caps.graded_entry_cap;
            if (cap < 0) {
                cap = 0;
                for (const auto& m : ops) cap = std::max(cap, m.grade);
                cap += 1;
            }
            std::vector<std::int64_t> f(x, 0);
            for (;;) {
                bool ok = true;
                for (std::size_t i = 0; i < ops.size() && ok; ++i) {
                    std::uint32_t u = ops[i].dual ? (all & ~sets[i]) : sets[i];
                    std::int64_t sum = 0;
                    for (int y = 0; y < x; ++y)
                        if (u & (1u << y)) sum += f[y];
                    bool in = sum > ops[i].grade;
                    ok = ops[i].dual ? !in : in;
                }
                if (ok) return true;
                int y = 0;
                while (y < x && f[y] == cap) f[y++] = 0;
                if (y == x) return false;
                ++f[y];
            }
        }
        case Logic::Probabilistic: {
            std::vector<LinearConstraint> cs;
            LinearConstraint total{std::vector<Rational>(x, 1), Rel::EQ, 1};
            cs.push_back(total);
            for (std::size_t i = 0; i < ops.size(); ++i) {
                std::uint32_t u = ops[i].dual ? (all & ~sets[i]) : sets[i];
                LinearConstraint c;
                c.a.assign(x, 0);
                for (int y = 0; y < x; ++y)
                    if (u & (1u << y)) c.a[y] = 1;
                c.b = ops[i].prob;
                c.rel = ops[i].dual ? Rel::LT : Rel::GE;
                cs.push_back(std::move(c));
            }
            return lp_feasible_point(x, cs).has_value();
        }
        case Logic::Coalition: {
            const int agents = sig.agents;
            std::vector<int> sizes(agents, 1);
            for (;;) {
                if (coalition_search(ops, sets, x, sizes)) return true;
                int a = 0;
                while (a < agents && sizes[a] == caps.strategy_cap) sizes[a++] = 1;
                if (a == agents) return false;
                ++sizes[a];
            }
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// audit

std::string AuditReport::to_string() const {
    std::ostringstream os;
    os << "logic " << sig.name() << ": " << samples << " samples (" << satisfiable << " satisfiable premises), "
       << soundness_failures << " soundness and " << completeness_failures << " completeness counterexamples\n";
    if (!notes.empty()) os << notes << "\n";
    for (const auto& c : counterexamples) os << "  " << c << "\n";
    return os.str();
}

namespace {

Modality random_modality(const Signature& sig, std::mt19937_64& rng) {
    bool dual = rng() & 1;
    switch (sig.logic) {
        case Logic::Kripke:
        case Logic::Monotone: return dual ? Modality::dia(sig.logic) : Modality::box(sig.logic);
        case Logic::Graded: {
            std::int64_t g = static_cast<std::int64_t>(rng() % 3);
            return dual ? Modality::graded_box(g) : Modality::more_than(g);
        }
        case Logic::Probabilistic: {
            static const Rational ps[] = {Rational(0), Rational(1, 4), Rational(1, 3), Rational(1, 2),
                                          Rational(2, 3), Rational(3, 4), Rational(1)};
            const Rational& p = ps[rng() % 7];
            return dual ? Modality::prob_box(p) : Modality::at_least(p);
        }
        case Logic::Coalition: {
            std::uint32_t c = static_cast<std::uint32_t>(rng()) & sig.grand_coalition();
            return dual ? Modality::cannot_prevent(c) : Modality::can_force(c);
        }
    }
    return Modality::box(sig.logic);
}

std::string describe(const std::vector<Modality>& ops, const std::vector<int>& args,
                     const std::vector<std::uint32_t>& tau, int x) {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < ops.size(); ++i) os << (i ? "; " : "") << ops[i].to_string() << " p" << args[i];
    os << "} |X|=" << x;
    for (std::size_t v = 0; v < tau.size(); ++v) os << " tau(p" << v << ")=" << tau[v];
    return os.str();
}

}  // namespace

AuditReport audit_ruleset(const Signature& sig, int samples, const AuditOptions& opts) {
    AuditReport rep;
    rep.sig = sig;
    rep.samples = samples;
    if (sig.logic == Logic::Probabilistic)
        rep.notes =
            "(P) side condition in use: k >= sum s_j b_j - sum r_i a_i when m > 0, k > -sum r_i a_i when m = 0 "
            "(corrected schema; the uncorrected condition refutes the satisfiable [1]q and cannot refute <1/2>p & <2/3>~p).";
    std::mt19937_64 rng(opts.seed);
    for (int t = 0; t < samples; ++t) {
        int vars = 1 + static_cast<int>(rng() % opts.max_vars);
        int natoms = 1 + static_cast<int>(rng() % opts.max_atoms);
        int x = 1 + static_cast<int>(rng() % opts.max_x);
        std::vector<Modality> ops;
        std::vector<int> args;
        for (int tries = 0; static_cast<int>(ops.size()) < natoms && tries < 50; ++tries) {
            Modality m = random_modality(sig, rng);
            int a = static_cast<int>(rng() % vars);
            bool dup = false;
            for (std::size_t i = 0; i < ops.size(); ++i) dup |= (ops[i] == m && args[i] == a);
            if (dup) continue;
            ops.push_back(m);
            args.push_back(a);
        }
        std::vector<std::uint32_t> tau(vars);
        for (auto& s : tau) s = static_cast<std::uint32_t>(rng()) & full_mask(x);
        bool sat = one_step_sat(ops, args, tau, x, sig, opts.caps);
        if (sat) ++rep.satisfiable;
        auto rules = match_modal_rules(ops, sig, opts.bounds);
        bool refuted = false;
        for (const auto& mr : rules) {
            bool some_sat = false;
            for (const auto& c : mr.rule->conclusions) {
                std::uint32_t inter = full_mask(x);
                for (int v : c) inter &= tau[args[mr.atoms[v]]];
                if (inter) some_sat = true;
            }
            if (!some_sat) refuted = true;
            if (sat && !some_sat) {
                ++rep.soundness_failures;
                if (rep.counterexamples.size() < 10)
                    rep.counterexamples.push_back("unsound " + schema_name(mr.rule->schema) + " instance on " +
                                                  describe(ops, args, tau, x));
                break;
            }
        }
        if (!sat && !refuted) {
            ++rep.completeness_failures;
            if (rep.counterexamples.size() < 10)
                rep.counterexamples.push_back("unrefuted unsatisfiable premise " + describe(ops, args, tau, x));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// blueprints over formulas

namespace {

std::vector<Formula> modal_members(const Sequent& delta) {
    std::vector<Formula> out;
    for (const auto& f : delta)
        if (f.is_modal()) out.push_back(f);
    return out;
}

}  // namespace

bool is_axiom(const Sequent& delta) {
    for (const auto& f : delta)
        if (delta.contains(negate(f))) return true;
    return false;
}

std::vector<Blueprint> enumerate_blueprints(const Sequent& delta, const Signature& sig,
                                            const CoefficientBounds& bounds) {
    std::vector<Blueprint> out;
    for (const auto& f : delta) {
        Formula g = negate(f);
        if (f < g && delta.contains(g)) out.push_back({BlueprintKind::Axiom, f, g, nullptr, {}});
    }
    for (const auto& f : delta) {
        switch (f.kind()) {
            case Kind::And: out.push_back({BlueprintKind::And, f, {}, nullptr, {}}); break;
            case Kind::Or: out.push_back({BlueprintKind::Or, f, {}, nullptr, {}}); break;
            case Kind::Mu:
            case Kind::Nu: out.push_back({BlueprintKind::Fix, f, {}, nullptr, {}}); break;
            default: break;
        }
    }
    auto atoms = modal_members(delta);
    std::vector<Modality> ops;
    for (const auto& a : atoms) ops.push_back(a.modality());
    for (const auto& mr : match_modal_rules(ops, sig, bounds)) {
        Blueprint bp{BlueprintKind::Modal, {}, {}, mr.rule, {}};
        for (int i : mr.atoms) bp.atoms.push_back(atoms[i]);
        out.push_back(std::move(bp));
    }
    return out;
}

std::vector<Sequent> conclusions(const Sequent& delta, const Blueprint& bp) {
    auto without = [&](const Formula& f) {
        std::vector<Formula> v;
        for (const auto& g : delta)
            if (g != f) v.push_back(g);
        return v;
    };
    switch (bp.kind) {
        case BlueprintKind::Axiom: return {};
        case BlueprintKind::And: {
            auto v = without(bp.principal);
            v.push_back(bp.principal.left());
            v.push_back(bp.principal.right());
            return {Sequent(v)};
        }
        case BlueprintKind::Or: {
            auto v = without(bp.principal);
            auto w = v;
            v.push_back(bp.principal.left());
            w.push_back(bp.principal.right());
            return {Sequent(v), Sequent(w)};
        }
        case BlueprintKind::Fix: {
            auto v = without(bp.principal);
            v.push_back(unfold(bp.principal));
            return {Sequent(v)};
        }
        case BlueprintKind::Modal: {
            std::vector<Sequent> out;
            for (const auto& c : bp.rule->conclusions) {
                std::vector<Formula> v;
                for (int j : c) v.push_back(bp.atoms[j].arg());
                out.emplace_back(v);
            }
            return out;
        }
    }
    return {};
}

bool some_rule_applies(const Sequent& delta, const Signature& sig) {
    std::vector<Modality> ops;
    for (const auto& f : delta) {
        if (!f.is_atomic()) return true;
        if (f.is_modal()) ops.push_back(f.modality());
    }
    if (is_axiom(delta)) return true;
    return some_modal_rule_applies(ops, sig);
}

// ---------------------------------------------------------------------------
// blueprints over closure ids

std::vector<IdBlueprint> enumerate_blueprints(const ClosureIndex& cl, const IdSet& delta, const Signature& sig,
                                              const CoefficientBounds& bounds) {
    std::vector<IdBlueprint> out;
    for (FormulaId f : delta) {
        FormulaId g = cl[f].negation;
        if (g != kNoFormula && f < g && std::binary_search(delta.begin(), delta.end(), g))
            out.push_back({BlueprintKind::Axiom, f, g, nullptr, {}});
    }
    std::vector<FormulaId> atoms;
    for (FormulaId f : delta) {
        switch (cl[f].kind) {
            case Kind::And: out.push_back({BlueprintKind::And, f, kNoFormula, nullptr, {}}); break;
            case Kind::Or: out.push_back({BlueprintKind::Or, f, kNoFormula, nullptr, {}}); break;
            case Kind::Mu:
            case Kind::Nu: out.push_back({BlueprintKind::Fix, f, kNoFormula, nullptr, {}}); break;
            case Kind::Modal: atoms.push_back(f); break;
            default: break;
        }
    }
    std::vector<Modality> ops;
    for (FormulaId a : atoms) ops.push_back(cl.formula(a).modality());
    for (const auto& mr : match_modal_rules(ops, sig, bounds)) {
        IdBlueprint bp{BlueprintKind::Modal, kNoFormula, kNoFormula, mr.rule, {}};
        for (int i : mr.atoms) bp.atoms.push_back(atoms[i]);
        out.push_back(std::move(bp));
    }
    return out;
}

std::vector<IdSet> conclusions(const ClosureIndex& cl, const IdSet& delta, const IdBlueprint& bp) {
    auto replace = [&](FormulaId drop, std::initializer_list<FormulaId> add) {
        IdSet v;
        v.reserve(delta.size() + 1);
        for (FormulaId g : delta)
            if (g != drop) v.push_back(g);
        for (FormulaId a : add) v.push_back(a);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const ClosureEntry& e = bp.principal == kNoFormula ? cl[0] : cl[bp.principal];
    switch (bp.kind) {
        case BlueprintKind::Axiom: return {};
        case BlueprintKind::And: return {replace(bp.principal, {e.left, e.right})};
        case BlueprintKind::Or: return {replace(bp.principal, {e.left}), replace(bp.principal, {e.right})};
        case BlueprintKind::Fix: return {replace(bp.principal, {e.left})};
        case BlueprintKind::Modal: {
            std::vector<IdSet> out;
            for (const auto& c : bp.rule->conclusions) {
                IdSet v;
                for (int j : c) v.push_back(cl[bp.atoms[j]].left);
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
                out.push_back(std::move(v));
            }
            return out;
        }
    }
    return {};
}

Blueprint to_blueprint(const ClosureIndex& cl, const IdBlueprint& bp) {
    Blueprint out{bp.kind, {}, {}, bp.rule, {}};
    if (bp.principal != kNoFormula) out.principal = cl.formula(bp.principal);
    if (bp.partner != kNoFormula) out.partner = cl.formula(bp.partner);
    for (FormulaId a : bp.atoms) out.atoms.push_back(cl.formula(a));
    return out;
}

std::optional<IdBlueprint> to_id_blueprint(const ClosureIndex& cl, const Blueprint& bp) {
    IdBlueprint out{bp.kind, kNoFormula, kNoFormula, bp.rule, {}};
    if (bp.principal) {
        auto p = cl.find(bp.principal);
        if (!p) return std::nullopt;
        out.principal = *p;
    }
    if (bp.partner) {
        auto p = cl.find(bp.partner);
        if (!p) return std::nullopt;
        out.partner = *p;
    }
    for (const auto& a : bp.atoms) {
        auto p = cl.find(a);
        if (!p) return std::nullopt;
        out.atoms.push_back(*p);
    }
    return out;
}

IdBlueprint propositional_choice(const ClosureIndex& cl, const IdSet& delta) {
    for (FormulaId f : delta) {
        switch (cl[f].kind) {
            case Kind::And: return {BlueprintKind::And, f, kNoFormula, nullptr, {}};
            case Kind::Or: return {BlueprintKind::Or, f, kNoFormula, nullptr, {}};
            case Kind::Mu:
            case Kind::Nu: return {BlueprintKind::Fix, f, kNoFormula, nullptr, {}};
            default: break;
        }
    }
    throw std::logic_error("propositional_choice: atomic sequent");
}

}  // namespace colmu
