#pragma once

// Brute-force oracles shared by the unit suites and the acceptance driver.

#include "colmu/closure.hpp"
#include "colmu/prime_implicants.hpp"
#include "colmu/tableau_game.hpp"
#include "colmu/trace_automaton.hpp"

#include <functional>
#include <map>
#include <set>
#include <vector>

namespace testsupport {

// Ceil log2 with the index-0 convention, computed by repeated doubling.
inline std::int64_t bits(std::int64_t v) {
    std::int64_t b = 0;
    while ((std::int64_t{1} << b) < v) ++b;
    return b;
}

// Independent size measure on the syntax tree.
inline std::int64_t ref_size(const colmu::Formula& f) {
    using namespace colmu;
    switch (f.kind()) {
        case Kind::Var: return 1;
        case Kind::Or:
        case Kind::And: return 1 + ref_size(f.left()) + ref_size(f.right());
        case Kind::Mu:
        case Kind::Nu: return 1 + ref_size(f.body());
        case Kind::Modal: {
            const Modality& m = f.modality();
            std::int64_t s = 0;
            if (m.logic == Logic::Graded) s = bits(m.grade);
            if (m.logic == Logic::Probabilistic)
                s = bits(static_cast<std::int64_t>(numerator(m.prob))) +
                    bits(static_cast<std::int64_t>(denominator(m.prob))) + 1;
            if (m.logic == Logic::Coalition) s = 1;
            return 1 + s + ref_size(f.arg());
        }
    }
    return 0;
}

using ImplicantSet = std::set<std::vector<std::pair<int, bool>>>;

// All minimal partial valuations forcing f = 1, by enumeration over {0,1,undef}^n.
inline ImplicantSet brute_prime_implicants(const std::vector<colmu::LinearTerm>& terms, std::int64_t k) {
    int n = static_cast<int>(terms.size());
    auto value = [&](std::uint32_t total) {
        std::int64_t s = 0;
        for (int i = 0; i < n; ++i) {
            bool v = total & (1u << i);
            s += terms[i].barred ? terms[i].coeff * (v ? 0 : 1) : terms[i].coeff * (v ? 1 : 0);
        }
        return s < k;
    };
    std::vector<char> f(1u << n);
    for (std::uint32_t t = 0; t < (1u << n); ++t) f[t] = value(t);
    auto implicant = [&](std::uint32_t dom, std::uint32_t val) {
        for (std::uint32_t t = 0; t < (1u << n); ++t)
            if ((t & dom) == (val & dom) && !f[t]) return false;
        return true;
    };
    ImplicantSet out;
    for (std::uint32_t dom = 0; dom < (1u << n); ++dom)
        for (std::uint32_t val = 0; val < (1u << n); ++val) {
            if (val & ~dom) continue;
            if (!implicant(dom, val)) continue;
            bool minimal = true;
            for (int i = 0; i < n && minimal; ++i)
                if ((dom & (1u << i)) && implicant(dom & ~(1u << i), val & ~(1u << i))) minimal = false;
            if (!minimal) continue;
            std::vector<std::pair<int, bool>> imp;
            for (int i = 0; i < n; ++i)
                if (dom & (1u << i)) imp.emplace_back(terms[i].var, static_cast<bool>(val & (1u << i)));
            out.insert(imp);
        }
    return out;
}

inline ImplicantSet as_set(const std::vector<colmu::Implicant>& got) {
    ImplicantSet s;
    for (const auto& imp : got) {
        std::vector<std::pair<int, bool>> v;
        for (const auto& l : imp) v.emplace_back(l.var, l.positive);
        s.insert(v);
    }
    return s;
}

// Nodes on cycles of the tableau graph, grouped by strongly connected component.
inline std::vector<std::vector<std::size_t>> tableau_cycles(const colmu::Tableau& t) {
    std::size_t n = t.nodes.size();
    std::vector<std::set<std::size_t>> reach(n);
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : t.edges) adj[e.from].push_back(e.to);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<std::size_t> stack(adj[s].begin(), adj[s].end());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            if (!reach[s].insert(v).second) continue;
            for (auto w : adj[v]) stack.push_back(w);
        }
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<bool> done(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (done[s] || !reach[s].count(s)) continue;
        std::vector<std::size_t> comp;
        for (std::size_t v = 0; v < n; ++v)
            if (reach[s].count(v) && reach[v].count(s)) {
                comp.push_back(v);
                done[v] = true;
            }
        out.push_back(comp);
    }
    return out;
}

// The nodes of a simple cycle in traversal order, or empty if the component
// is not a simple cycle.
inline std::vector<std::size_t> simple_cycle_order(const colmu::Tableau& t, const std::vector<std::size_t>& comp) {
    std::map<std::size_t, std::vector<std::size_t>> inside;
    for (const auto& e : t.edges)
        if (std::count(comp.begin(), comp.end(), e.from) && std::count(comp.begin(), comp.end(), e.to))
            inside[e.from].push_back(e.to);
    std::vector<std::size_t> order{comp[0]};
    for (;;) {
        const auto& next = inside[order.back()];
        if (next.size() != 1) return {};
        if (next[0] == comp[0]) break;
        if (std::count(order.begin(), order.end(), next[0])) return {};
        order.push_back(next[0]);
    }
    return order.size() == comp.size() ? order : std::vector<std::size_t>{};
}

// Odd maximal priorities of the traces that go once around the cycle and return
// to their starting formula; found by exhaustive walks over (formula, offset).
inline std::set<int> bad_trace_peaks(const colmu::Tableau& t, const colmu::ClosureIndex& cl,
                                     const std::vector<std::size_t>& order, const colmu::Signature& sig) {
    using namespace colmu;
    std::vector<IdTile> tiles;
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t v = order[i], w = order[(i + 1) % order.size()];
        std::size_t c = 0;
        for (const auto& e : t.edges)
            if (e.from == v && e.to == w) c = e.conclusion;
        IdSet ids;
        for (const auto& f : t.nodes[v].label) ids.push_back(cl.id(f));
        std::sort(ids.begin(), ids.end());
        Blueprint bp = *t.nodes[v].annotation;
        if (bp.kind == BlueprintKind::Modal) {
            // parsed certificates carry no conclusion lists
            const auto& r = *bp.rule;
            bp.rule = std::make_shared<OneStepRule>(*instantiate_rule(r.schema, r.premise, r.split, r.r, r.s, r.k, sig));
        }
        tiles.push_back({ids, *to_id_blueprint(cl, bp), c});
    }
    std::set<int> peaks;
    std::size_t L = tiles.size();
    for (FormulaId f = 0; f < cl.size(); ++f) {
        if (!std::binary_search(tiles[0].sequent.begin(), tiles[0].sequent.end(), f)) continue;
        std::set<std::pair<FormulaId, std::size_t>> seen;
        std::function<void(FormulaId, std::size_t, std::size_t, int)> walk = [&](FormulaId g, std::size_t pos,
                                                                                 std::size_t steps, int top) {
            if (steps > 0 && pos == 0 && g == f) {
                if (top % 2 == 1) peaks.insert(top);
                return;
            }
            if (!seen.insert({g, pos}).second) return;
            for (auto [x, y] : trace_relation(cl, tiles[pos].sequent, tiles[pos].blueprint, tiles[pos].conclusion))
                if (x == g) walk(y, (pos + 1) % L, steps + 1, std::max(top, cl[y].priority));
            seen.erase({g, pos});
        };
        walk(f, 0, 0, cl[f].priority);
    }
    return peaks;
}

}  // namespace testsupport
