#pragma once

// Test-side generators and brute-force oracles.  Nothing here calls into the
// solver code it is used to check.

#include "colmu/formula.hpp"
#include "colmu/parity_game.hpp"

#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testsupport {

using colmu::Formula;
using colmu::Modality;
using colmu::Signature;

inline Modality random_modality(const Signature& sig, std::mt19937_64& rng, bool plain) {
    using colmu::Logic;
    switch (sig.logic) {
        case Logic::Kripke:
        case Logic::Monotone: return plain ? Modality::box(sig.logic) : Modality::dia(sig.logic);
        case Logic::Graded: {
            std::int64_t g = static_cast<std::int64_t>(rng() % 3);
            return plain ? Modality::more_than(g) : Modality::graded_box(g);
        }
        case Logic::Probabilistic: {
            static const colmu::Rational ps[] = {colmu::Rational(1, 2), colmu::Rational(1, 3), colmu::Rational(2, 3),
                                                 colmu::Rational(1), colmu::Rational(0)};
            const auto& p = ps[rng() % 5];
            return plain ? Modality::at_least(p) : Modality::prob_box(p);
        }
        case Logic::Coalition: {
            std::uint32_t c = static_cast<std::uint32_t>(rng()) & sig.grand_coalition();
            return plain ? Modality::can_force(c) : Modality::cannot_prevent(c);
        }
    }
    return Modality::box(sig.logic);
}

// Clean, guarded formula with free variables among p, q and binders X0, X1, ...
struct FormulaGen {
    Signature sig;
    std::mt19937_64 rng;
    int next_binder = 0;

    FormulaGen(Signature s, std::uint64_t seed) : sig(s), rng(seed) {}

    Formula operator()(int depth) {
        next_binder = 0;
        return gen(depth, {}, {});
    }

    Formula gen(int depth, std::vector<std::string> guarded, std::vector<std::string> unguarded) {
        int choice = depth <= 0 ? 0 : static_cast<int>(rng() % 10);
        switch (choice) {
            case 0:
            case 1: {
                if (!guarded.empty() && rng() % 2) return Formula::var(guarded[rng() % guarded.size()]);
                return Formula::var(rng() % 2 ? "p" : "q", rng() % 2);
            }
            case 2:
            case 3: {
                auto a = gen(depth - 1, guarded, unguarded);
                auto b = gen(depth - 1, guarded, unguarded);
                return choice == 2 ? Formula::disj(a, b) : Formula::conj(a, b);
            }
            case 4:
            case 5:
            case 6: {
                auto g = guarded;
                g.insert(g.end(), unguarded.begin(), unguarded.end());
                return Formula::modal(random_modality(sig, rng, rng() % 2), gen(depth - 1, g, {}));
            }
            default: {
                std::string x = "X" + std::to_string(next_binder++);
                auto u = unguarded;
                u.push_back(x);
                auto body = gen(depth - 1, guarded, u);
                return rng() % 2 ? Formula::mu(x, body) : Formula::nu(x, body);
            }
        }
    }
};

// Brute-force parity game oracle: Exists wins v iff some positional Exists
// strategy leaves Forall no winning path in the resulting one-player graph.
inline std::vector<colmu::Player> brute_force_winners(const colmu::ParityArena& a) {
    using colmu::Player;
    const std::size_t n = a.size();
    std::vector<std::size_t> choice_count(n, 1);
    std::vector<std::size_t> e_positions;
    for (std::size_t v = 0; v < n; ++v)
        if (a.owner[v] == Player::Exists && !a.moves[v].empty()) {
            e_positions.push_back(v);
            choice_count[v] = a.moves[v].size();
        }
    std::vector<char> e_wins(n, 0);
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
        // successor lists under the current Exists strategy
        std::vector<std::vector<std::size_t>> succ(n);
        for (std::size_t v = 0; v < n; ++v) {
            if (a.owner[v] == Player::Exists) {
                if (!a.moves[v].empty()) succ[v] = {a.moves[v][pick[v]]};
            } else {
                for (auto w : a.moves[v]) succ[v].push_back(w);
            }
        }
        auto reach = [&](std::size_t from, const std::function<bool(std::size_t)>& allowed) {
            std::vector<char> seen(n, 0);
            std::vector<std::size_t> stack{from};
            seen[from] = allowed(from);
            if (!seen[from]) return seen;
            while (!stack.empty()) {
                auto v = stack.back();
                stack.pop_back();
                for (auto w : succ[v])
                    if (!seen[w] && allowed(w)) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
            }
            return seen;
        };
        // Forall-good targets: Exists dead ends, and odd nodes on a cycle of smaller-or-equal priorities
        std::vector<char> good(n, 0);
        for (std::size_t v = 0; v < n; ++v) {
            if (a.owner[v] == Player::Exists && a.moves[v].empty()) good[v] = 1;
            if (a.priority[v] % 2 == 1) {
                int pv = a.priority[v];
                auto ok = [&](std::size_t w) { return a.priority[w] <= pv; };
                for (auto w : succ[v])
                    if (ok(w) && reach(w, ok)[v]) good[v] = 1;
            }
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (e_wins[v]) continue;
            auto r = reach(v, [](std::size_t) { return true; });
            bool forall_wins = false;
            for (std::size_t w = 0; w < n; ++w) forall_wins |= r[w] && good[w];
            if (!forall_wins) e_wins[v] = 1;
        }
        std::size_t i = 0;
        while (i < e_positions.size() && pick[e_positions[i]] + 1 == choice_count[e_positions[i]])
            pick[e_positions[i++]] = 0;
        if (i == e_positions.size()) break;
        ++pick[e_positions[i]];
    }
    std::vector<Player> w(n);
    for (std::size_t v = 0; v < n; ++v) w[v] = e_wins[v] ? Player::Exists : Player::Forall;
    return w;
}

inline colmu::ParityArena random_arena(std::mt19937_64& rng, int max_positions, int max_priority, int max_moves) {
    colmu::ParityArena a;
    int n = 1 + static_cast<int>(rng() % max_positions);
    for (int v = 0; v < n; ++v)
        a.add(rng() % 2 ? colmu::Player::Exists : colmu::Player::Forall, static_cast<int>(rng() % (max_priority + 1)));
    for (int v = 0; v < n; ++v) {
        int m = static_cast<int>(rng() % (max_moves + 1));
        for (int j = 0; j < m; ++j) a.add_move(v, static_cast<colmu::Position>(rng() % n));
    }
    return a;
}

}  // namespace testsupport
