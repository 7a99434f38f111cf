#include "colmu/parity_game.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace colmu {

Position ParityArena::add(Player p, int prio) {
    owner.push_back(p);
    priority.push_back(prio);
    moves.emplace_back();
    return static_cast<Position>(owner.size() - 1);
}

void ParityArena::validate() const {
    if (priority.size() != owner.size() || moves.size() != owner.size())
        throw std::invalid_argument("arena: inconsistent table sizes");
    if (!owner.empty() && initial >= owner.size()) throw std::invalid_argument("arena: initial position out of range");
    for (std::size_t v = 0; v < size(); ++v) {
        if (priority[v] < 0) throw std::invalid_argument("arena: negative priority");
        for (Position w : moves[v])
            if (w >= size()) throw std::invalid_argument("arena: move to unknown position");
    }
}

namespace {

class Zielonka {
public:
    explicit Zielonka(const ParityArena& a) : a_(a), n_(a.size()), preds_(n_) {
        for (Position v = 0; v < n_; ++v)
            for (Position w : a.moves[v]) preds_[w].push_back(v);
        for (auto& p : preds_) {
            std::sort(p.begin(), p.end());
            p.erase(std::unique(p.begin(), p.end()), p.end());
        }
        sol_.winner.assign(n_, Player::Exists);
        sol_.strategy.assign(n_, kNoPosition);
    }

    ParitySolution run() {
        using Set = std::vector<char>;
        Set all(n_, 1);
        // dead ends: their owner loses; remove both attractors first
        Set dead_e(n_, 0), dead_a(n_, 0);
        for (Position v = 0; v < n_; ++v)
            if (a_.moves[v].empty()) (a_.owner[v] == Player::Exists ? dead_e : dead_a)[v] = 1;
        Set wa = attractor(all, dead_e, Player::Forall);
        assign(wa, Player::Forall);
        Set rest = minus(all, wa);
        Set we = attractor(rest, intersect(rest, dead_a), Player::Exists);
        assign(we, Player::Exists);
        rest = minus(rest, we);
        auto [e, f] = solve(rest);
        assign(e, Player::Exists);
        assign(f, Player::Forall);
        return std::move(sol_);
    }

private:
    using Set = std::vector<char>;
    const ParityArena& a_;
    std::size_t n_;
    std::vector<std::vector<Position>> preds_;
    ParitySolution sol_;

    void assign(const Set& s, Player p) {
        for (Position v = 0; v < n_; ++v)
            if (s[v]) sol_.winner[v] = p;
    }

    Set minus(const Set& a, const Set& b) const {
        Set r(n_, 0);
        for (Position v = 0; v < n_; ++v) r[v] = a[v] && !b[v];
        return r;
    }
    Set intersect(const Set& a, const Set& b) const {
        Set r(n_, 0);
        for (Position v = 0; v < n_; ++v) r[v] = a[v] && b[v];
        return r;
    }
    static bool empty(const Set& s) { return std::find(s.begin(), s.end(), 1) == s.end(); }

    // Attractor for p to target inside the subgame g; records attractor moves.
    Set attractor(const Set& g, const Set& target, Player p) {
        Set in(n_, 0);
        std::vector<int> count(n_, 0);
        std::vector<Position> queue;
        for (Position v = 0; v < n_; ++v) {
            if (!g[v]) continue;
            std::vector<Position> succ = a_.moves[v];
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            for (Position w : succ) count[v] += g[w] ? 1 : 0;
            if (target[v]) {
                in[v] = 1;
                queue.push_back(v);
            }
        }
        // queue order is a valid rank, so any successor already in may be chosen
        for (std::size_t head = 0; head < queue.size(); ++head) {
            Position w = queue[head];
            for (Position v : preds_[w]) {
                if (!g[v] || in[v]) continue;
                if (a_.owner[v] == p) {
                    Position best = kNoPosition;
                    for (Position u : a_.moves[v])
                        if (in[u] && g[u]) best = std::min(best, u);
                    sol_.strategy[v] = best;
                    in[v] = 1;
                    queue.push_back(v);
                } else {
                    if (--count[v] == 0) {
                        in[v] = 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        return in;
    }

    std::pair<Set, Set> solve(const Set& g) {
        Set none(n_, 0);
        if (empty(g)) return {none, none};
        int d = -1;
        for (Position v = 0; v < n_; ++v)
            if (g[v]) d = std::max(d, a_.priority[v]);
        Player p = parity_winner(d);
        Set top(n_, 0);
        for (Position v = 0; v < n_; ++v) top[v] = g[v] && a_.priority[v] == d;
        Set attr = attractor(g, top, p);
        for (Position v = 0; v < n_; ++v)
            if (top[v] && a_.owner[v] == p) sol_.strategy[v] = least_in(v, g);
        auto [e1, f1] = solve(minus(g, attr));
        Set& opp1 = p == Player::Exists ? f1 : e1;
        if (empty(opp1)) {
            return p == Player::Exists ? std::pair{g, none} : std::pair{none, g};
        }
        Set b = attractor(g, opp1, opponent(p));
        auto [e2, f2] = solve(minus(g, b));
        Set& opp2 = p == Player::Exists ? f2 : e2;
        Set& own2 = p == Player::Exists ? e2 : f2;
        for (Position v = 0; v < n_; ++v) opp2[v] = opp2[v] || b[v];
        return p == Player::Exists ? std::pair{own2, opp2} : std::pair{opp2, own2};
    }

    Position least_in(Position v, const Set& g) const {
        Position best = kNoPosition;
        for (Position w : a_.moves[v])
            if (g[w]) best = std::min(best, w);
        return best;
    }
};

}  // namespace

ParitySolution solve(const ParityArena& arena) {
    arena.validate();
    ParitySolution sol = Zielonka(arena).run();
    for (Position v = 0; v < arena.size(); ++v)
        if (arena.owner[v] != sol.winner[v] || arena.moves[v].empty()) sol.strategy[v] = kNoPosition;
    return sol;
}

Player evaluate_play(const ParityArena& arena, const std::vector<Position>& stem, const std::vector<Position>& cycle) {
    if (cycle.empty()) throw std::invalid_argument("lasso: empty cycle");
    auto legal = [&](Position v, Position w) {
        if (v >= arena.size() || w >= arena.size()) return false;
        const auto& m = arena.moves[v];
        return std::find(m.begin(), m.end(), w) != m.end();
    };
    std::vector<Position> seq = stem;
    seq.insert(seq.end(), cycle.begin(), cycle.end());
    seq.push_back(cycle.front());
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!legal(seq[i], seq[i + 1])) throw std::invalid_argument("lasso: illegal move");
    int top = -1;
    for (Position v : cycle) top = std::max(top, arena.priority[v]);
    return parity_winner(top);
}

std::string dump_arena(const ParityArena& arena) {
    std::ostringstream os;
    os << "parity " << (arena.size() ? arena.size() - 1 : 0) << ";\n";
    for (Position v = 0; v < arena.size(); ++v) {
        os << v << ' ' << arena.priority[v] << ' ' << (arena.owner[v] == Player::Exists ? 0 : 1) << ' ';
        for (std::size_t i = 0; i < arena.moves[v].size(); ++i) os << (i ? "," : "") << arena.moves[v][i];
        os << ";\n";
    }
    return os.str();
}

}  // namespace colmu
