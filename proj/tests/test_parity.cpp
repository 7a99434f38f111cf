#include "doctest.h"
#include "support.hpp"

#include "colmu/parity_game.hpp"

using namespace colmu;

namespace {

// Every play consistent with the winner's strategy, against every opponent
// choice, is won by that player: explore the graph restricted by the strategy.
bool strategy_wins(const ParityArena& a, const ParitySolution& s, Position v0) {
    Player p = s.winner[v0];
    ParityArena r = a;
    for (Position v = 0; v < a.size(); ++v) {
        if (a.owner[v] == p && !a.moves[v].empty()) {
            if (s.winner[v] != p) r.moves[v].clear();  // leaving the region forfeits
            else r.moves[v] = {s.strategy[v]};
        }
    }
    // now only the opponent chooses; the opponent wins in r iff they can reach a
    // dead end of p or a cycle whose maximum has their parity
    auto w = testsupport::brute_force_winners(r);
    return w[v0] == p;
}

}  // namespace

TEST_SUITE("parity_games") {
    TEST_CASE("small fixed arenas") {
        ParityArena a;
        a.add(Player::Exists, 0);
        a.add_move(0, 0);
        CHECK(solve(a).winner[0] == Player::Exists);
        ParityArena b;
        b.add(Player::Exists, 0);
        CHECK(solve(b).winner[0] == Player::Forall);
        ParityArena c;
        c.add(Player::Forall, 3);
        CHECK(solve(c).winner[0] == Player::Exists);
    }

    TEST_CASE("lasso evaluation") {
        ParityArena a;
        a.add(Player::Exists, 1);
        a.add(Player::Forall, 2);
        a.add(Player::Exists, 3);
        a.add_move(0, 1);
        a.add_move(1, 0);
        a.add_move(1, 2);
        a.add_move(2, 1);
        CHECK(evaluate_play(a, {}, {0, 1}) == Player::Exists);
        CHECK(evaluate_play(a, {0}, {1, 2}) == Player::Forall);
        CHECK_THROWS_AS(evaluate_play(a, {}, {0, 2}), std::invalid_argument);
        CHECK_THROWS_AS(evaluate_play(a, {}, {}), std::invalid_argument);
    }

    TEST_CASE("agreement with exhaustive strategy enumeration") {
        std::mt19937_64 rng(77);
        for (int t = 0; t < 500; ++t) {
            auto a = testsupport::random_arena(rng, 8, 4, 3);
            auto sol = solve(a);
            auto ref = testsupport::brute_force_winners(a);
            CHECK(sol.winner == ref);
        }
    }

    TEST_CASE("strategies are winning and legal") {
        std::mt19937_64 rng(78);
        for (int t = 0; t < 300; ++t) {
            auto a = testsupport::random_arena(rng, 8, 4, 3);
            auto sol = solve(a);
            for (Position v = 0; v < a.size(); ++v) {
                bool owned = a.owner[v] == sol.winner[v] && !a.moves[v].empty();
                CHECK((sol.strategy[v] != kNoPosition) == owned);
                if (owned) {
                    CHECK(std::find(a.moves[v].begin(), a.moves[v].end(), sol.strategy[v]) != a.moves[v].end());
                    CHECK(sol.winner[sol.strategy[v]] == sol.winner[v]);
                }
                CHECK(strategy_wins(a, sol, v));
            }
        }
    }

    TEST_CASE("strategy plays agree with lasso evaluation") {
        std::mt19937_64 rng(79);
        for (int t = 0; t < 200; ++t) {
            auto a = testsupport::random_arena(rng, 8, 4, 3);
            auto sol = solve(a);
            // follow both players' strategies, opponents picking their first move
            for (Position v0 = 0; v0 < a.size(); ++v0) {
                std::vector<Position> path{v0};
                std::vector<int> seen(a.size(), -1);
                Position v = v0;
                bool finite = false;
                while (seen[v] < 0) {
                    seen[v] = static_cast<int>(path.size()) - 1;
                    if (a.moves[v].empty()) {
                        finite = true;
                        break;
                    }
                    Position next = sol.strategy[v] != kNoPosition ? sol.strategy[v] : a.moves[v][0];
                    path.push_back(next);
                    v = next;
                }
                if (finite) {
                    CHECK(opponent(a.owner[v]) == sol.winner[v0]);
                    continue;
                }
                path.pop_back();
                std::vector<Position> stem(path.begin(), path.begin() + seen[v]);
                std::vector<Position> cycle(path.begin() + seen[v], path.end());
                Player w = evaluate_play(a, stem, cycle);
                // the player whose strategy was followed everywhere in their region wins
                bool all_in_region = true;
                for (Position u : path) all_in_region &= sol.winner[u] == sol.winner[v0];
                if (all_in_region) CHECK(w == sol.winner[v0]);
            }
        }
    }

    TEST_CASE("priority shift duality") {
        std::mt19937_64 rng(80);
        for (int t = 0; t < 300; ++t) {
            auto a = testsupport::random_arena(rng, 8, 4, 3);
            ParityArena d = a;
            for (Position v = 0; v < a.size(); ++v) {
                d.priority[v] += 1;
                d.owner[v] = opponent(a.owner[v]);
            }
            auto s1 = solve(a), s2 = solve(d);
            for (Position v = 0; v < a.size(); ++v) CHECK(s2.winner[v] == opponent(s1.winner[v]));
        }
    }

    TEST_CASE("dump format") {
        ParityArena a;
        a.add(Player::Exists, 2);
        a.add(Player::Forall, 1);
        a.add_move(0, 1);
        a.add_move(0, 0);
        CHECK(dump_arena(a) == "parity 1;\n0 2 0 1,0;\n1 1 1 ;\n");
    }
}
