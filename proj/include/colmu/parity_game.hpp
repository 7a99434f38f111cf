#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace colmu {

enum class Player : std::uint8_t { Exists, Forall };

inline Player opponent(Player p) { return p == Player::Exists ? Player::Forall : Player::Exists; }
inline Player parity_winner(int priority) { return priority % 2 == 0 ? Player::Exists : Player::Forall; }

using Position = std::uint32_t;
inline constexpr Position kNoPosition = 0xffffffffu;

struct ParityArena {
    std::vector<Player> owner;
    std::vector<int> priority;
    std::vector<std::vector<Position>> moves;
    Position initial = 0;

    Position add(Player p, int prio);
    void add_move(Position from, Position to) { moves[from].push_back(to); }
    std::size_t size() const { return owner.size(); }
    void validate() const;  // throws std::invalid_argument
};

// strategy[v] is the chosen successor for positions owned by their winner that
// have moves; kNoPosition elsewhere.
struct ParitySolution {
    std::vector<Player> winner;
    std::vector<Position> strategy;
};

// Zielonka's algorithm; a player who cannot move loses, an infinite play is won by
// Exists iff the largest priority seen infinitely often is even.  Among winning
// moves the least successor index is chosen where the algorithm leaves a choice.
ParitySolution solve(const ParityArena& arena);

// Winner of the lasso stem.cycle^omega; throws std::invalid_argument if it is not
// a play of the arena.
Player evaluate_play(const ParityArena& arena, const std::vector<Position>& stem, const std::vector<Position>& cycle);

// PGSolver-style text: "parity N;" then "id priority owner succ,succ,...;" per line
// (owner 0 = Exists).
std::string dump_arena(const ParityArena& arena);

}  // namespace colmu
