#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace avoid {

using Vertex = int;
using EdgeId = int;

/// Largest board the engine accepts. Player graphs keep one 64-bit
/// adjacency word per vertex.
inline constexpr int kMaxVertices = 64;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class OutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A search or enumeration hit its node, time or size limit.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr int edge_count(int n) { return n * (n - 1) / 2; }

/// Lexicographic index of the unordered pair {u, v} among all pairs of [n].
/// id(u,v) = u*n - u(u+1)/2 + (v-u-1) for u < v.
EdgeId edge_id(Vertex u, Vertex v, int n);

/// Inverse of edge_id; the returned pair has u < v.
Edge edge_endpoints(EdgeId e, int n);

// Unchecked variants for hot loops.
constexpr EdgeId edge_id_unchecked(Vertex u, Vertex v, int n) {
  if (u > v) {
    const Vertex t = u;
    u = v;
    v = t;
  }
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

enum class Player : std::uint8_t { Red, Blue };

constexpr Player opponent(Player p) { return p == Player::Red ? Player::Blue : Player::Red; }
std::string_view player_code(Player p);  // "R" / "B"
std::optional<Player> parse_player(std::string_view code);

enum class Forbidden : std::uint8_t { SubgraphP4, ComponentGT3, MaxDegreeGE3, AnyCycle, Triangle };

std::string_view forbidden_name(Forbidden f);

struct RuleSet {
  Forbidden forbidden = Forbidden::SubgraphP4;
  bool connectivity_constrained = false;

  friend bool operator==(const RuleSet&, const RuleSet&) = default;
};

/// The six games the engine knows about.
enum class Game : std::uint8_t { P4, CC3, CS3, CP4, CCycle, Sim };

RuleSet rules_for(Game g);
std::string_view game_name(Game g);  // "p4", "cc3", "cs3", "cp4", "ccycle", "sim"
std::optional<Game> parse_game(std::string_view name);

/// Smallest n for which the explicit Blue win is claimed (Sim: 6).
int theorem_min_n(Game g);

/// Avoider-Avoider games (no connectivity constraint) where Ramsey rules out draws for n >= 5.
constexpr bool is_no_draw_aa_game(Game g) { return g == Game::P4 || g == Game::CC3; }

}  // namespace avoid
