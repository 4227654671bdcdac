#include "avoid/edges.hpp"

#include <array>
#include <cmath>

namespace avoid {

EdgeId edge_id(Vertex u, Vertex v, int n) {
  if (n < 2 || n > kMaxVertices) throw OutOfRange("vertex count out of range: " + std::to_string(n));
  if (u == v) throw OutOfRange("loop edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
  if (u < 0 || v < 0 || u >= n || v >= n) {
    throw OutOfRange("vertex out of range for n=" + std::to_string(n) + ": {" + std::to_string(u) + "," +
                     std::to_string(v) + "}");
  }
  return edge_id_unchecked(u, v, n);
}

Edge edge_endpoints(EdgeId e, int n) {
  if (e < 0 || e >= edge_count(n)) throw OutOfRange("edge id out of range: " + std::to_string(e));
  // Row u holds n-1-u pairs; walk rows (n <= 64, so this is cheap).
  Vertex u = 0;
  int remaining = e;
  while (remaining >= n - 1 - u) {
    remaining -= n - 1 - u;
    ++u;
  }
  return {u, u + 1 + remaining};
}

std::string_view player_code(Player p) { return p == Player::Red ? "R" : "B"; }

std::optional<Player> parse_player(std::string_view code) {
  if (code == "R" || code == "red" || code == "Red") return Player::Red;
  if (code == "B" || code == "blue" || code == "Blue") return Player::Blue;
  return std::nullopt;
}

std::string_view forbidden_name(Forbidden f) {
  switch (f) {
    case Forbidden::SubgraphP4: return "P4";
    case Forbidden::ComponentGT3: return "CC>3";
    case Forbidden::MaxDegreeGE3: return "S3";
    case Forbidden::AnyCycle: return "cycle";
    case Forbidden::Triangle: return "triangle";
  }
  return "?";
}

namespace {

struct GameInfo {
  Game game;
  std::string_view name;
  RuleSet rules;
  int min_n;
};

constexpr std::array<GameInfo, 6> kGames{{
    {Game::P4, "p4", {Forbidden::SubgraphP4, false}, 8},
    {Game::CC3, "cc3", {Forbidden::ComponentGT3, false}, 5},
    {Game::CS3, "cs3", {Forbidden::MaxDegreeGE3, true}, 7},
    {Game::CP4, "cp4", {Forbidden::SubgraphP4, true}, 5},
    {Game::CCycle, "ccycle", {Forbidden::AnyCycle, true}, 6},
    {Game::Sim, "sim", {Forbidden::Triangle, false}, 6},
}};

const GameInfo& info(Game g) {
  for (const auto& gi : kGames)
    if (gi.game == g) return gi;
  throw std::logic_error("unknown game");
}

}  // namespace

RuleSet rules_for(Game g) { return info(g).rules; }
std::string_view game_name(Game g) { return info(g).name; }
int theorem_min_n(Game g) { return info(g).min_n; }

std::optional<Game> parse_game(std::string_view name) {
  for (const auto& gi : kGames)
    if (gi.name == name) return gi.game;
  return std::nullopt;
}

}  // namespace avoid
