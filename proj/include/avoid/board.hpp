#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "avoid/detectors.hpp"
#include "avoid/edges.hpp"

namespace avoid {

enum class CellState : std::uint8_t { Free, Red, Blue };

constexpr CellState cell_of(Player p) { return p == Player::Red ? CellState::Red : CellState::Blue; }

struct Move {
  Player player = Player::Red;
  EdgeId edge = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

class IllegalMove : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GameOver : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A board of K_n with a claimed colour per edge. Side to move is derived
/// from the edge counts (Red moves first, no passes).
class Position {
 public:
  explicit Position(int n);

  int n() const { return n_; }
  int num_edges() const { return static_cast<int>(cells_.size()); }

  CellState cell(EdgeId e) const { return cells_[e]; }
  CellState cell(Vertex u, Vertex v) const { return cells_[edge_id_unchecked(u, v, n_)]; }
  bool is_free(EdgeId e) const { return cells_[e] == CellState::Free; }
  bool is_free(Vertex u, Vertex v) const { return cell(u, v) == CellState::Free; }

  const std::vector<Move>& history() const { return history_; }
  int red_count() const { return red_count_; }
  int blue_count() const { return blue_count_; }
  int free_count() const { return num_edges() - red_count_ - blue_count_; }
  Player to_move() const { return red_count_ == blue_count_ ? Player::Red : Player::Blue; }
  std::optional<Move> last_move() const;

  std::vector<EdgeId> edges_of(Player p) const;
  PlayerGraph graph_of(Player p) const;
  /// Vertices touched by p.
  VertexMask touched_by(Player p) const;

  /// Colours e for the side to move. Only checks occupancy; rule-aware
  /// legality lives in apply_move.
  Position with_move(EdgeId e) const;
  void play(EdgeId e);

  /// 64-bit masks of red/blue edges; requires num_edges() <= 64.
  std::uint64_t red_mask() const;
  std::uint64_t blue_mask() const;

  friend bool operator==(const Position& a, const Position& b) {
    return a.n_ == b.n_ && a.cells_ == b.cells_ && a.history_ == b.history_;
  }

 private:
  int n_;
  std::vector<CellState> cells_;
  std::vector<Move> history_;
  int red_count_ = 0;
  int blue_count_ = 0;
};

struct GameStatus {
  enum class Reason : std::uint8_t { None, OpponentCompletedForbidden, OpponentHadNoLegalMove, Draw };

  bool finished = false;
  Player to_move = Player::Red;          // meaningful while in progress
  std::optional<Player> winner;          // empty for a draw
  Reason reason = Reason::None;

  bool in_progress() const { return !finished; }
  bool is_draw() const { return finished && reason == Reason::Draw; }
  friend bool operator==(const GameStatus&, const GameStatus&) = default;
};

std::string_view reason_name(GameStatus::Reason r);

/// Free edges the side to move may claim. Self-losing claims are legal.
std::vector<EdgeId> legal_moves(const Position& p, const RuleSet& r);
/// Legal moves ignoring whether the game has ended.
std::vector<EdgeId> candidate_moves(const Position& p, Player mover, const RuleSet& r);
bool is_legal(const Position& p, EdgeId e, const RuleSet& r);

Position apply_move(const Position& p, EdgeId e, const RuleSet& r);
GameStatus status(const Position& p, const RuleSet& r);

/// Rebuilds a position from its history, checking every move.
Position replay(int n, std::span<const Move> moves, const RuleSet& r);

nlohmann::json position_to_json(const Position& p);
/// Rejects out-of-turn or occupied claims; with rules, also rule legality
/// (including moves after the game ended).
Position position_from_json(const nlohmann::json& j, const std::optional<RuleSet>& rules = std::nullopt);

nlohmann::json status_to_json(const GameStatus& s);
nlohmann::json edge_to_json(EdgeId e, int n);

}  // namespace avoid
