#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "avoid/board.hpp"
#include "avoid/canon.hpp"

namespace avoid {

/// Game value from the point of view of the side to move.
enum class Value : std::int8_t { MoverLoses = -1, Draw = 0, MoverWins = 1 };

constexpr Value negate(Value v) { return static_cast<Value>(-static_cast<int>(v)); }
std::string_view value_name(Value v);

/// Absolute outcome: the first player is Red.
enum class Outcome : std::uint8_t { FirstPlayerWins, SecondPlayerWins, Draw };
std::string_view outcome_name(Outcome o);
Outcome outcome_of(Value v, Player mover);

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t table_hits = 0;
  int max_depth = 0;
  double elapsed_ms = 0;
};

struct SolveResult {
  Value value = Value::Draw;
  Outcome outcome = Outcome::Draw;
  /// Winning move, drawing move, or (when lost) the least legal move.
  std::optional<EdgeId> best_move;
  SolveStats stats;
};

struct SolverOptions {
  /// Expand one move per free-edge orbit instead of every legal move.
  bool orbit_pruning = true;
  std::uint64_t max_nodes = 1'000'000'000;
  std::chrono::milliseconds max_time = std::chrono::minutes(30);
};

/// Thrown by best_move when asked for a winning move from a lost position.
class PositionLost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact win/draw/loss solver with a transposition table keyed on canonical
/// forms. Boards up to K_11 (edge sets fit a 64-bit word).
class Solver {
 public:
  explicit Solver(RuleSet rules, SolverOptions options = {});

  /// Throws GameOver on finished positions and BudgetExceeded on budget
  /// overrun (the table keeps every completed entry).
  SolveResult solve(const Position& p);

  /// A value-preserving move, lowest EdgeId among equals.
  EdgeId best_move(const Position& p);

  /// Value of the position after `e` is claimed, from the claimer's side.
  Value move_value(const Position& p, EdgeId e);

  const RuleSet& rules() const { return rules_; }
  std::size_t table_size() const { return table_.size(); }
  const SolveStats& cumulative_stats() const { return total_; }

 private:
  struct Node {
    std::uint64_t red = 0;
    std::uint64_t blue = 0;
    int red_count = 0;
    int blue_count = 0;
  };

  Value negamax(const Node& node, int depth);
  Value evaluate_move(const Node& node, EdgeId e, int depth);
  std::uint64_t legal_mask(const Node& node, Player mover) const;
  std::uint64_t touched(std::uint64_t edges) const;
  Node node_of(const Position& p) const;
  void tick();

  RuleSet rules_;
  SolverOptions options_;
  int n_ = 0;
  std::uint64_t all_edges_ = 0;
  std::vector<std::uint64_t> incident_;   // per vertex
  std::vector<std::uint64_t> vertex_bits_;  // per edge: endpoint bits
  std::unordered_map<CanonicalKey, Value, CanonicalKeyHash> table_;
  SolveStats run_;
  SolveStats total_;
  std::chrono::steady_clock::time_point deadline_;
};

/// Every terminal reachable from the empty board (any play, not just
/// optimal), counted once per isomorphism class of terminal position.
struct TerminalCensus {
  std::uint64_t classes_visited = 0;
  std::map<std::string, std::uint64_t> terminals;  // "R:opponent_completed_forbidden" etc.
  std::uint64_t draws = 0;
};

TerminalCensus enumerate_terminals(int n, const RuleSet& r, std::uint64_t max_classes = 50'000'000);

}  // namespace avoid
