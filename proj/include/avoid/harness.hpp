#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "avoid/board.hpp"
#include "avoid/canon.hpp"
#include "avoid/strategies.hpp"

namespace avoid {

/// Which Red openings a verification run enumerates.
enum class RootConstraint : std::uint8_t {
  All,                // every Red line
  FirstTwoDisjoint,   // Red's second edge shares no vertex with his first
  ScriptCase,         // only lines that applicable_case hands to the script
};

std::string_view root_constraint_name(RootConstraint r);
std::optional<RootConstraint> parse_root_constraint(std::string_view name);
/// The constraint each strategy is certified under.
RootConstraint default_root_constraint(StrategyId s);

struct VerifyBudget {
  std::chrono::milliseconds max_time = std::chrono::minutes(60);
  std::uint64_t max_lines = 0;  // 0 = unlimited
};

struct FailureRecord {
  std::string kind;  // "blue-forbidden", "desync", "draw", "position-lost", "budget"
  std::string detail;
  std::vector<Move> history;
  std::vector<nlohmann::json> traces;  // one per Blue move, null for solver moves
};

struct ClaimRecord {
  std::string claim;
  std::string detail;
  std::vector<Move> history;
};

struct VerificationReport {
  Game game = Game::P4;
  int n = 0;
  StrategyId strategy = StrategyId::Th1Case4;
  RootConstraint root = RootConstraint::All;
  bool complete = true;
  std::uint64_t lines_explored = 0;
  /// "<winner>:<reason>" (or "draw") -> lines.
  std::map<std::string, std::uint64_t> terminal_histogram;
  int max_game_length = 0;
  std::uint64_t memo_hits = 0;
  std::uint64_t failure_lines = 0;  // counts lines, memo-merged ones included
  std::vector<FailureRecord> failures;  // distinct failures, capped
  std::uint64_t claim_violation_count = 0;
  std::vector<ClaimRecord> claim_violations;  // capped
  std::uint64_t scripted_moves = 0;
  std::uint64_t solver_moves = 0;
  double seconds = 0;

  bool passed() const { return complete && failure_lines == 0; }
};

nlohmann::json report_to_json(const VerificationReport& r);
std::string report_summary(const VerificationReport& r);

struct ExhaustOptions {
  /// Unset: default_root_constraint for exhaust_verify, ScriptCase for fuzz_verify.
  std::optional<RootConstraint> root;
  bool memoize = true;
  VerifyBudget budget;
  SolverOptions solver;
  std::size_t max_recorded = 20;  // failures and claim violations kept verbatim
};

/// Every Red line against HybridBlue (the strategy's script where it
/// applies, the solver elsewhere). Throws OutOfRange for n > 11 and
/// std::invalid_argument when the strategy does not belong to the game.
VerificationReport exhaust_verify(StrategyId s, Game g, int n, const ExhaustOptions& opt = {});

/// Uniformly random legal Red moves, `samples` games, deterministic in seed.
/// Above K_11 only scripted lines can be answered, hence the ScriptCase default.
VerificationReport fuzz_verify(StrategyId s, Game g, int n, std::uint64_t samples, std::uint64_t seed,
                               const ExhaustOptions& opt = {});

}  // namespace avoid
