#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "avoid/board.hpp"
#include "avoid/solver.hpp"

namespace avoid {

/// The explicit Blue strategies. Names: "th1case4" (P4), "th2case5" (CC>3),
/// "th3case2" (CAvoider S3), "th4" (CAvoider P4), "th5case2" (CAvoider cycle).
enum class StrategyId : std::uint8_t { Th1Case4, Th2Case5, Th3Case2, Th4, Th5Case2 };

std::string_view strategy_name(StrategyId s);
std::optional<StrategyId> parse_strategy(std::string_view name);
Game game_of(StrategyId s);
std::optional<StrategyId> strategy_for(Game g);

/// Which line of play the first three moves put us in.
enum class CaseTag : std::uint8_t {
  Opening,  // Blue's first move: every script has one
  Th1Case4,
  Th2Case5,
  Th3Case2,
  Th4Case1,
  Th4Case2,
  Th5Case2,
  SolverFallback,
};

std::string_view case_name(CaseTag c);

class NotBluesTurn : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The position left the situations a script was written for: an occupied
/// mandated edge, a missing vertex the proof says exists, or no rule applies.
class ScriptDesync : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classifies by the first two Red edges and Blue's first edge. Positions
/// whose Blue opening differs from the script's are SolverFallback.
CaseTag applicable_case(Game g, const Position& p);

struct RuleTrace {
  std::string theorem;  // strategy name
  std::string stage;
  std::string rule;
  EdgeId edge = -1;
};

nlohmann::json trace_to_json(const RuleTrace& t, int n);

struct ScriptMove {
  EdgeId edge = -1;
  RuleTrace trace;
};

/// A proof claim that failed at runtime. The script keeps playing; the
/// harness reports every violation.
struct ClaimViolation {
  std::string claim;
  std::string detail;
};

/// A Blue rule machine. `next` is called once per Blue turn, in order, on
/// positions that extend the previous call by Blue's reply and one Red move.
class Script {
 public:
  virtual ~Script() = default;
  virtual std::unique_ptr<Script> clone() const = 0;
  virtual StrategyId id() const = 0;

  /// Throws NotBluesTurn, and ScriptDesync when the position is outside the
  /// script's reach or the mandated edge is taken or illegal.
  ScriptMove next(const Position& p);

  /// Serialised bookkeeping; equal digests plus equal positions mean equal
  /// future behaviour.
  virtual std::string digest() const = 0;

  const std::vector<ClaimViolation>& violations() const { return violations_; }
  int turns() const { return static_cast<int>(mine_.size()); }

 protected:
  virtual ScriptMove decide(const Position& p) = 0;

  void violate(std::string claim, std::string detail) {
    violations_.push_back({std::move(claim), std::move(detail)});
  }

 private:
  std::vector<EdgeId> mine_;
  std::vector<ClaimViolation> violations_;
};

std::unique_ptr<Script> make_script(StrategyId s, int n);

enum class MoveOrigin : std::uint8_t { Script, Solver, Fallback };
std::string_view origin_name(MoveOrigin o);

struct BlueChoice {
  EdgeId edge = -1;
  MoveOrigin origin = MoveOrigin::Solver;
  std::optional<RuleTrace> trace;
  std::vector<ClaimViolation> violations;
};

/// Stateful Blue for one game: the script while the line is covered and in
/// sync, the solver otherwise. Scripts run only for n at or above the
/// theorem's bound.
class HybridBlue {
 public:
  HybridBlue(Game g, int n, SolverOptions solver_options = {});
  HybridBlue(const HybridBlue& other);
  HybridBlue& operator=(const HybridBlue& other);

  /// Throws NotBluesTurn, ScriptDesync (scripted lines), BudgetExceeded and
  /// PositionLost (solver lines).
  BlueChoice next(const Position& p);

  bool scripted() const { return script_ != nullptr; }
  /// "solver", "pending" or the script digest.
  std::string digest() const;

 private:
  Game game_;
  int n_;
  SolverOptions solver_options_;
  std::unique_ptr<Script> script_;
  bool decided_ = false;
  std::shared_ptr<Solver> solver_;
};

/// Stateless form: replays Blue's history through a fresh script; if every
/// earlier Blue move matches, answers from the script, else from the solver.
/// With fallback_on_budget, a solver overrun returns the lowest legal move
/// with origin Fallback.
BlueChoice hybrid_blue_move(const Position& p, Game g, SolverOptions solver_options = {},
                            bool fallback_on_budget = false);

}  // namespace avoid
