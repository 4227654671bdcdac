#include "avoid/strategies.hpp"

#include "script_support.hpp"

namespace avoid {

std::string_view strategy_name(StrategyId s) {
  switch (s) {
    case StrategyId::Th1Case4: return "th1case4";
    case StrategyId::Th2Case5: return "th2case5";
    case StrategyId::Th3Case2: return "th3case2";
    case StrategyId::Th4: return "th4";
    case StrategyId::Th5Case2: return "th5case2";
  }
  return "?";
}

std::optional<StrategyId> parse_strategy(std::string_view name) {
  for (auto s : {StrategyId::Th1Case4, StrategyId::Th2Case5, StrategyId::Th3Case2, StrategyId::Th4, StrategyId::Th5Case2})
    if (strategy_name(s) == name) return s;
  return std::nullopt;
}

Game game_of(StrategyId s) {
  switch (s) {
    case StrategyId::Th1Case4: return Game::P4;
    case StrategyId::Th2Case5: return Game::CC3;
    case StrategyId::Th3Case2: return Game::CS3;
    case StrategyId::Th4: return Game::CP4;
    case StrategyId::Th5Case2: return Game::CCycle;
  }
  return Game::P4;
}

std::optional<StrategyId> strategy_for(Game g) {
  switch (g) {
    case Game::P4: return StrategyId::Th1Case4;
    case Game::CC3: return StrategyId::Th2Case5;
    case Game::CS3: return StrategyId::Th3Case2;
    case Game::CP4: return StrategyId::Th4;
    case Game::CCycle: return StrategyId::Th5Case2;
    case Game::Sim: return std::nullopt;
  }
  return std::nullopt;
}

std::string_view case_name(CaseTag c) {
  switch (c) {
    case CaseTag::Opening: return "Opening";
    case CaseTag::Th1Case4: return "Th1Case4";
    case CaseTag::Th2Case5: return "Th2Case5";
    case CaseTag::Th3Case2: return "Th3Case2";
    case CaseTag::Th4Case1: return "Th4Case1";
    case CaseTag::Th4Case2: return "Th4Case2";
    case CaseTag::Th5Case2: return "Th5Case2";
    case CaseTag::SolverFallback: return "SolverFallback";
  }
  return "?";
}

std::string_view origin_name(MoveOrigin o) {
  switch (o) {
    case MoveOrigin::Script: return "script";
    case MoveOrigin::Solver: return "solver";
    case MoveOrigin::Fallback: return "fallback";
  }
  return "?";
}

namespace {

bool touches(Edge e, Vertex x) { return e.u == x || e.v == x; }
int shared(Edge a, Edge b) { return touches(a, b.u) + touches(a, b.v); }

}  // namespace

CaseTag applicable_case(Game g, const Position& p) {
  if (p.to_move() != Player::Blue) throw NotBluesTurn("applicable_case: Red to move");
  if (p.red_count() == 1) return g == Game::Sim ? CaseTag::SolverFallback : CaseTag::Opening;
  const int n = p.n();
  const Edge red1 = edge_endpoints(p.history()[0].edge, n);
  const Edge blue1 = edge_endpoints(p.history()[1].edge, n);
  const Edge red2 = edge_endpoints(p.history()[2].edge, n);
  auto black = [&](Vertex z) { return !touches(red1, z) && !touches(blue1, z); };
  switch (g) {
    case Game::P4:
      if (shared(red1, blue1) != 0) return CaseTag::SolverFallback;
      return black(red2.u) && black(red2.v) ? CaseTag::Th1Case4 : CaseTag::SolverFallback;
    case Game::CC3: {
      if (shared(red1, blue1) != 1) return CaseTag::SolverFallback;
      const Vertex v = touches(red1, blue1.u) ? blue1.u : blue1.v;
      const Vertex i = v == blue1.u ? blue1.v : blue1.u;
      const Vertex u = v == red1.u ? red1.v : red1.u;
      return red2 == Edge{std::min(u, i), std::max(u, i)} ? CaseTag::Th2Case5 : CaseTag::SolverFallback;
    }
    case Game::CS3:
    case Game::CP4:
    case Game::CCycle: {
      if (shared(red1, blue1) != 0 || shared(red1, red2) != 1) return CaseTag::SolverFallback;
      const Vertex y = touches(red1, red2.u) ? red2.v : red2.u;
      if (g == Game::CP4) return black(y) ? CaseTag::Th4Case1 : CaseTag::Th4Case2;
      if (!black(y)) return CaseTag::SolverFallback;
      return g == Game::CS3 ? CaseTag::Th3Case2 : CaseTag::Th5Case2;
    }
    case Game::Sim:
      return CaseTag::SolverFallback;
  }
  return CaseTag::SolverFallback;
}

nlohmann::json trace_to_json(const RuleTrace& t, int n) {
  nlohmann::json j{{"theorem", t.theorem}, {"stage", t.stage}, {"rule", t.rule}};
  j["edge"] = t.edge >= 0 ? edge_to_json(t.edge, n) : nlohmann::json(nullptr);
  return j;
}

ScriptMove Script::next(const Position& p) {
  if (p.to_move() != Player::Blue) throw NotBluesTurn("script called on Red's turn");
  if (p.blue_count() != turns()) throw ScriptDesync("position does not extend the scripted line");
  {
    int k = 0;
    for (const Move& m : p.history())
      if (m.player == Player::Blue && m.edge != mine_[k++])
        throw ScriptDesync("Blue's history differs from the scripted moves");
  }
  ScriptMove m = decide(p);
  if (m.edge < 0 || m.edge >= p.num_edges() || !p.is_free(m.edge))
    throw ScriptDesync(m.trace.stage + " " + m.trace.rule + ": mandated edge is not free");
  if (!is_legal(p, m.edge, rules_for(game_of(id()))))
    throw ScriptDesync(m.trace.stage + " " + m.trace.rule + ": mandated edge breaks connectivity");
  mine_.push_back(m.edge);
  return m;
}

std::unique_ptr<Script> make_script(StrategyId s, int n) {
  switch (s) {
    case StrategyId::Th1Case4: return detail::make_th1_script(n);
    case StrategyId::Th2Case5: return detail::make_th2_script(n);
    case StrategyId::Th3Case2: return detail::make_th3_script(n);
    case StrategyId::Th4: return detail::make_th4_script(n);
    case StrategyId::Th5Case2: return detail::make_th5_script(n);
  }
  return nullptr;
}

// ---- hybrid -----------------------------------------------------------------

HybridBlue::HybridBlue(Game g, int n, SolverOptions solver_options)
    : game_(g), n_(n), solver_options_(solver_options) {
  const auto s = strategy_for(g);
  if (s && n >= theorem_min_n(g)) script_ = make_script(*s, n);
  else decided_ = true;
}

HybridBlue::HybridBlue(const HybridBlue& other)
    : game_(other.game_),
      n_(other.n_),
      solver_options_(other.solver_options_),
      script_(other.script_ ? other.script_->clone() : nullptr),
      decided_(other.decided_),
      solver_(other.solver_) {}

HybridBlue& HybridBlue::operator=(const HybridBlue& other) {
  if (this != &other) {
    HybridBlue copy(other);
    game_ = copy.game_;
    n_ = copy.n_;
    solver_options_ = copy.solver_options_;
    script_ = std::move(copy.script_);
    decided_ = copy.decided_;
    solver_ = std::move(copy.solver_);
  }
  return *this;
}

std::string HybridBlue::digest() const {
  if (script_) return script_->digest();
  return decided_ ? "solver" : "pending";
}

BlueChoice HybridBlue::next(const Position& p) {
  if (p.to_move() != Player::Blue) throw NotBluesTurn("HybridBlue: Red to move");
  if (script_ && !decided_ && p.red_count() >= 2) {
    decided_ = true;
    if (applicable_case(game_, p) == CaseTag::SolverFallback) script_.reset();
  }
  BlueChoice out;
  if (script_) {
    const std::size_t before = script_->violations().size();
    ScriptMove m = script_->next(p);
    out.edge = m.edge;
    out.origin = MoveOrigin::Script;
    out.trace = std::move(m.trace);
    out.violations.assign(script_->violations().begin() + static_cast<std::ptrdiff_t>(before), script_->violations().end());
    return out;
  }
  if (!solver_) solver_ = std::make_shared<Solver>(rules_for(game_), solver_options_);
  out.edge = solver_->best_move(p);
  out.origin = MoveOrigin::Solver;
  return out;
}

BlueChoice hybrid_blue_move(const Position& p, Game g, SolverOptions solver_options, bool fallback_on_budget) {
  if (p.to_move() != Player::Blue) throw NotBluesTurn("hybrid_blue_move: Red to move");
  const auto sid = strategy_for(g);
  const RuleSet rules = rules_for(g);
  if (sid && p.n() >= theorem_min_n(g) &&
      (p.red_count() == 1 || applicable_case(g, p) != CaseTag::SolverFallback)) {
    auto script = make_script(*sid, p.n());
    Position prefix(p.n());
    bool in_sync = true;
    try {
      for (const Move& m : p.history()) {
        if (m.player == Player::Blue && script->next(prefix).edge != m.edge) {
          in_sync = false;
          break;
        }
        prefix.play(m.edge);
      }
      if (in_sync) {
        const std::size_t before = script->violations().size();
        ScriptMove m = script->next(p);
        BlueChoice out{m.edge, MoveOrigin::Script, std::move(m.trace), {}};
        out.violations.assign(script->violations().begin() + static_cast<std::ptrdiff_t>(before),
                              script->violations().end());
        return out;
      }
    } catch (const ScriptDesync&) {
      // A desync while replaying means an earlier Blue move was not the
      // script's; a desync on the current move is reported to the caller.
      if (prefix.history().size() == p.history().size()) throw;
    }
  }
  BlueChoice out;
  try {
    Solver solver(rules, solver_options);
    out.edge = solver.best_move(p);
    out.origin = MoveOrigin::Solver;
  } catch (const BudgetExceeded&) {
    if (!fallback_on_budget) throw;
    out.edge = legal_moves(p, rules).front();
    out.origin = MoveOrigin::Fallback;
  } catch (const PositionLost&) {
    // A lost position still needs a reply; the solver's least legal move.
    out.edge = legal_moves(p, rules).front();
    out.origin = MoveOrigin::Solver;
  }
  return out;
}

}  // namespace avoid
