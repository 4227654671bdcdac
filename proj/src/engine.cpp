#include "avoid/engine.hpp"

#include <fstream>

#include "avoid/canon.hpp"

namespace avoid {

namespace {

using nlohmann::json;

std::string side_name(Player p) { return p == Player::Red ? "red" : "blue"; }

Player parse_side(const std::string& s) {
  if (s == "red" || s == "R") return Player::Red;
  if (s == "blue" || s == "B") return Player::Blue;
  throw ProtocolError("human must be \"red\" or \"blue\"");
}

Game parse_game_field(const std::string& s) {
  if (auto g = parse_game(s)) return *g;
  throw ProtocolError("unknown game \"" + s + "\"");
}

MoveOrigin parse_origin(const std::string& s) {
  for (auto o : {MoveOrigin::Script, MoveOrigin::Solver, MoveOrigin::Fallback})
    if (origin_name(o) == s) return o;
  throw ProtocolError("unknown origin \"" + s + "\"");
}

json edge_json(Edge e) { return {{"u", e.u}, {"v", e.v}}; }

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw ProtocolError(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

int int_field(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number_integer()) throw ProtocolError(std::string("\"") + name + "\" must be an integer");
  return v.get<int>();
}

Edge edge_field(const json& j) {
  if (!j.is_object() || !j.contains("u") || !j.contains("v")) throw ProtocolError("edge needs \"u\" and \"v\"");
  return {int_field(j, "u"), int_field(j, "v")};
}

std::string type_of(const json& j) {
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  const json& t = field(j, "type");
  if (!t.is_string()) throw ProtocolError("\"type\" must be a string");
  return t.get<std::string>();
}

}  // namespace

// ---- serialisation --------------------------------------------------------

json request_to_json(const Request& r) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NewGameRequest>)
          return {{"type", "new_game"}, {"game", std::string(game_name(m.game))}, {"n", m.n}, {"human", side_name(m.human)}};
        else if constexpr (std::is_same_v<T, MoveRequest>)
          return {{"type", "move"}, {"u", m.u}, {"v", m.v}};
        else if constexpr (std::is_same_v<T, HintRequest>)
          return {{"type", "hint"}};
        else
          return {{"type", "state"}};
      },
      r);
}

Request request_from_json(const json& j) {
  try {
    const std::string type = type_of(j);
    if (type == "new_game")
      return NewGameRequest{parse_game_field(field(j, "game").get<std::string>()), int_field(j, "n"),
                            j.contains("human") ? parse_side(j.at("human").get<std::string>()) : Player::Red};
    if (type == "move") return MoveRequest{int_field(j, "u"), int_field(j, "v")};
    if (type == "hint") return HintRequest{};
    if (type == "state") return StateRequest{};
    throw ProtocolError("unknown request type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("bad field: ") + e.what());
  }
}

json response_to_json(const Response& r) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StateResponse>) {
          json j{{"type", "state"},       {"revision", m.revision}, {"game", std::string(game_name(m.game))},
                 {"human", side_name(m.human)}, {"position", m.position}, {"status", m.status}};
          j["engine_move"] = m.engine_move ? json{{"u", m.engine_move->edge.u},
                                                  {"v", m.engine_move->edge.v},
                                                  {"origin", std::string(origin_name(m.engine_move->origin))}}
                                           : json(nullptr);
          j["last_trace"] = m.last_trace ? *m.last_trace : json(nullptr);
          return j;
        } else if constexpr (std::is_same_v<T, HintResponse>) {
          return {{"type", "hint"}, {"revision", m.revision}, {"edge", edge_json(m.edge)}, {"value", m.value}};
        } else {
          return {{"type", "error"}, {"revision", m.revision}, {"code", m.code}, {"detail", m.detail}};
        }
      },
      r);
}

Response response_from_json(const json& j) {
  try {
    const std::string type = type_of(j);
    const auto revision = field(j, "revision").get<std::uint64_t>();
    if (type == "state") {
      StateResponse s;
      s.revision = revision;
      s.game = parse_game_field(field(j, "game").get<std::string>());
      s.human = parse_side(field(j, "human").get<std::string>());
      s.position = field(j, "position");
      s.status = field(j, "status");
      if (j.contains("engine_move") && !j.at("engine_move").is_null()) {
        const json& m = j.at("engine_move");
        s.engine_move = EngineMove{edge_field(m), parse_origin(field(m, "origin").get<std::string>())};
      }
      if (j.contains("last_trace") && !j.at("last_trace").is_null()) s.last_trace = j.at("last_trace");
      return s;
    }
    if (type == "hint")
      return HintResponse{revision, edge_field(field(j, "edge")), field(j, "value").get<std::string>()};
    if (type == "error")
      return ErrorResponse{revision, field(j, "code").get<std::string>(), field(j, "detail").get<std::string>()};
    throw ProtocolError("unknown response type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw ProtocolError(std::string("bad field: ") + e.what());
  }
}

// ---- session ----------------------------------------------------------------

Session::Session(EngineOptions options) : options_(std::move(options)) {}

ErrorResponse Session::error(std::string code, std::string detail) const {
  return {revision_, std::move(code), std::move(detail)};
}

StateResponse Session::state() const {
  StateResponse s;
  s.revision = revision_;
  s.game = game_;
  s.human = human_;
  s.position = position_to_json(*position_);
  s.status = status_to_json(status(*position_, rules_for(game_)));
  s.engine_move = last_engine_move_;
  if (last_trace_) s.last_trace = trace_to_json(*last_trace_, position_->n());
  return s;
}

void Session::write_transcript() const {
  if (options_.transcript_path.empty() || !position_) return;
  std::ofstream out(options_.transcript_path);
  out << position_to_json(*position_).dump(2) << "\n";
}

EngineMove Session::engine_move_for(const Position& p, std::optional<RuleTrace>& trace) {
  const RuleSet rules = rules_for(game_);
  auto log = [&](const std::string& s) {
    if (options_.log) options_.log(s);
  };
  auto fallback = [&](const std::string& why) -> EngineMove {
    if (!options_.fallback_on_budget) throw BudgetExceeded(why);
    log("fallback: " + why);
    return {edge_endpoints(legal_moves(p, rules).front(), p.n()), MoveOrigin::Fallback};
  };
  auto solve_for_mover = [&]() -> EngineMove {
    if (p.n() > kMaxCanonVertices) return fallback("board too large for the solver");
    try {
      Solver solver(rules, options_.solver);
      const SolveResult r = solver.solve(p);
      return {edge_endpoints(*r.best_move, p.n()), MoveOrigin::Solver};
    } catch (const BudgetExceeded& e) {
      return fallback(e.what());
    }
  };

  if (p.to_move() == Player::Red) return solve_for_mover();

  try {
    BlueChoice c = blue_->next(p);
    trace = c.trace;
    for (const auto& v : c.violations) log("claim " + v.claim + ": " + v.detail);
    return {edge_endpoints(c.edge, p.n()), c.origin};
  } catch (const ScriptDesync& e) {
    // The game left the scripted line; the solver carries on from here.
    log(std::string("script desync: ") + e.what());
    blue_.emplace(game_, p.n(), options_.solver);
    return solve_for_mover();
  } catch (const PositionLost&) {
    return solve_for_mover();
  } catch (const BudgetExceeded& e) {
    return fallback(e.what());
  } catch (const OutOfRange& e) {
    return fallback(e.what());
  }
}

std::optional<ErrorResponse> Session::engine_turns() {
  const RuleSet rules = rules_for(game_);
  while (!status(*position_, rules).finished && position_->to_move() != human_) {
    std::optional<RuleTrace> trace;
    EngineMove m;
    try {
      m = engine_move_for(*position_, trace);
    } catch (const BudgetExceeded& e) {
      return error("engine_budget", e.what());
    }
    *position_ = apply_move(*position_, edge_id(m.edge.u, m.edge.v, position_->n()), rules);
    last_engine_move_ = m;
    last_trace_ = trace;
    if (options_.log) {
      std::string line = "engine " + std::to_string(m.edge.u) + "-" + std::to_string(m.edge.v) + " (" +
                         std::string(origin_name(m.origin)) + ")";
      if (trace) line += " " + trace->stage + " " + trace->rule;
      options_.log(line);
    }
  }
  return std::nullopt;
}

Response Session::handle(const Request& r) {
  if (const auto* ng = std::get_if<NewGameRequest>(&r)) {
    if (ng->n < 2 || ng->n > kMaxVertices) return error("bad_request", "n must be between 2 and 64");
    game_ = ng->game;
    human_ = ng->human;
    position_.emplace(ng->n);
    blue_.emplace(game_, ng->n, options_.solver);
    last_engine_move_.reset();
    last_trace_.reset();
    ++revision_;
    auto failed = engine_turns();
    write_transcript();
    if (failed) return *failed;
    return state();
  }
  if (!position_) return error("no_game", "send new_game first");
  if (std::holds_alternative<StateRequest>(r)) return state();

  const RuleSet rules = rules_for(game_);
  const GameStatus st = status(*position_, rules);
  if (std::holds_alternative<HintRequest>(r)) {
    if (st.finished) return error("game_over", "the game has ended");
    if (position_->n() > kMaxCanonVertices) return error("engine_budget", "board too large for the solver");
    try {
      Solver solver(rules, options_.solver);
      const SolveResult res = solver.solve(*position_);
      return HintResponse{revision_, edge_endpoints(*res.best_move, position_->n()), std::string(value_name(res.value))};
    } catch (const BudgetExceeded& e) {
      return error("engine_budget", e.what());
    }
  }

  const auto& mv = std::get<MoveRequest>(r);
  if (st.finished) return error("game_over", "the game has ended");
  if (position_->to_move() != human_) return error("not_your_turn", "the engine is to move");
  const int n = position_->n();
  if (mv.u < 0 || mv.v < 0 || mv.u >= n || mv.v >= n || mv.u == mv.v)
    return error("illegal_move", "no such edge");
  const EdgeId e = edge_id(mv.u, mv.v, n);
  if (!position_->is_free(e)) return error("illegal_move", "edge already claimed");
  if (!is_legal(*position_, e, rules)) return error("illegal_move", "the move would disconnect your graph");
  *position_ = apply_move(*position_, e, rules);
  ++revision_;
  auto failed = engine_turns();
  write_transcript();
  if (failed) return *failed;
  return state();
}

json Session::handle_json(const json& j) {
  try {
    return response_to_json(handle(request_from_json(j)));
  } catch (const ProtocolError& e) {
    return response_to_json(error("bad_request", e.what()));
  } catch (const std::exception& e) {
    return response_to_json(error("internal", e.what()));
  }
}

std::string Session::handle_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    return response_to_json(error("bad_request", std::string("malformed JSON: ") + e.what())).dump();
  }
  return handle_json(j).dump();
}

}  // namespace avoid
