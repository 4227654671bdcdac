#pragma once

// Line-delimited JSON protocol for interactive play against the engine.
//
// Requests:  {"type":"new_game","game":"cc3","n":5,"human":"red"}
//            {"type":"move","u":0,"v":1}
//            {"type":"hint"}
//            {"type":"state"}
// Responses: {"type":"state",...}, {"type":"hint",...}, {"type":"error","code":...}
// Every response carries the session revision, which counts accepted
// state changes.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "json.hpp"

#include "avoid/board.hpp"
#include "avoid/strategies.hpp"

namespace avoid {

struct NewGameRequest {
  Game game = Game::P4;
  int n = 0;
  Player human = Player::Red;
  friend bool operator==(const NewGameRequest&, const NewGameRequest&) = default;
};

struct MoveRequest {
  Vertex u = 0;
  Vertex v = 0;
  friend bool operator==(const MoveRequest&, const MoveRequest&) = default;
};

struct HintRequest {
  friend bool operator==(const HintRequest&, const HintRequest&) = default;
};

struct StateRequest {
  friend bool operator==(const StateRequest&, const StateRequest&) = default;
};

using Request = std::variant<NewGameRequest, MoveRequest, HintRequest, StateRequest>;

struct EngineMove {
  Edge edge;
  MoveOrigin origin = MoveOrigin::Solver;
  friend bool operator==(const EngineMove&, const EngineMove&) = default;
};

struct StateResponse {
  std::uint64_t revision = 0;
  Game game = Game::P4;
  Player human = Player::Red;
  nlohmann::json position;  // core-board Position JSON
  nlohmann::json status;    // core-board status JSON
  std::optional<EngineMove> engine_move;
  std::optional<nlohmann::json> last_trace;  // RuleTrace JSON of the engine's last scripted move
  friend bool operator==(const StateResponse&, const StateResponse&) = default;
};

struct HintResponse {
  std::uint64_t revision = 0;
  Edge edge;
  std::string value;  // value_name for the side to move
  friend bool operator==(const HintResponse&, const HintResponse&) = default;
};

struct ErrorResponse {
  std::uint64_t revision = 0;
  std::string code;  // bad_request, no_game, illegal_move, not_your_turn, game_over, engine_budget
  std::string detail;
  friend bool operator==(const ErrorResponse&, const ErrorResponse&) = default;
};

using Response = std::variant<StateResponse, HintResponse, ErrorResponse>;

/// Malformed messages throw ProtocolError.
class ProtocolError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::json request_to_json(const Request& r);
Request request_from_json(const nlohmann::json& j);
nlohmann::json response_to_json(const Response& r);
Response response_from_json(const nlohmann::json& j);

struct EngineOptions {
  SolverOptions solver{true, 1'000'000'000, std::chrono::seconds(10)};
  /// On a solver overrun play the lowest legal edge (origin "fallback")
  /// instead of answering with an engine_budget error.
  bool fallback_on_budget = true;
  /// Optional file that receives the Position JSON after every change.
  std::string transcript_path;
  /// Receives one line per engine decision; empty to stay quiet.
  std::function<void(const std::string&)> log;
};

/// One game. Never throws on bad input: every request gets a response.
class Session {
 public:
  explicit Session(EngineOptions options = {});

  Response handle(const Request& r);
  /// Parses, handles and serialises; malformed JSON becomes a bad_request error.
  nlohmann::json handle_json(const nlohmann::json& j);
  std::string handle_line(const std::string& line);

  std::uint64_t revision() const { return revision_; }
  const std::optional<Position>& position() const { return position_; }

 private:
  StateResponse state() const;
  ErrorResponse error(std::string code, std::string detail) const;
  std::optional<ErrorResponse> engine_turns();
  EngineMove engine_move_for(const Position& p, std::optional<RuleTrace>& trace);
  void write_transcript() const;

  EngineOptions options_;
  std::uint64_t revision_ = 0;
  Game game_ = Game::P4;
  Player human_ = Player::Red;
  std::optional<Position> position_;
  std::optional<HybridBlue> blue_;
  std::optional<EngineMove> last_engine_move_;
  std::optional<RuleTrace> last_trace_;
};

}  // namespace avoid
