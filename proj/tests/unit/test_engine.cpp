#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include "avoid/engine.hpp"

using namespace avoid;
using nlohmann::json;

namespace {

StateResponse as_state(const Response& r) {
  REQUIRE(std::holds_alternative<StateResponse>(r));
  return std::get<StateResponse>(r);
}

ErrorResponse as_error(const Response& r) {
  REQUIRE(std::holds_alternative<ErrorResponse>(r));
  return std::get<ErrorResponse>(r);
}

// Plays uniformly random legal Red moves until the game ends.
GameStatus random_red_game(Game g, int n, std::uint64_t seed, Session& s) {
  std::mt19937_64 rng(seed);
  const RuleSet rules = rules_for(g);
  as_state(s.handle(NewGameRequest{g, n, Player::Red}));
  std::uint64_t last = s.revision();
  while (!status(*s.position(), rules).finished) {
    const auto moves = legal_moves(*s.position(), rules);
    const Edge e = edge_endpoints(moves[rng() % moves.size()], n);
    as_state(s.handle(MoveRequest{e.u, e.v}));
    CHECK(s.revision() == last + 1);
    last = s.revision();
  }
  return status(*s.position(), rules);
}

}  // namespace

TEST_CASE("requests survive a JSON round trip") {
  std::mt19937_64 rng(3);
  const Game games[] = {Game::P4, Game::CC3, Game::CS3, Game::CP4, Game::CCycle, Game::Sim};
  for (int i = 0; i < 500; ++i) {
    Request r;
    switch (rng() % 4) {
      case 0:
        r = NewGameRequest{games[rng() % 6], static_cast<int>(rng() % 64), rng() % 2 ? Player::Red : Player::Blue};
        break;
      case 1:
        r = MoveRequest{static_cast<Vertex>(rng() % 64), static_cast<Vertex>(rng() % 64)};
        break;
      case 2:
        r = HintRequest{};
        break;
      default:
        r = StateRequest{};
    }
    const json j = request_to_json(r);
    CHECK(request_from_json(j) == r);
    CHECK(request_from_json(json::parse(j.dump())) == r);
  }
}

TEST_CASE("responses survive a JSON round trip") {
  std::vector<Response> seen;
  for (Game g : {Game::CC3, Game::CP4, Game::P4}) {
    for (Player human : {Player::Red, Player::Blue}) {
      Session s;
      std::mt19937_64 rng(11);
      seen.push_back(s.handle(NewGameRequest{g, 6, human}));
      const RuleSet rules = rules_for(g);
      while (!status(*s.position(), rules).finished) {
        const auto moves = legal_moves(*s.position(), rules);
        const Edge e = edge_endpoints(moves[rng() % moves.size()], 6);
        seen.push_back(s.handle(HintRequest{}));
        seen.push_back(s.handle(MoveRequest{e.u, e.v}));
      }
      seen.push_back(s.handle(MoveRequest{0, 1}));
    }
  }
  seen.push_back(ErrorResponse{7, "bad_request", "x"});
  for (const auto& r : seen) {
    const json j = response_to_json(r);
    CHECK(response_from_json(j) == r);
    CHECK(response_from_json(json::parse(j.dump())) == r);
  }
}

TEST_CASE("new game and a Red move get a scripted reply with its trace") {
  Session s;
  const auto first = as_state(s.handle(NewGameRequest{Game::CC3, 5, Player::Red}));
  CHECK(first.revision == 1);
  CHECK_FALSE(first.engine_move);
  CHECK(first.status["to_move"] == "R");

  const auto reply = as_state(s.handle(MoveRequest{0, 1}));
  CHECK(reply.revision == 2);
  REQUIRE(reply.engine_move);
  CHECK(reply.engine_move->origin == MoveOrigin::Script);
  REQUIRE(reply.last_trace);
  CHECK((*reply.last_trace)["theorem"] == "th2case5");
  CHECK(reply.position["moves"].size() == 2);
  CHECK(reply.position["moves"][1]["p"] == "B");
}

TEST_CASE("illegal requests leave the session untouched") {
  Session s;
  as_state(s.handle(NewGameRequest{Game::CS3, 7, Player::Red}));
  const auto after = as_state(s.handle(MoveRequest{0, 1}));
  const Position before = *s.position();

  const Edge blue = after.engine_move->edge;
  for (const Request& r : std::vector<Request>{MoveRequest{0, 1}, MoveRequest{blue.u, blue.v}}) {
    const auto e = as_error(s.handle(r));
    CHECK(e.code == "illegal_move");
    CHECK(e.revision == after.revision);
  }
  // Red owns 0-1; an edge away from it would disconnect Red's graph.
  const Vertex a = blue.u == 4 || blue.v == 4 ? 5 : 4;
  CHECK(as_error(s.handle(MoveRequest{a, 6})).code == "illegal_move");
  CHECK(as_error(s.handle(MoveRequest{3, 3})).code == "illegal_move");
  CHECK(as_error(s.handle(MoveRequest{0, 9})).code == "illegal_move");
  CHECK(as_error(s.handle(MoveRequest{-1, 2})).code == "illegal_move");

  CHECK(*s.position() == before);
  CHECK(s.revision() == after.revision);
  CHECK(as_state(s.handle(StateRequest{})) == after);
}

TEST_CASE("malformed input becomes a structured error") {
  Session s;
  auto code = [&](const std::string& line) { return json::parse(s.handle_line(line))["code"]; };
  CHECK(code("{\"type\":\"state\"}") == "no_game");
  CHECK(code("{\"type\":\"move\",\"u\":0,\"v\":1}") == "no_game");
  CHECK(code("not json") == "bad_request");
  CHECK(code("[1,2]") == "bad_request");
  CHECK(code("{}") == "bad_request");
  CHECK(code("{\"type\":\"dance\"}") == "bad_request");
  CHECK(code("{\"type\":\"new_game\",\"game\":\"chess\",\"n\":5}") == "bad_request");
  CHECK(code("{\"type\":\"new_game\",\"game\":\"p4\",\"n\":\"five\"}") == "bad_request");
  CHECK(code("{\"type\":\"new_game\",\"game\":\"p4\",\"n\":1}") == "bad_request");
  CHECK(code("{\"type\":\"new_game\",\"game\":\"p4\",\"n\":65}") == "bad_request");
  CHECK(code("{\"type\":\"new_game\",\"game\":\"p4\",\"n\":5,\"human\":\"green\"}") == "bad_request");
  CHECK(s.revision() == 0);
  CHECK_FALSE(s.position());

  CHECK(json::parse(s.handle_line("{\"type\":\"new_game\",\"game\":\"p4\",\"n\":5}"))["type"] == "state");
  CHECK(code("{\"type\":\"move\",\"u\":0}") == "bad_request");
  CHECK(code("{\"type\":\"move\",\"u\":0,\"v\":true}") == "bad_request");
  CHECK(s.revision() == 1);
}

TEST_CASE("human Blue: the engine opens as Red with the solver") {
  Session s;
  const auto st = as_state(s.handle(NewGameRequest{Game::CP4, 6, Player::Blue}));
  REQUIRE(st.engine_move);
  CHECK(st.engine_move->origin == MoveOrigin::Solver);
  CHECK_FALSE(st.last_trace);
  CHECK(st.status["to_move"] == "B");
  CHECK(st.position["moves"][0]["p"] == "R");
}

TEST_CASE("hints come from the solver") {
  Session s;
  as_state(s.handle(NewGameRequest{Game::CP4, 5, Player::Blue}));
  const auto h = std::get<HintResponse>(s.handle(HintRequest{}));
  CHECK(h.value == "MoverWins");
  CHECK(is_legal(*s.position(), edge_id(h.edge.u, h.edge.v, 5), rules_for(Game::CP4)));
  CHECK(h.revision == s.revision());
}

TEST_CASE("finished games refuse moves and hints") {
  Session s;
  const auto end = random_red_game(Game::CC3, 5, 1, s);
  CHECK(end.finished);
  const auto rev = s.revision();
  CHECK(as_error(s.handle(MoveRequest{0, 1})).code == "game_over");
  CHECK(as_error(s.handle(HintRequest{})).code == "game_over");
  CHECK(s.revision() == rev);
  // A new game starts a fresh position under a higher revision.
  CHECK(as_state(s.handle(NewGameRequest{Game::CC3, 5, Player::Red})).revision == rev + 1);
}

TEST_CASE("solver overrun: error without fallback, lowest edge with it") {
  EngineOptions strict;
  strict.fallback_on_budget = false;
  strict.solver.max_nodes = 10;
  Session s(strict);
  const auto e = as_error(s.handle(NewGameRequest{Game::P4, 7, Player::Blue}));
  CHECK(e.code == "engine_budget");
  CHECK(e.revision == 1);
  CHECK(as_error(s.handle(MoveRequest{0, 1})).code == "not_your_turn");

  EngineOptions lax = strict;
  lax.fallback_on_budget = true;
  Session t(lax);
  const auto st = as_state(t.handle(NewGameRequest{Game::P4, 7, Player::Blue}));
  REQUIRE(st.engine_move);
  CHECK(st.engine_move->origin == MoveOrigin::Fallback);
  CHECK(st.engine_move->edge == Edge{0, 1});
}

TEST_CASE("boards past the solver range still play") {
  Session s;
  const auto st = as_state(s.handle(NewGameRequest{Game::P4, 12, Player::Blue}));
  CHECK(st.engine_move->origin == MoveOrigin::Fallback);
  CHECK(random_red_game(Game::P4, 12, 5, s).winner == Player::Blue);
}

TEST_CASE("cs3 on K7: random Red lines all end with Red lost") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Session s;
    const auto end = random_red_game(Game::CS3, 7, seed, s);
    CHECK(end.winner == Player::Blue);
  }
}

TEST_CASE("cs3 on K7: the service agrees with the harness on a script gap") {
  // The harness reports this line as lost for Blue; the service plays the
  // same moves and the solver hint finds Red's winning reply.
  Session s;
  as_state(s.handle(NewGameRequest{Game::CS3, 7, Player::Red}));
  for (Edge e : {Edge{0, 1}, Edge{0, 5}, Edge{1, 3}, Edge{3, 6}, Edge{2, 6}}) as_state(s.handle(MoveRequest{e.u, e.v}));
  const auto h = std::get<HintResponse>(s.handle(HintRequest{}));
  CHECK(h.value == "MoverWins");
  const auto fin = as_state(s.handle(MoveRequest{h.edge.u, h.edge.v}));
  CHECK(fin.status["state"] == "in_progress");
  const RuleSet rules = rules_for(Game::CS3);
  while (!status(*s.position(), rules).finished) {
    const auto next = std::get<HintResponse>(s.handle(HintRequest{}));
    as_state(s.handle(MoveRequest{next.edge.u, next.edge.v}));
  }
  CHECK(status(*s.position(), rules).winner == Player::Red);
}

TEST_CASE("transcripts replay to the same status") {
  const auto path = std::filesystem::temp_directory_path() / "avoid_transcript_test.json";
  for (Game g : {Game::Sim, Game::CP4, Game::P4}) {
    EngineOptions o;
    o.transcript_path = path.string();
    std::vector<std::string> log;
    o.log = [&](const std::string& line) { log.push_back(line); };
    Session s(o);
    random_red_game(g, 6, 9, s);
    const auto final_state = as_state(s.handle(StateRequest{}));
    std::ifstream in(path);
    const Position replayed = position_from_json(json::parse(in), rules_for(g));
    CHECK(status_to_json(status(replayed, rules_for(g))) == final_state.status);
    CHECK(position_to_json(replayed) == final_state.position);
    CHECK_FALSE(log.empty());
  }
  std::filesystem::remove(path);
}
