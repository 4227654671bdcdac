#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "avoid/board.hpp"

using namespace avoid;

TEST_CASE("edge_id matches lexicographic enumeration of pairs") {
  for (int n = 2; n <= 12; ++n) {
    int index = 0;
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v, ++index) {
        CHECK(edge_id(u, v, n) == index);
        CHECK(edge_id(v, u, n) == index);
        CHECK(edge_endpoints(index, n) == Edge{u, v});
      }
    }
  }
  CHECK(edge_id(0, 1, 5) == 0);
  CHECK(edge_id(3, 4, 5) == 9);
  CHECK(edge_id(1, 3, 5) == 5);
}

TEST_CASE("edge_id rejects loops and out-of-range vertices") {
  CHECK_THROWS_AS(edge_id(2, 2, 5), OutOfRange);
  CHECK_THROWS_AS(edge_id(0, 5, 5), OutOfRange);
  CHECK_THROWS_AS(edge_id(-1, 2, 5), OutOfRange);
  CHECK_THROWS_AS(edge_endpoints(10, 5), OutOfRange);
}

TEST_CASE("legal moves on an empty board and under the connectivity constraint") {
  const RuleSet p4 = rules_for(Game::P4);
  CHECK(legal_moves(Position(4), p4).size() == 6);

  const RuleSet cs3 = rules_for(Game::CS3);
  // Red {0,1}, Blue {0,2}, Red to move.
  Position p(4);
  p.play(edge_id(0, 1, 4));
  p.play(edge_id(0, 2, 4));
  const auto moves = legal_moves(p, cs3);
  // Free edges touching 0 or 1: 03, 12, 13.
  std::vector<EdgeId> expected{edge_id(0, 3, 4), edge_id(1, 2, 4), edge_id(1, 3, 4)};
  CHECK(moves == expected);

  // Mover owns {0,1}, everything else free: all but {2,3}.
  Position q(4);
  q.play(edge_id(0, 1, 4));
  // Blue to move and owns nothing: every free edge.
  CHECK(legal_moves(q, cs3).size() == 5);
  const auto red_side = candidate_moves(q, Player::Red, cs3);
  CHECK(red_side.size() == 4);
  CHECK(std::find(red_side.begin(), red_side.end(), edge_id(2, 3, 4)) == red_side.end());
}

TEST_CASE("mover without edges may claim any free edge under the constraint") {
  const RuleSet cp4 = rules_for(Game::CP4);
  Position p(5);
  p.play(edge_id(0, 1, 5));
  CHECK(legal_moves(p, cp4).size() == 9);
}

TEST_CASE("apply_move colours the edge for the side to move and keeps the original") {
  const RuleSet r = rules_for(Game::CC3);
  const Position empty(5);
  const Position after = apply_move(empty, edge_id(0, 1, 5), r);
  CHECK(after.cell(0) == CellState::Red);
  CHECK(after.to_move() == Player::Blue);
  CHECK(empty.cell(0) == CellState::Free);
  CHECK_THROWS_AS(apply_move(after, edge_id(0, 1, 5), r), IllegalMove);
}

TEST_CASE("connectivity violation is an illegal move") {
  const RuleSet cs3 = rules_for(Game::CS3);
  Position p(5);
  p = apply_move(p, edge_id(0, 1, 5), cs3);
  p = apply_move(p, edge_id(3, 4, 5), cs3);
  CHECK_THROWS_AS(apply_move(p, edge_id(2, 3, 5), cs3), IllegalMove);
  CHECK_NOTHROW(apply_move(p, edge_id(1, 2, 5), cs3));
}

TEST_CASE("status adjudicates forbidden structures, draws and running games") {
  const RuleSet p4 = rules_for(Game::P4);
  Position p(5);
  p.play(edge_id(0, 1, 5));
  p.play(edge_id(0, 4, 5));
  p.play(edge_id(1, 2, 5));
  p.play(edge_id(1, 4, 5));
  p.play(edge_id(2, 3, 5));
  const auto s = status(p, p4);
  CHECK(s.finished);
  CHECK(s.winner == Player::Blue);
  CHECK(s.reason == GameStatus::Reason::OpponentCompletedForbidden);
  CHECK_THROWS_AS(legal_moves(p, p4), GameOver);

  CHECK(status(Position(6), rules_for(Game::CC3)) == GameStatus{false, Player::Red, std::nullopt, {}});
}

TEST_CASE("a P4-free 2-colouring of K4 found by brute force ends as a draw") {
  // Oracle: enumerate every 3/3 split of K4's edges and keep those with no P4 on either side.
  const int n = 4;
  const RuleSet p4 = rules_for(Game::P4);
  int found = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    if (std::popcount(mask) != 3) continue;
    std::vector<EdgeId> red, blue;
    for (EdgeId e = 0; e < 6; ++e) (mask >> e & 1U ? red : blue).push_back(e);
    if (contains_p4_search(PlayerGraph(n, red)) || contains_p4_search(PlayerGraph(n, blue))) continue;
    ++found;
    Position p(n);
    for (int i = 0; i < 3; ++i) {
      p = apply_move(p, red[i], p4);
      p = apply_move(p, blue[i], p4);
    }
    const auto s = status(p, p4);
    CHECK(s.is_draw());
    CHECK_FALSE(s.winner.has_value());
  }
  CHECK(found > 0);
}

TEST_CASE("CAvoider S3 game: a degree-3 vertex ends the game") {
  // Red closes a triangle (legal, degree 2 everywhere); Blue then reaches degree 3.
  const RuleSet cs3 = rules_for(Game::CS3);
  Position p(4);
  p.play(edge_id(0, 1, 4));  // R
  p.play(edge_id(0, 3, 4));  // B
  p.play(edge_id(1, 2, 4));  // R
  p.play(edge_id(1, 3, 4));  // B
  p.play(edge_id(0, 2, 4));  // R: triangle, max degree 2, still alive
  p.play(edge_id(2, 3, 4));  // B: degree 3 at vertex 3 -> Blue completes S3
  CHECK(status(p, cs3).winner == Player::Red);
}

TEST_CASE("random legal games: parity, replay determinism, JSON round trip") {
  std::mt19937 rng(7);
  for (Game g : {Game::P4, Game::CC3, Game::CS3, Game::CP4, Game::CCycle, Game::Sim}) {
    const RuleSet r = rules_for(g);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 4 + static_cast<int>(rng() % 5);
      Position p(n);
      while (status(p, r).in_progress()) {
        const auto moves = legal_moves(p, r);
        p = apply_move(p, moves[rng() % moves.size()], r);
        CHECK((p.red_count() - p.blue_count() == 0 || p.red_count() - p.blue_count() == 1));
      }
      CHECK(replay(n, p.history(), r) == p);
      CHECK(position_from_json(position_to_json(p), r) == p);
      CHECK(status(p, r).finished);
    }
  }
}

TEST_CASE("position JSON loader rejects parity and occupancy violations") {
  const nlohmann::json bad_parity = {{"n", 5}, {"moves", {{{"p", "B"}, {"u", 0}, {"v", 1}}}}};
  CHECK_THROWS_AS(position_from_json(bad_parity), IllegalMove);
  const nlohmann::json occupied = {
      {"n", 5}, {"moves", {{{"p", "R"}, {"u", 0}, {"v", 1}}, {{"p", "B"}, {"u", 1}, {"v", 0}}}}};
  CHECK_THROWS_AS(position_from_json(occupied), IllegalMove);
  const nlohmann::json disconnected = {
      {"n", 5},
      {"moves", {{{"p", "R"}, {"u", 0}, {"v", 1}}, {{"p", "B"}, {"u", 2}, {"v", 3}}, {{"p", "R"}, {"u", 3}, {"v", 4}}}}};
  CHECK_NOTHROW(position_from_json(disconnected));
  CHECK_THROWS_AS(position_from_json(disconnected, rules_for(Game::CP4)), IllegalMove);
}
