#include "avoid/board.hpp"

#include <string>

namespace avoid {

Position::Position(int n) : n_(n) {
  if (n < 2 || n > kMaxVertices) throw OutOfRange("vertex count out of range: " + std::to_string(n));
  cells_.assign(edge_count(n), CellState::Free);
}

std::optional<Move> Position::last_move() const {
  if (history_.empty()) return std::nullopt;
  return history_.back();
}

std::vector<EdgeId> Position::edges_of(Player p) const {
  std::vector<EdgeId> out;
  const CellState want = cell_of(p);
  for (EdgeId e = 0; e < num_edges(); ++e)
    if (cells_[e] == want) out.push_back(e);
  return out;
}

PlayerGraph Position::graph_of(Player p) const {
  PlayerGraph g(n_);
  const CellState want = cell_of(p);
  EdgeId e = 0;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v, ++e)
      if (cells_[e] == want) g.add_edge(u, v);
  return g;
}

VertexMask Position::touched_by(Player p) const {
  VertexMask m = 0;
  const CellState want = cell_of(p);
  EdgeId e = 0;
  for (Vertex u = 0; u < n_; ++u)
    for (Vertex v = u + 1; v < n_; ++v, ++e)
      if (cells_[e] == want) m |= vbit(u) | vbit(v);
  return m;
}

Position Position::with_move(EdgeId e) const {
  Position next = *this;
  next.play(e);
  return next;
}

void Position::play(EdgeId e) {
  if (e < 0 || e >= num_edges()) throw IllegalMove("edge id out of range: " + std::to_string(e));
  if (cells_[e] != CellState::Free) throw IllegalMove("edge already claimed: " + std::to_string(e));
  const Player p = to_move();
  cells_[e] = cell_of(p);
  history_.push_back({p, e});
  (p == Player::Red ? red_count_ : blue_count_)++;
}

std::uint64_t Position::red_mask() const {
  if (num_edges() > 64) throw OutOfRange("board too large for 64-bit edge masks");
  std::uint64_t m = 0;
  for (EdgeId e = 0; e < num_edges(); ++e)
    if (cells_[e] == CellState::Red) m |= std::uint64_t{1} << e;
  return m;
}

std::uint64_t Position::blue_mask() const {
  if (num_edges() > 64) throw OutOfRange("board too large for 64-bit edge masks");
  std::uint64_t m = 0;
  for (EdgeId e = 0; e < num_edges(); ++e)
    if (cells_[e] == CellState::Blue) m |= std::uint64_t{1} << e;
  return m;
}

std::string_view reason_name(GameStatus::Reason r) {
  switch (r) {
    case GameStatus::Reason::None: return "none";
    case GameStatus::Reason::OpponentCompletedForbidden: return "opponent_completed_forbidden";
    case GameStatus::Reason::OpponentHadNoLegalMove: return "opponent_had_no_legal_move";
    case GameStatus::Reason::Draw: return "draw";
  }
  return "?";
}

std::vector<EdgeId> candidate_moves(const Position& p, Player mover, const RuleSet& r) {
  std::vector<EdgeId> out;
  const int n = p.n();
  const VertexMask mine = r.connectivity_constrained ? p.touched_by(mover) : 0;
  EdgeId e = 0;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v, ++e) {
      if (!p.is_free(e)) continue;
      if (mine != 0 && !(mine & (vbit(u) | vbit(v)))) continue;
      out.push_back(e);
    }
  }
  return out;
}

std::vector<EdgeId> legal_moves(const Position& p, const RuleSet& r) {
  if (status(p, r).finished) throw GameOver("game is over");
  return candidate_moves(p, p.to_move(), r);
}

namespace {

bool connects(const Position& p, EdgeId e, Player mover, const RuleSet& r) {
  if (!r.connectivity_constrained) return true;
  const VertexMask mine = p.touched_by(mover);
  if (mine == 0) return true;
  const Edge ed = edge_endpoints(e, p.n());
  return (mine & (vbit(ed.u) | vbit(ed.v))) != 0;
}

}  // namespace

bool is_legal(const Position& p, EdgeId e, const RuleSet& r) {
  if (e < 0 || e >= p.num_edges() || !p.is_free(e)) return false;
  if (status(p, r).finished) return false;
  return connects(p, e, p.to_move(), r);
}

Position apply_move(const Position& p, EdgeId e, const RuleSet& r) {
  if (status(p, r).finished) throw GameOver("game is over");
  if (e < 0 || e >= p.num_edges()) throw IllegalMove("edge id out of range: " + std::to_string(e));
  if (!p.is_free(e)) throw IllegalMove("edge already claimed");
  if (!connects(p, e, p.to_move(), r)) throw IllegalMove("move would disconnect the mover's graph");
  return p.with_move(e);
}

GameStatus status(const Position& p, const RuleSet& r) {
  GameStatus s;
  s.to_move = p.to_move();
  if (const auto last = p.last_move()) {
    if (contains(p.graph_of(last->player), r.forbidden)) {
      s.finished = true;
      s.winner = opponent(last->player);
      s.reason = GameStatus::Reason::OpponentCompletedForbidden;
      return s;
    }
  }
  if (p.free_count() == 0) {
    s.finished = true;
    s.reason = GameStatus::Reason::Draw;
    return s;
  }
  if (candidate_moves(p, s.to_move, r).empty()) {
    s.finished = true;
    s.winner = opponent(s.to_move);
    s.reason = GameStatus::Reason::OpponentHadNoLegalMove;
  }
  return s;
}

Position replay(int n, std::span<const Move> moves, const RuleSet& r) {
  Position p(n);
  for (const Move& m : moves) {
    if (m.player != p.to_move()) throw IllegalMove("move out of turn");
    p = apply_move(p, m.edge, r);
  }
  return p;
}

nlohmann::json edge_to_json(EdgeId e, int n) {
  const Edge ed = edge_endpoints(e, n);
  return {{"u", ed.u}, {"v", ed.v}};
}

nlohmann::json position_to_json(const Position& p) {
  nlohmann::json moves = nlohmann::json::array();
  for (const Move& m : p.history()) {
    const Edge ed = edge_endpoints(m.edge, p.n());
    moves.push_back({{"p", std::string(player_code(m.player))}, {"u", ed.u}, {"v", ed.v}});
  }
  return {{"n", p.n()}, {"moves", moves}};
}

Position position_from_json(const nlohmann::json& j, const std::optional<RuleSet>& rules) {
  if (!j.is_object() || !j.contains("n") || !j.contains("moves")) {
    throw std::invalid_argument("position JSON needs \"n\" and \"moves\"");
  }
  Position p(j.at("n").get<int>());
  for (const auto& m : j.at("moves")) {
    const auto who = parse_player(m.at("p").get<std::string>());
    if (!who) throw std::invalid_argument("bad player code");
    if (*who != p.to_move()) throw IllegalMove("move out of turn (parity violation)");
    const EdgeId e = edge_id(m.at("u").get<int>(), m.at("v").get<int>(), p.n());
    p = rules ? apply_move(p, e, *rules) : p.with_move(e);
  }
  return p;
}

nlohmann::json status_to_json(const GameStatus& s) {
  if (!s.finished) return {{"state", "in_progress"}, {"to_move", std::string(player_code(s.to_move))}};
  nlohmann::json j{{"state", "finished"}, {"reason", std::string(reason_name(s.reason))}};
  j["winner"] = s.winner ? nlohmann::json(std::string(player_code(*s.winner))) : nlohmann::json(nullptr);
  return j;
}

}  // namespace avoid
