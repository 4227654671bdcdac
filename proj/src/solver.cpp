#include "avoid/solver.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace avoid {

std::string_view value_name(Value v) {
  switch (v) {
    case Value::MoverWins: return "MoverWins";
    case Value::MoverLoses: return "MoverLoses";
    case Value::Draw: return "Draw";
  }
  return "?";
}

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::FirstPlayerWins: return "FirstPlayerWins";
    case Outcome::SecondPlayerWins: return "SecondPlayerWins";
    case Outcome::Draw: return "Draw";
  }
  return "?";
}

Outcome outcome_of(Value v, Player mover) {
  if (v == Value::Draw) return Outcome::Draw;
  const Player winner = v == Value::MoverWins ? mover : opponent(mover);
  return winner == Player::Red ? Outcome::FirstPlayerWins : Outcome::SecondPlayerWins;
}

namespace {

PlayerGraph graph_from_mask(int n, std::uint64_t mask) {
  PlayerGraph g(n);
  for (; mask; mask &= mask - 1) g.add_edge(std::countr_zero(mask));
  return g;
}

}  // namespace

Solver::Solver(RuleSet rules, SolverOptions options) : rules_(rules), options_(options) {}

Solver::Node Solver::node_of(const Position& p) const {
  return {p.red_mask(), p.blue_mask(), p.red_count(), p.blue_count()};
}

std::uint64_t Solver::touched(std::uint64_t edges) const {
  std::uint64_t vs = 0;
  for (; edges; edges &= edges - 1) vs |= vertex_bits_[std::countr_zero(edges)];
  return vs;
}

std::uint64_t Solver::legal_mask(const Node& node, Player mover) const {
  const std::uint64_t free = all_edges_ & ~(node.red | node.blue);
  if (!rules_.connectivity_constrained) return free;
  std::uint64_t mine = touched(mover == Player::Red ? node.red : node.blue);
  if (mine == 0) return free;
  std::uint64_t allowed = 0;
  for (; mine; mine &= mine - 1) allowed |= incident_[std::countr_zero(mine)];
  return free & allowed;
}

void Solver::tick() {
  ++run_.nodes;
  if (run_.nodes > options_.max_nodes) throw BudgetExceeded("solver node budget exceeded");
  if ((run_.nodes & 0x3FF) == 0 && std::chrono::steady_clock::now() > deadline_) {
    throw BudgetExceeded("solver time budget exceeded");
  }
}

Value Solver::evaluate_move(const Node& node, EdgeId e, int depth) {
  const Player mover = node.red_count == node.blue_count ? Player::Red : Player::Blue;
  const std::uint64_t bit = std::uint64_t{1} << e;
  const PlayerGraph g = graph_from_mask(n_, mover == Player::Red ? node.red : node.blue);
  if (loses_by(g, e, rules_.forbidden)) return Value::MoverLoses;
  Node child = node;
  if (mover == Player::Red) {
    child.red |= bit;
    ++child.red_count;
  } else {
    child.blue |= bit;
    ++child.blue_count;
  }
  if ((all_edges_ & ~(child.red | child.blue)) == 0) return Value::Draw;
  if (legal_mask(child, opponent(mover)) == 0) return Value::MoverWins;
  return negate(negamax(child, depth + 1));
}

Value Solver::negamax(const Node& node, int depth) {
  tick();
  run_.max_depth = std::max(run_.max_depth, depth);
  const CanonResult canon = canonicalize(n_, node.red, node.blue);
  if (auto it = table_.find(canon.key); it != table_.end()) {
    ++run_.table_hits;
    return it->second;
  }

  const Player mover = node.red_count == node.blue_count ? Player::Red : Player::Blue;
  const std::uint64_t legal = legal_mask(node, mover);
  const PlayerGraph g = graph_from_mask(n_, mover == Player::Red ? node.red : node.blue);

  std::vector<EdgeId> moves;
  if (options_.orbit_pruning) {
    auto orbits = free_edge_orbits(n_, node.red, node.blue, canon.generators).orbits;
    std::stable_sort(orbits.begin(), orbits.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
    for (const auto& orbit : orbits)
      if (legal >> orbit.front() & 1U) moves.push_back(orbit.front());
  } else {
    for (std::uint64_t m = legal; m; m &= m - 1) moves.push_back(std::countr_zero(m));
  }

  Value best = Value::MoverLoses;
  for (EdgeId e : moves) {
    Value v;
    if (loses_by(g, e, rules_.forbidden)) {
      v = Value::MoverLoses;
    } else {
      v = evaluate_move(node, e, depth);
    }
    if (static_cast<int>(v) > static_cast<int>(best)) best = v;
    if (best == Value::MoverWins) break;
  }
  table_.emplace(canon.key, best);
  return best;
}

SolveResult Solver::solve(const Position& p) {
  if (status(p, rules_).finished) throw GameOver("solve: position is finished");
  if (p.n() > kMaxCanonVertices) throw OutOfRange("solver supports n <= 11");
  if (p.n() != n_) {
    n_ = p.n();
    table_.clear();
    all_edges_ = edge_count(n_) == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << edge_count(n_)) - 1;
    incident_.assign(n_, 0);
    vertex_bits_.assign(edge_count(n_), 0);
    for (EdgeId e = 0; e < edge_count(n_); ++e) {
      const Edge ed = edge_endpoints(e, n_);
      incident_[ed.u] |= std::uint64_t{1} << e;
      incident_[ed.v] |= std::uint64_t{1} << e;
      vertex_bits_[e] = vbit(ed.u) | vbit(ed.v);
    }
  }
  run_ = {};
  const auto start = std::chrono::steady_clock::now();
  deadline_ = start + options_.max_time;

  SolveResult out;
  const Node root = node_of(p);
  try {
    out.value = negamax(root, 0);
    const auto legal = legal_mask(root, p.to_move());
    for (std::uint64_t m = legal; m; m &= m - 1) {
      const EdgeId e = std::countr_zero(m);
      if (out.value == Value::MoverLoses || evaluate_move(root, e, 0) == out.value) {
        out.best_move = e;
        break;
      }
    }
  } catch (...) {
    run_.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    total_.nodes += run_.nodes;
    total_.table_hits += run_.table_hits;
    throw;
  }
  out.outcome = outcome_of(out.value, p.to_move());
  run_.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.stats = run_;
  total_.nodes += run_.nodes;
  total_.table_hits += run_.table_hits;
  total_.max_depth = std::max(total_.max_depth, run_.max_depth);
  total_.elapsed_ms += run_.elapsed_ms;
  return out;
}

EdgeId Solver::best_move(const Position& p) {
  const SolveResult r = solve(p);
  if (r.value == Value::MoverLoses) throw PositionLost("position is lost for the side to move");
  return *r.best_move;
}

Value Solver::move_value(const Position& p, EdgeId e) {
  solve(p);  // sets up tables for this n and fills the cache
  if (!is_legal(p, e, rules_)) throw IllegalMove("move_value: illegal move");
  return evaluate_move(node_of(p), e, 0);
}

TerminalCensus enumerate_terminals(int n, const RuleSet& r, std::uint64_t max_classes) {
  TerminalCensus census;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
  std::unordered_set<CanonicalKey, CanonicalKeyHash> terminal_seen;
  std::vector<Position> stack{Position(n)};
  seen.insert(canonical_key(stack.back()));
  while (!stack.empty()) {
    const Position p = std::move(stack.back());
    stack.pop_back();
    if (++census.classes_visited > max_classes) throw BudgetExceeded("terminal census budget exceeded");
    const auto canon = canonicalize(n, p.red_mask(), p.blue_mask());
    const auto orbits = free_edge_orbits(n, p.red_mask(), p.blue_mask(), canon.generators);
    const auto legal = candidate_moves(p, p.to_move(), r);
    for (const auto& orbit : orbits.orbits) {
      if (!std::binary_search(legal.begin(), legal.end(), orbit.front())) continue;
      Position child = p.with_move(orbit.front());
      const CanonicalKey key = canonical_key(child);
      const GameStatus s = status(child, r);
      if (s.finished) {
        if (!terminal_seen.insert(key).second) continue;
        const std::string label =
            (s.winner ? std::string(player_code(*s.winner)) : std::string("-")) + ":" + std::string(reason_name(s.reason));
        ++census.terminals[label];
        if (s.is_draw()) ++census.draws;
        continue;
      }
      if (seen.insert(key).second) stack.push_back(std::move(child));
    }
  }
  return census;
}

}  // namespace avoid
