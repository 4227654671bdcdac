#pragma once

// Shared plumbing for the Blue rule machines.

#include <algorithm>
#include <bit>
#include <optional>
#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "avoid/strategies.hpp"

namespace avoid::detail {

inline Vertex lowest(VertexMask m) { return m ? std::countr_zero(m) : -1; }

inline std::string vname(Vertex v) { return std::to_string(v); }
inline std::string ename(Edge e) { return std::to_string(e.u) + "-" + std::to_string(e.v); }

inline std::string mask_string(VertexMask m) {
  std::string s = "{";
  for (bool first = true; m; m &= m - 1, first = false) {
    if (!first) s += ",";
    s += std::to_string(std::countr_zero(m));
  }
  return s + "}";
}

/// Per-turn derived facts about a position.
struct View {
  const Position& p;
  int n;
  PlayerGraph red;
  PlayerGraph blue;
  VertexMask all;
  VertexMask red_v;
  VertexMask blue_v;

  explicit View(const Position& pos)
      : p(pos),
        n(pos.n()),
        red(pos.graph_of(Player::Red)),
        blue(pos.graph_of(Player::Blue)),
        all(n == 64 ? ~VertexMask{0} : (VertexMask{1} << n) - 1),
        red_v(red.touched()),
        blue_v(blue.touched()) {}

  bool free(Vertex a, Vertex b) const { return a != b && p.is_free(a, b); }
  bool red_edge(Vertex a, Vertex b) const { return a != b && p.cell(a, b) == CellState::Red; }
  bool blue_edge(Vertex a, Vertex b) const { return a != b && p.cell(a, b) == CellState::Blue; }
  EdgeId id(Vertex a, Vertex b) const { return edge_id_unchecked(a, b, n); }

  VertexMask black() const { return all & ~red_v & ~blue_v; }
  VertexMask pure_red() const { return red_v & ~blue_v; }
  VertexMask non_blue() const { return all & ~blue_v; }
  bool is_black(Vertex x) const { return (black() >> x) & 1U; }
  bool is_pure_red(Vertex x) const { return (pure_red() >> x) & 1U; }
  bool is_blue(Vertex x) const { return (blue_v >> x) & 1U; }
  bool is_red(Vertex x) const { return (red_v >> x) & 1U; }

  /// Non-trivial red components, by lowest member.
  std::vector<VertexMask> red_components() const {
    std::vector<VertexMask> out;
    for (Vertex c : red.component_labels())
      if (red.component_stats(c).vertices > 1) out.push_back(red.component_mask(c));
    return out;
  }
};

/// Queued edges of a committed construction. A step may be conditional on
/// the edge still being free; either branch can queue follow-up edges.
struct PlanStep {
  enum class Kind : std::uint8_t { Must, IfFree };
  Kind kind = Kind::Must;
  Edge e;
  std::vector<Edge> then;          // queued (as Must) after claiming e
  std::optional<Edge> alt;         // IfFree: claimed instead when e is taken
  std::vector<Edge> alt_then;      // queued after claiming alt
};

struct Plan {
  std::string stage;
  std::string rule;
  std::deque<PlanStep> steps;
  bool star_add_after = false;
  Vertex star_center = -1;

  bool active() const { return !steps.empty() || star_add_after; }

  void must(Edge e) { steps.push_back({PlanStep::Kind::Must, e, {}, std::nullopt, {}}); }
  void if_free(Edge e, std::vector<Edge> then = {}, std::optional<Edge> alt = std::nullopt,
               std::vector<Edge> alt_then = {}) {
    steps.push_back({PlanStep::Kind::IfFree, e, std::move(then), alt, std::move(alt_then)});
  }

  /// Next edge of the plan; throws ScriptDesync when a mandated edge is gone.
  EdgeId next(const View& v) {
    while (!steps.empty()) {
      PlanStep s = steps.front();
      steps.pop_front();
      if (s.kind == PlanStep::Kind::Must) {
        if (!v.free(s.e.u, s.e.v))
          throw ScriptDesync(stage + " " + rule + ": planned edge " + ename(s.e) + " is not free");
        return v.id(s.e.u, s.e.v);
      }
      if (v.free(s.e.u, s.e.v)) {
        for (auto it = s.then.rbegin(); it != s.then.rend(); ++it)
          steps.push_front({PlanStep::Kind::Must, *it, {}, std::nullopt, {}});
        return v.id(s.e.u, s.e.v);
      }
      if (s.alt && v.free(s.alt->u, s.alt->v)) {
        for (auto it = s.alt_then.rbegin(); it != s.alt_then.rend(); ++it)
          steps.push_front({PlanStep::Kind::Must, *it, {}, std::nullopt, {}});
        return v.id(s.alt->u, s.alt->v);
      }
      if (s.alt) throw ScriptDesync(stage + " " + rule + ": neither " + ename(s.e) + " nor " + ename(*s.alt) + " is free");
      // Unconditional skip of a taken optional edge.
    }
    if (star_add_after) {
      const VertexMask cand = v.non_blue() & ~vbit(star_center);
      for (VertexMask m = cand; m; m &= m - 1) {
        const Vertex w = std::countr_zero(m);
        if (v.free(star_center, w)) return v.id(star_center, w);
      }
      throw ScriptDesync(stage + " " + rule + ": no vertex left to star-add to " + vname(star_center));
    }
    throw ScriptDesync(stage + " " + rule + ": plan exhausted");
  }

  void digest(std::ostringstream& os) const {
    os << "plan:" << stage << "/" << rule << ";";
    for (const auto& s : steps) {
      os << static_cast<int>(s.kind) << ename(s.e);
      for (const auto& t : s.then) os << "+" << ename(t);
      if (s.alt) os << "|" << ename(*s.alt);
      for (const auto& t : s.alt_then) os << "+" << ename(t);
      os << ",";
    }
    os << (star_add_after ? "*" : "") << star_center << ";";
  }
};

inline Edge edge_of(Vertex a, Vertex b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Edges of the triangle on {a,b,c} in ascending id.
inline std::vector<Edge> triangle_edges(Vertex a, Vertex b, Vertex c, int n) {
  std::vector<Edge> es{edge_of(a, b), edge_of(a, c), edge_of(b, c)};
  std::sort(es.begin(), es.end(), [n](Edge x, Edge y) { return edge_id_unchecked(x.u, x.v, n) < edge_id_unchecked(y.u, y.v, n); });
  return es;
}

std::unique_ptr<Script> make_th1_script(int n);
std::unique_ptr<Script> make_th2_script(int n);
std::unique_ptr<Script> make_th3_script(int n);
std::unique_ptr<Script> make_th4_script(int n);
std::unique_ptr<Script> make_th5_script(int n);

}  // namespace avoid::detail
