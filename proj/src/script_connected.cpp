// Blue scripts for the connected games: CAvoider P4, cycle and S3.

#include <array>

#include "script_support.hpp"

namespace avoid::detail {

namespace {

/// Lowest edge disjoint from Red's first edge.
Edge disjoint_opening(const View& v) {
  const Edge red = edge_endpoints(v.p.history().front().edge, v.n);
  for (Vertex a = 0; a < v.n; ++a)
    for (Vertex b = a + 1; b < v.n; ++b)
      if (a != red.u && a != red.v && b != red.u && b != red.v) return {a, b};
  throw ScriptDesync("opening: no edge disjoint from Red's");
}

/// Red's second edge split as (shared vertex, other endpoint).
std::pair<Vertex, Vertex> second_red_edge(const Position& p, Edge first_red) {
  const Edge e = edge_endpoints(p.history()[2].edge, p.n());
  if (e.u == first_red.u || e.u == first_red.v) return {e.u, e.v};
  if (e.v == first_red.u || e.v == first_red.v) return {e.v, e.u};
  throw ScriptDesync("Red's second edge does not touch his first");
}

ScriptMove make_move(const View& v, StrategyId id, std::string stage, std::string rule, Edge e) {
  ScriptMove m;
  m.edge = v.id(e.u, e.v);
  m.trace = {std::string(strategy_name(id)), std::move(stage), std::move(rule), m.edge};
  return m;
}

// CAvoider P4: after the opening rt and Red's uy, Blue plays ut and then
// grows the t-star over every non-blue vertex.
class Th4Script final : public Script {
 public:
  std::unique_ptr<Script> clone() const override { return std::make_unique<Th4Script>(*this); }
  StrategyId id() const override { return StrategyId::Th4; }
  std::string digest() const override {
    return "th4:" + std::to_string(u_) + "," + std::to_string(t_) + "," + case_;
  }

 protected:
  ScriptMove decide(const Position& p) override {
    const View v(p);
    if (turns() == 0) return make_move(v, id(), "opening", "disjoint", disjoint_opening(v));
    if (turns() == 1) {
      const Edge red = edge_endpoints(p.history()[0].edge, v.n);
      const Edge mine = edge_endpoints(p.history()[1].edge, v.n);
      const auto [x, y] = second_red_edge(p, red);
      u_ = x;
      if (y == mine.u || y == mine.v) {
        case_ = "case2";
        t_ = y == mine.u ? mine.v : mine.u;
      } else {
        case_ = "case1";
        t_ = mine.u;
      }
      return make_move(v, id(), case_, "ut", edge_of(u_, t_));
    }
    for (VertexMask m = v.non_blue(); m; m &= m - 1) {
      const Vertex w = std::countr_zero(m);
      if (v.free(t_, w)) return make_move(v, id(), case_, "star-add", edge_of(t_, w));
    }
    throw ScriptDesync("th4 " + case_ + ": no non-blue vertex can join the t-star");
  }

 private:
  Vertex u_ = -1;
  Vertex t_ = -1;
  std::string case_;
};

// CAvoider cycle, Case 2: t-star over the black vertices, then join the
// pure red vertex of largest Red degree to the blue tree.
class Th5Script final : public Script {
 public:
  std::unique_ptr<Script> clone() const override { return std::make_unique<Th5Script>(*this); }
  StrategyId id() const override { return StrategyId::Th5Case2; }
  std::string digest() const override { return "th5:" + std::to_string(u_) + "," + std::to_string(t_); }

 protected:
  ScriptMove decide(const Position& p) override {
    const View v(p);
    if (turns() == 0) return make_move(v, id(), "opening", "disjoint", disjoint_opening(v));
    if (turns() == 1) {
      const Edge red = edge_endpoints(p.history()[0].edge, v.n);
      const Edge mine = edge_endpoints(p.history()[1].edge, v.n);
      const auto [x, y] = second_red_edge(p, red);
      if (y == mine.u || y == mine.v) throw ScriptDesync("th5: Red joined a blue vertex (case 1 line)");
      u_ = x;
      t_ = mine.u;
      return make_move(v, id(), "case2", "tu", edge_of(t_, u_));
    }
    if (const Vertex b = lowest(v.black()); b >= 0) return make_move(v, id(), "case2", "t-black", edge_of(t_, b));
    Vertex m = -1;
    for (VertexMask pr = v.pure_red(); pr; pr &= pr - 1) {
      const Vertex c = std::countr_zero(pr);
      if (m < 0 || v.red.degree(c) > v.red.degree(m)) m = c;
    }
    if (m < 0) throw ScriptDesync("th5 case2: no pure red vertex left");
    for (VertexMask bl = v.blue_v; bl; bl &= bl - 1) {
      const Vertex b = std::countr_zero(bl);
      if (v.free(m, b)) return make_move(v, id(), "case2", "max-degree-join", edge_of(m, b));
    }
    violate("th5-m", "no free edge between m=" + vname(m) + " and the blue vertices");
    throw ScriptDesync("th5 case2: m=" + vname(m) + " has no free edge to a blue vertex");
  }

 private:
  Vertex u_ = -1;
  Vertex t_ = -1;
};

// CAvoider S3, Case 2: a Hamiltonian blue path on V \ {u}, the endgame on
// the last two outside vertices s, k, and finally the cycle through u.
class Th3Script final : public Script {
 public:
  std::unique_ptr<Script> clone() const override { return std::make_unique<Th3Script>(*this); }
  StrategyId id() const override { return StrategyId::Th3Case2; }
  std::string digest() const override {
    std::ostringstream os;
    os << "th3:" << u_ << "," << v_ << "," << y_ << "," << phase_ << "," << y_black_done_ << "," << end_case_ << ";";
    plan_.digest(os);
    return os.str();
  }

 protected:
  ScriptMove decide(const Position& p) override {
    const View v(p);
    if (turns() == 0) return make_move(v, id(), "opening", "disjoint", disjoint_opening(v));
    if (turns() == 1) {
      const Edge red = edge_endpoints(p.history()[0].edge, v.n);
      const Edge mine = edge_endpoints(p.history()[1].edge, v.n);
      const auto [x, y] = second_red_edge(p, red);
      if (y == mine.u || y == mine.v) throw ScriptDesync("th3: Red joined a blue vertex (case 1 line)");
      u_ = x;
      v_ = x == red.u ? red.v : red.u;
      y_ = y;
      const Vertex t = mine.u;
      return make_move(v, id(), "case2", "tv", edge_of(t, v_));
    }
    if (turns() == 2) {
      phase_ = 1;
      if (v.free(v_, y_)) return make_move(v, id(), "case2", "vy", edge_of(v_, y_));
      // Red closed the triangle uvy and loses on his next move.
      y_black_done_ = true;
    }
    if (phase_ == 1) {
      const VertexMask off = v.all & ~vbit(u_) & ~v.blue_v;
      if (std::popcount(off) > 2) return extend(v, off);
      phase_ = 2;
      start_endgame(v, off);
    }
    if (phase_ == 2) {
      if (!plan_.steps.empty()) return make_move_id(v, "endgame", end_case_, plan_.next(v));
      phase_ = 3;
    }
    return close_cycle(v);
  }

 private:
  ScriptMove make_move_id(const View& v, std::string stage, std::string rule, EdgeId e) {
    const Edge ed = edge_endpoints(e, v.n);
    return make_move(v, id(), std::move(stage), std::move(rule), ed);
  }

  std::array<Vertex, 2> path_ends(const View& v) const {
    std::array<Vertex, 2> ends{-1, -1};
    int k = 0;
    for (VertexMask m = v.blue_v; m; m &= m - 1) {
      const Vertex w = std::countr_zero(m);
      if (v.blue.degree(w) == 1 && k < 2) ends[k++] = w;
    }
    if (k != 2) throw ScriptDesync("th3: Blue's graph is not a path");
    return ends;
  }

  ScriptMove extend(const View& v, VertexMask off) {
    const auto ends = path_ends(v);
    if (!y_black_done_) {
      y_black_done_ = true;
      if (std::popcount(v.blue_v) != v.n - 3) {
        // First extension goes from y to a black vertex.
        for (VertexMask b = v.black(); b; b &= b - 1) {
          const Vertex w = std::countr_zero(b);
          if (v.free(y_, w) && (ends[0] == y_ || ends[1] == y_))
            return make_move(v, id(), "case2", "y-black", edge_of(y_, w));
        }
        throw ScriptDesync("th3 case2: no free edge from y to a black vertex");
      }
    }
    EdgeId best = -1;
    for (Vertex end : ends)
      for (VertexMask m = off; m; m &= m - 1) {
        const Vertex w = std::countr_zero(m);
        if (v.free(end, w)) {
          const EdgeId e = v.id(end, w);
          if (best < 0 || e < best) best = e;
        }
      }
    if (best < 0) {
      violate("cl41", "path ends " + vname(ends[0]) + "," + vname(ends[1]) + " cannot reach " + mask_string(off));
      throw ScriptDesync("th3 case2: the blue path cannot be extended");
    }
    return make_move_id(v, "case2", "extend", best);
  }

  void start_endgame(const View& v, VertexMask off) {
    const auto ends = path_ends(v);
    const Vertex i0 = ends[0], j0 = ends[1];
    const Vertex s0 = lowest(off), k0 = lowest(off & (off - 1));
    struct Label {
      Vertex i, j, s, k;
    };
    const std::array<Label, 4> labels{{{i0, j0, s0, k0}, {j0, i0, s0, k0}, {i0, j0, k0, s0}, {j0, i0, k0, s0}}};
    const Label& base = labels[0];
    const std::array<Edge, 4> e4{edge_of(base.i, base.s), edge_of(base.i, base.k), edge_of(base.j, base.s),
                                 edge_of(base.j, base.k)};
    int red = 0, free = 0;
    for (Edge e : e4) {
      if (v.red_edge(e.u, e.v)) ++red;
      else if (v.free(e.u, e.v)) ++free;
    }
    if (red + free != 4) throw ScriptDesync("th3 endgame: a blue edge joins the path to s or k");
    auto lowest_free = [&](const std::array<Edge, 4>& es) {
      Edge best{-1, -1};
      EdgeId best_id = -1;
      for (Edge e : es)
        if (v.free(e.u, e.v) && (best_id < 0 || v.id(e.u, e.v) < best_id)) {
          best = e;
          best_id = v.id(e.u, e.v);
        }
      return best;
    };
    // "One of the edges {ks, js}": the lower id when Blue gets there.
    auto one_of = [&](Edge a, Edge b) {
      if (v.id(b.u, b.v) < v.id(a.u, a.v)) std::swap(a, b);
      plan_.if_free(a, {}, b);
    };
    plan_ = Plan{};
    plan_.stage = "endgame";
    const Edge sk = edge_of(s0, k0);
    if (red == 4) {
      end_case_ = "2.5";
      plan_.must(edge_of(base.i, u_));
      return;
    }
    const bool red_at_s = v.red_edge(base.i, base.s) && v.red_edge(base.j, base.s);
    const bool red_at_k = v.red_edge(base.i, base.k) && v.red_edge(base.j, base.k);
    if (free == 1 || (red == 2 && (red_at_s || red_at_k))) {
      end_case_ = "2.1";
      plan_.must(lowest_free(e4));
      plan_.must(sk);
    } else if (red == 2) {
      end_case_ = "2.2";
      const Edge first = lowest_free(e4);
      Edge other{-1, -1};
      for (Edge e : e4)
        if (v.free(e.u, e.v) && !(e == first)) other = e;
      plan_.must(first);
      plan_.if_free(sk, {}, other);
    } else if (red == 1) {
      end_case_ = "2.3";
      for (const Label& l : labels)
        if (v.red_edge(l.i, l.s)) {
          plan_.must(edge_of(l.i, l.k));
          one_of(edge_of(l.k, l.s), edge_of(l.j, l.s));
          break;
        }
      if (plan_.steps.empty()) throw ScriptDesync("th3 endgame 2.3: no labelling puts the red edge at is");
    } else if (v.free(s0, k0)) {
      end_case_ = "2.4a";
      plan_.must(edge_of(base.i, base.k));
      one_of(edge_of(base.k, base.s), edge_of(base.j, base.s));
    } else {
      end_case_ = "2.4b";
      const Label* chosen = nullptr;
      for (const Label& l : labels)
        if (v.red.degree(l.k) == 2) {
          chosen = &l;
          break;
        }
      if (!chosen) throw ScriptDesync("th3 endgame 2.4b: neither s nor k has Red degree 2");
      plan_.must(edge_of(chosen->i, chosen->s));
      plan_.must(edge_of(chosen->j, chosen->k));
    }
    plan_.rule = end_case_;
  }

  ScriptMove close_cycle(const View& v) {
    const auto ends = path_ends(v);
    if (!v.is_blue(u_)) {
      for (Vertex e : ends)
        if (v.free(u_, e)) return make_move(v, id(), "close", "u-end", edge_of(u_, e));
      throw ScriptDesync("th3 close: no free edge from u to the path ends");
    }
    if (v.free(ends[0], ends[1])) return make_move(v, id(), "close", "u-end", edge_of(ends[0], ends[1]));
    throw ScriptDesync("th3 close: the cycle cannot be closed");
  }

  Vertex u_ = -1;
  Vertex v_ = -1;
  Vertex y_ = -1;
  int phase_ = 0;  // 1 extend, 2 endgame, 3 close
  bool y_black_done_ = false;
  std::string end_case_;
  Plan plan_;
};

}  // namespace

std::unique_ptr<Script> make_th3_script(int) { return std::make_unique<Th3Script>(); }
std::unique_ptr<Script> make_th4_script(int) { return std::make_unique<Th4Script>(); }
std::unique_ptr<Script> make_th5_script(int) { return std::make_unique<Th5Script>(); }

}  // namespace avoid::detail
