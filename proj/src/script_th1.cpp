// Blue script for the P4 game, Case 4: grow a v-star, answer Red's threats
// around v with triangles, and keep S1 (the vertices Red could still join to
// v) small enough to triangulate at the end.

#include "script_support.hpp"

namespace avoid::detail {

namespace {

using Kind = ComponentKind::Kind;

class Th1Script final : public Script {
 public:
  std::unique_ptr<Script> clone() const override { return std::make_unique<Th1Script>(*this); }
  StrategyId id() const override { return StrategyId::Th1Case4; }

  std::string digest() const override {
    std::ostringstream os;
    os << "th1:" << r_ << "," << t_ << "," << u_ << "," << v_ << "," << x_ << "," << y_ << ";" << s1_ << ";";
    if (cover_) os << ename(*cover_);
    os << ";" << static_cast<int>(phase_) << ";" << w_ << ";";
    plan_.digest(os);
    return os.str();
  }

 protected:
  ScriptMove decide(const Position& p) override {
    const View v(p);
    switch (turns()) {
      case 0: return opening(v);
      case 1: return second(v);
      case 2: return third(v);
      default: break;
    }
    if (plan_.active()) return move(v, plan_.stage, plan_.rule, edge_endpoints(plan_.next(v), v.n));
    if (phase_ == Phase::Stage1) {
      s1_ &= ~v.blue_v;
      if (std::popcount(v.black()) >= 2) return stage1(v);
      check_cs12(v);
      enter_stage2(v);
    }
    if (phase_ == Phase::Stage2a) return stage2a(v);
    if (plan_.active()) return move(v, plan_.stage, plan_.rule, edge_endpoints(plan_.next(v), v.n));
    throw ScriptDesync("th1: no rule applies");
  }

 private:
  enum class Phase : std::uint8_t { Stage1, Stage2a, Stage2b };

  ScriptMove move(const View& v, const std::string& stage, const std::string& rule, Edge e) {
    ScriptMove m;
    m.edge = v.id(e.u, e.v);
    m.trace = {std::string(strategy_name(id())), stage, rule, m.edge};
    return m;
  }

  // ---- opening ------------------------------------------------------------

  ScriptMove opening(const View& v) {
    const Edge red = edge_endpoints(v.p.history().front().edge, v.n);
    for (Vertex a = 0; a < v.n; ++a)
      for (Vertex b = a + 1; b < v.n; ++b)
        if (a != red.u && a != red.v && b != red.u && b != red.v) return move(v, "opening", "disjoint", {a, b});
    throw ScriptDesync("th1 opening: no edge disjoint from Red's");
  }

  ScriptMove second(const View& v) {
    const Edge red = edge_endpoints(v.p.history()[0].edge, v.n);
    const Edge mine = edge_endpoints(v.p.history()[1].edge, v.n);
    const Edge xy = edge_endpoints(v.p.history()[2].edge, v.n);
    for (Vertex z : {xy.u, xy.v})
      if (z == red.u || z == red.v || z == mine.u || z == mine.v)
        throw ScriptDesync("th1: Red's second edge touches a claimed vertex (not case 4)");
    EdgeId best = -1;
    for (Vertex bv : {mine.u, mine.v})
      for (Vertex rv : {red.u, red.v})
        if (best < 0 || v.id(bv, rv) < best) {
          best = v.id(bv, rv);
          v_ = bv;
          r_ = rv;
        }
    u_ = v_ == mine.u ? mine.v : mine.u;
    t_ = r_ == red.u ? red.v : red.u;
    x_ = xy.u;
    y_ = xy.v;
    return move(v, "opening", "vr", edge_of(v_, r_));
  }

  ScriptMove third(const View& v) {
    Vertex join;
    if (v.red_edge(x_, v_)) join = y_;
    else if (v.red_edge(y_, v_)) join = x_;
    else join = v.id(x_, v_) < v.id(y_, v_) ? x_ : y_;
    if (!v.free(join, v_)) throw ScriptDesync("th1 opening: neither xv nor yv is free");
    x_ = join == x_ ? y_ : x_;
    y_ = join;
    s1_ = vbit(x_) | vbit(t_);
    phase_ = Phase::Stage1;
    return move(v, "opening", v.red_edge(x_, v_) ? "xv" : "yv", edge_of(y_, v_));
  }

  // ---- shared predicates --------------------------------------------------

  VertexMask c1(const View& v) const { return v.red.component_mask(t_); }
  VertexMask c2(const View& v) const { return v.red.component_mask(x_); }

  bool dangerous(const View& v, Vertex k) const {
    return k != v_ && !v.is_blue(k) && v.free(k, v_) && !loses_by(v.red, v.id(k, v_), Forbidden::SubgraphP4);
  }
  bool safe(const View& v, Vertex k) const { return !dangerous(v, k); }

  VertexMask inaccessible(const View& v) const { return v.pure_red() & v.red.neighbours(v_); }

  VertexMask outside_pure_red(const View& v) const { return v.pure_red() & ~c1(v) & ~c2(v); }

  /// The red component containing Red's last edge.
  ComponentKind last_red_component(const View& v) const {
    const Edge e = edge_endpoints(v.p.history().back().edge, v.n);
    return classify_component(v.red, e.u);
  }

  /// Rule 2 of Stage 1: a red P3 with v as a leaf and the v-leaf edge free.
  std::optional<Edge> rule2_edge(const View& v) const {
    const ComponentKind c = last_red_component(v);
    if (c.kind != Kind::PathOn3 || !((c.vertices >> v_) & 1U) || c.center == v_) return std::nullopt;
    const Vertex z = lowest(c.vertices & ~vbit(v_) & ~vbit(c.center));
    if (!v.free(v_, z)) return std::nullopt;
    return edge_of(v_, z);
  }

  /// Rule 3 of Stage 1: a red v-star on three vertices with its leaves unjoined.
  std::optional<Edge> rule3_edge(const View& v) const {
    const ComponentKind c = last_red_component(v);
    if (c.kind != Kind::PathOn3 || c.center != v_) return std::nullopt;
    const VertexMask leaves = c.vertices & ~vbit(v_);
    const Edge e = edge_of(lowest(leaves), lowest(leaves & (leaves - 1)));
    if (!v.free(e.u, e.v)) return std::nullopt;
    return e;
  }

  void star_add_after(Plan& plan) const {
    plan.star_add_after = true;
    plan.star_center = v_;
  }

  void plan_triangle(Plan& plan, Vertex a, Vertex b, Vertex c, int n) const {
    for (Edge e : triangle_edges(a, b, c, n)) plan.must(e);
  }

  // ---- claims -------------------------------------------------------------

  void check_stage1_shape(const View& v) {
    for (EdgeId e : v.blue.edges()) {
      const Edge ed = edge_endpoints(e, v.n);
      if (ed.u == v_ || ed.v == v_) continue;
      if (cover_ && ed == *cover_) continue;
      violate("stage1-shape", "blue edge " + ename(ed) + " is neither in the v-star nor the cover-edge");
      return;
    }
  }

  void check_cs12(const View& v) {
    if (std::popcount(v.black()) > 2 || outside_pure_red(v) || cover_) return;
    const VertexMask c12 = c1(v) | c2(v);
    bool any_safe = false;
    for (VertexMask m = c12 & v.pure_red(); m; m &= m - 1) any_safe |= safe(v, std::countr_zero(m));
    std::string why;
    if (v.red.edge_count() < 4) why = "Red has fewer than four edges";
    else if (!any_safe) why = "no safe pure red vertex in C1 u C2";
    else if (!(c1(v) & v.pure_red())) why = "C1 has no pure red vertex";
    else if (!(c2(v) & v.pure_red())) why = "C2 has no pure red vertex";
    if (!why.empty()) violate("cs12", why);
  }

  // ---- Stage 1 ------------------------------------------------------------

  ScriptMove stage1(const View& v) {
    check_stage1_shape(v);
    check_cs12(v);

    // Rule 1: Red joined v to a vertex of S1.
    for (VertexMask m = s1_; m; m &= m - 1) {
      const Vertex x = std::countr_zero(m);
      if (!v.red_edge(x, v_)) continue;
      if (std::popcount(s1_) != 2) throw ScriptDesync("th1 S1.R1: S1 does not have two vertices");
      const Vertex k = lowest(s1_ & ~vbit(x));
      const VertexMask blacks = v.black();
      const Vertex m1 = lowest(blacks);
      const Vertex n1 = lowest(blacks & (blacks - 1));
      plan_ = Plan{};
      plan_.stage = "stage1";
      plan_.rule = "R1 triangle";
      plan_.must(edge_of(x, m1));
      plan_.if_free(edge_of(k, m1), {edge_of(x, k)}, edge_of(x, n1), {edge_of(m1, n1)});
      star_add_after(plan_);
      return move(v, plan_.stage, plan_.rule, edge_endpoints(plan_.next(v), v.n));
    }
    // Rule 2: Red made a P3 with v as a leaf.
    if (auto e = rule2_edge(v)) {
      const Vertex center = last_red_component(v).center;
      if (std::popcount(s1_) != 2) throw ScriptDesync("th1 S1.R2: S1 does not have two vertices");
      const Vertex a = lowest(s1_), b = lowest(s1_ & (s1_ - 1));
      plan_ = Plan{};
      plan_.stage = "stage1";
      plan_.rule = "R2 triangle";
      plan_triangle(plan_, center, a, b, v.n);
      star_add_after(plan_);
      return move(v, "stage1", "R2 v-leaf", *e);
    }
    // Rule 3: cover-edge.
    if (auto e = rule3_edge(v)) {
      cover_ = *e;
      return move(v, "stage1", "R3 cover-edge", *e);
    }
    // Rule 4: redirect the v-star to the centre of a large red star.
    if (std::popcount(v.black()) == 2 && !outside_pure_red(v) && !cover_) {
      const ComponentKind k1 = classify_component(v.red, t_);
      const ComponentKind k2 = classify_component(v.red, x_);
      for (const auto& [edge_c, star_c] : {std::pair{k1, k2}, std::pair{k2, k1}}) {
        if (edge_c.kind != Kind::Edge || star_c.kind != Kind::Star || star_c.leaf_count < 3) continue;
        if ((star_c.vertices >> v_) & 1U) continue;
        const Vertex c = star_c.center;
        if (!v.free(c, v_)) continue;
        if ((s1_ >> c) & 1U) {
          // Safety is judged on the position after Blue's claim.
          Position after = v.p.with_move(v.id(c, v_));
          const View va(after);
          Vertex add = -1;
          for (VertexMask m = star_c.vertices & va.pure_red() & ~s1_; m; m &= m - 1)
            if (safe(va, std::countr_zero(m))) {
              add = std::countr_zero(m);
              break;
            }
          if (add < 0) throw ScriptDesync("th1 S1.R4: no safe pure red vertex in the star");
          s1_ = (s1_ & ~vbit(c)) | vbit(add);
        }
        return move(v, "stage1", "R4 star-centre", edge_of(c, v_));
      }
    }
    // Rule 5.
    const Vertex b = lowest(v.black());
    return move(v, "stage1", "R5 v-black", edge_of(v_, b));
  }

  // ---- Stage 2 ------------------------------------------------------------

  void enter_stage2(const View& v) {
    if (outside_pure_red(v) || cover_) {
      phase_ = Phase::Stage2a;
      s1_ |= inaccessible(v);
      if (cover_) s1_ |= vbit(cover_->u) | vbit(cover_->v);
      if (outside_pure_red(v)) w_ = lowest(outside_pure_red(v));
      if (std::popcount(s1_) < 3 && w_ >= 0) s1_ |= vbit(w_);
      return;
    }
    phase_ = Phase::Stage2b;
    plan_stage2b(v);
  }

  ScriptMove stage2a(const View& v) {
    s1_ |= inaccessible(v);
    if (auto e = rule2_edge(v)) return move(v, "stage2a", "a R2 v-leaf", *e);
    if (auto e = rule3_edge(v)) {
      cover_ = *e;
      s1_ |= vbit(e->u) | vbit(e->v);
      return move(v, "stage2a", "a R3 cover-edge", *e);
    }
    if (const Vertex b = lowest(v.black()); b >= 0) return move(v, "stage2a", "b v-black", edge_of(v_, b));

    plan_ = Plan{};
    plan_.stage = "stage2a";
    if (cover_) {
      plan_.rule = "c cover-triangles";
      const VertexMask c12 = c1(v) | c2(v);
      for (int drop = std::popcount(s1_) % 3; drop > 0; --drop) {
        const Vertex d = lowest(s1_ & c12);
        if (d < 0) throw ScriptDesync("th1 2a.c: cannot trim S1 to a multiple of three");
        s1_ &= ~vbit(d);
      }
      VertexMask rest = s1_ & ~vbit(cover_->u) & ~vbit(cover_->v);
      if (std::popcount(rest) + 2 != std::popcount(s1_)) throw ScriptDesync("th1 2a.c: S1 lacks the cover-edge ends");
      const Vertex c = lowest(rest);
      if (c < 0) throw ScriptDesync("th1 2a.c: S1 has no third vertex for the cover triangle");
      rest &= ~vbit(c);
      const Edge ca = edge_of(c, cover_->u), cb = edge_of(c, cover_->v);
      if (v.id(ca.u, ca.v) < v.id(cb.u, cb.v)) {
        plan_.must(ca);
        plan_.must(cb);
      } else {
        plan_.must(cb);
        plan_.must(ca);
      }
      while (rest) {
        const Vertex a = lowest(rest);
        rest &= rest - 1;
        const Vertex b = lowest(rest);
        rest &= rest - 1;
        const Vertex d = lowest(rest);
        rest &= rest - 1;
        if (b < 0 || d < 0) throw ScriptDesync("th1 2a.c: S1 does not split into triangles");
        plan_triangle(plan_, a, b, d, v.n);
      }
    } else if (inaccessible(v)) {
      plan_.rule = "d inaccessible-triangle";
      if (std::popcount(s1_) == 4 && w_ >= 0) s1_ &= ~vbit(w_);
      if (std::popcount(s1_) != 3) throw ScriptDesync("th1 2a.d: S1 has " + std::to_string(std::popcount(s1_)) + " vertices");
      plan_s1_triangle(v);
    } else {
      for (VertexMask m = v.pure_red() & ~s1_; m; m &= m - 1) {
        const Vertex k = std::countr_zero(m);
        if (dangerous(v, k)) return move(v, "stage2a", "e v-dangerous", edge_of(v_, k));
      }
      plan_.rule = "f S1-triangle";
      if (std::popcount(s1_) != 3) throw ScriptDesync("th1 2a.f: S1 has " + std::to_string(std::popcount(s1_)) + " vertices");
      plan_s1_triangle(v);
    }
    star_add_after(plan_);
    return move(v, plan_.stage, plan_.rule, edge_endpoints(plan_.next(v), v.n));
  }

  void plan_s1_triangle(const View& v) {
    const Vertex a = lowest(s1_);
    const Vertex b = lowest(s1_ & (s1_ - 1));
    const Vertex c = lowest(s1_ & ~vbit(a) & ~vbit(b));
    plan_triangle(plan_, a, b, c, v.n);
  }

  void plan_stage2b(const View& v) {
    const Vertex j = lowest(v.black());
    const ComponentKind k1 = classify_component(v.red, t_);
    const ComponentKind k2 = classify_component(v.red, x_);
    plan_ = Plan{};
    plan_.stage = "stage2b";
    star_add_after(plan_);
    auto is_star2 = [](const ComponentKind& c) { return c.kind == Kind::PathOn3 || c.kind == Kind::Star; };

    // a: a star with more than two edges away from v.
    for (const ComponentKind* c : {&k1, &k2})
      if (c->kind == Kind::Star && c->leaf_count > 2 && !((c->vertices >> v_) & 1U)) {
        plan_.rule = "a star-centre";
        plan_.if_free(edge_of(v_, c->center));
        return;
      }
    // b: two stars with at least two edges each.
    if (is_star2(k1) && is_star2(k2)) {
      if (v.is_red(v_)) {
        if (j < 0) throw ScriptDesync("th1 2b.b(i): no black vertex j");
        plan_.rule = "b(i) v-red";
        const ComponentKind& with_v = ((k1.vertices >> v_) & 1U) ? k1 : k2;
        const Vertex r = with_v.center;
        const Vertex k = lowest(v.pure_red() & ~with_v.vertices);
        if (k < 0) throw ScriptDesync("th1 2b.b(i): no pure red vertex outside r's RC");
        plan_.must(edge_of(r, j));
        plan_.if_free(edge_of(k, j), {edge_of(k, r)});
        return;
      }
      plan_.rule = "b(ii) v-blue";
      Vertex w = -1;
      for (VertexMask m = (k1.vertices | k2.vertices) & v.pure_red(); m; m &= m - 1) {
        const Vertex c = std::countr_zero(m);
        if (c != k1.center && c != k2.center && safe(v, c)) {
          w = c;
          break;
        }
      }
      if (w < 0) throw ScriptDesync("th1 2b.b(ii): no safe pure red leaf");
      const ComponentKind& own = ((k1.vertices >> w) & 1U) ? k1 : k2;
      const ComponentKind& other = ((k1.vertices >> w) & 1U) ? k2 : k1;
      // The proof needs every pure red vertex left over to be safe, so a
      // dangerous k is preferred.
      Vertex k = -1;
      for (VertexMask m = other.vertices & v.pure_red(); m && k < 0; m &= m - 1)
        if (dangerous(v, std::countr_zero(m))) k = std::countr_zero(m);
      if (k < 0) k = lowest(other.vertices & v.pure_red());
      if (k < 0) throw ScriptDesync("th1 2b.b(ii): the other RC has no pure red vertex");
      plan_.if_free(edge_of(own.center, v_));
      if (j < 0) {
        // No j: kj cannot be claimed, the "otherwise" branch applies.
        plan_.must(edge_of(k, v_));
        return;
      }
      std::vector<Edge> tri;
      for (Edge e : triangle_edges(k, j, w, v.n))
        if (!(e == edge_of(k, j))) tri.push_back(e);
      plan_.if_free(edge_of(k, j), tri, edge_of(k, v_));
      return;
    }
    // c: a triangle component.
    for (const auto& [tri, other] : {std::pair{&k1, &k2}, std::pair{&k2, &k1}}) {
      if (tri->kind != Kind::Triangle) continue;
      plan_.rule = "c triangle";
      const Vertex k = lowest(tri->vertices & v.pure_red());
      Vertex r = -1;
      for (VertexMask m = other->vertices & v.pure_red(); m; m &= m - 1)
        if (dangerous(v, std::countr_zero(m))) {
          r = std::countr_zero(m);
          break;
        }
      if (r < 0) r = lowest(other->vertices & v.pure_red());
      if (k < 0 || r < 0) throw ScriptDesync("th1 2b.c: missing pure red vertex");
      if (j >= 0) {
        std::vector<Edge> rest;
        for (Edge e : triangle_edges(r, j, k, v.n))
          if (!(e == edge_of(r, j))) rest.push_back(e);
        plan_.if_free(edge_of(r, j), rest, edge_of(r, v_));
      } else {
        plan_.must(edge_of(r, v_));
      }
      return;
    }
    throw ScriptDesync("th1 stage2b: C1 and C2 match none of the conditions");
  }

  Vertex r_ = -1, t_ = -1, u_ = -1, v_ = -1, x_ = -1, y_ = -1;
  VertexMask s1_ = 0;
  std::optional<Edge> cover_;
  Phase phase_ = Phase::Stage1;
  Vertex w_ = -1;
  Plan plan_;
};

}  // namespace

std::unique_ptr<Script> make_th1_script(int) { return std::make_unique<Th1Script>(); }

}  // namespace avoid::detail
