// Blue script for the CC>3 game, Case 5: disjoint blue triangles built
// around nice edges.

#include "script_support.hpp"

namespace avoid::detail {

namespace {

struct NiceEdge {
  Edge e;
  Vertex nice_vertex;
};

class Th2Script final : public Script {
 public:
  std::unique_ptr<Script> clone() const override { return std::make_unique<Th2Script>(*this); }
  StrategyId id() const override { return StrategyId::Th2Case5; }

  std::string digest() const override {
    std::ostringstream os;
    os << "th2:";
    for (const auto& ne : nice_) os << ename(ne.e) << "@" << ne.nice_vertex << ",";
    os << ";" << nice_vertices_ << ";" << static_cast<int>(plan_) << ":" << a_ << "," << b_ << "," << c_ << ";" << stage_;
    return os.str();
  }

 protected:
  ScriptMove decide(const Position& p) override {
    const View v(p);
    if (turns() == 0) return opening(v);
    if (turns() == 1) {
      const Edge second = edge_endpoints(p.history()[2].edge, v.n);
      if (!(second == edge_of(u_, i_))) throw ScriptDesync("th2: Red's second edge is not u-i (not case 5)");
      // Blue's opening edge vi closes the triangle on Red's P3 v-u-i.
      nice_.push_back({edge_of(v_, i_), u_});
      nice_vertices_ |= vbit(u_);
    }
    check_claims(v);

    if (auto m = nice_edge_rule(v)) return *m;
    if (plan_ != PlanKind::None) return continue_plan(v);
    stage_ = v.black() ? 1 : 2;
    const int k = static_cast<int>(nice_.size());
    if (k == 0) return rule_2a(v);
    if (k == 1) return rule_2b(v);
    return rule_2c(v);
  }

 private:
  enum class PlanKind : std::uint8_t { None, TriangleX, TriangleW, AroundNice, PureP3 };

  std::string stage_name() const { return stage_ == 1 ? "stage1" : "stage2"; }

  ScriptMove move(const View& v, std::string rule, Edge e) {
    ScriptMove m;
    m.edge = v.id(e.u, e.v);
    m.trace = {std::string(strategy_name(id())), stage_name(), std::move(rule), m.edge};
    return m;
  }

  ScriptMove opening(const View& v) {
    const Edge red = edge_endpoints(v.p.history().front().edge, v.n);
    for (EdgeId e = 0; e < edge_count(v.n); ++e) {
      const Edge c = edge_endpoints(e, v.n);
      const int shared = (c.u == red.u || c.u == red.v) + (c.v == red.u || c.v == red.v);
      if (shared != 1) continue;
      v_ = (c.u == red.u || c.u == red.v) ? c.u : c.v;
      i_ = v_ == c.u ? c.v : c.u;
      u_ = v_ == red.u ? red.v : red.u;
      ScriptMove m;
      m.edge = e;
      m.trace = {std::string(strategy_name(id())), "opening", "adjacent", e};
      return m;
    }
    throw ScriptDesync("th2 opening: no edge adjacent to Red's");
  }

  static bool blue_is_triangles_and_isolated(const View& v) {
    for (Vertex c : v.blue.component_labels()) {
      const auto& s = v.blue.component_stats(c);
      if (s.vertices > 1 && !is_triangle_component(s)) return false;
    }
    return true;
  }

  int live_nice_vertices(const View& v) const { return std::popcount(nice_vertices_ & v.pure_red()); }

  void check_claims(const View& v) {
    const int k = static_cast<int>(nice_.size());
    if (k > 1 && live_nice_vertices(v) < k - 1)
      violate("c3", std::to_string(k) + " nice edges but " + std::to_string(live_nice_vertices(v)) + " nice vertices");
    if (blue_is_triangles_and_isolated(v) && std::popcount(v.pure_red()) < 3)
      violate("c1", "only " + std::to_string(std::popcount(v.pure_red())) + " pure red vertices");
  }

  /// A pure red P3 gets its nice edge. Preempts everything, plans included.
  std::optional<ScriptMove> nice_edge_rule(const View& v) {
    for (VertexMask rc : v.red_components()) {
      const Vertex any = lowest(rc);
      if (classify_component(v.red, any).kind != ComponentKind::Kind::PathOn3) continue;
      if ((rc & v.pure_red()) != rc) continue;
      const Vertex center = classify_component(v.red, any).center;
      const VertexMask ends = rc & ~vbit(center);
      const Edge e = edge_of(lowest(ends), lowest(ends & (ends - 1)));
      if (!v.free(e.u, e.v)) continue;
      nice_.push_back({e, center});
      nice_vertices_ |= vbit(center);
      return move(v, "1 nice-edge", e);
    }
    return std::nullopt;
  }

  VertexMask pure_red_in(const View& v, Vertex rep) const { return v.red.component_mask(rep) & v.pure_red(); }

  ScriptMove rule_2a(const View& v) {
    std::vector<VertexMask> groups;  // pure red vertices per RC
    for (VertexMask rc : v.red_components())
      if (rc & v.pure_red()) groups.push_back(rc & v.pure_red());
    for (VertexMask g : groups)
      if (std::popcount(g) > 2) violate("c2", "an RC holds pure red vertices " + mask_string(g));
    if (groups.size() >= 3) {
      // x and y from the two RCs with the lowest pure red vertices, X3 the next.
      std::sort(groups.begin(), groups.end(), [](VertexMask a, VertexMask b) { return lowest(a) < lowest(b); });
      a_ = lowest(groups[0]);
      b_ = lowest(groups[1]);
      c_ = lowest(groups[2]);  // representative of X3
      plan_ = PlanKind::TriangleX;
      return move(v, "2a(i) xy", edge_of(a_, b_));
    }
    if (groups.size() == 2) {
      const int first_two = std::popcount(groups[0]) == 2 ? 0 : (std::popcount(groups[1]) == 2 ? 1 : -1);
      if (first_two < 0) throw ScriptDesync("th2 rule 2a(ii): no RC with two pure red vertices");
      if (stage_ == 2) return start_pure_p3(v);
      const VertexMask x1 = groups[first_two];
      const VertexMask x2 = groups[1 - first_two];
      const Vertex w = lowest(v.black());
      a_ = w;
      c_ = lowest(x1);
      plan_ = PlanKind::TriangleW;
      return move(v, "2a(ii) X2-w", edge_of(lowest(x2), w));
    }
    throw ScriptDesync("th2 rule 2a: pure red vertices lie in fewer than two RCs");
  }

  ScriptMove start_pure_p3(const View& v) {
    const VertexMask pr = v.pure_red();
    for (EdgeId e = 0; e < edge_count(v.n); ++e) {
      const Edge ed = edge_endpoints(e, v.n);
      if (!((pr >> ed.u) & 1U) || !((pr >> ed.v) & 1U) || !v.free(ed.u, ed.v)) continue;
      for (VertexMask m = pr & ~vbit(ed.u) & ~vbit(ed.v); m; m &= m - 1) {
        const Vertex c = std::countr_zero(m);
        if (v.free(ed.u, c) || v.free(ed.v, c)) {
          a_ = ed.u;
          b_ = ed.v;
          plan_ = PlanKind::PureP3;
          return move(v, "2a(ii) pure-red-P3", ed);
        }
      }
    }
    throw ScriptDesync("th2 stage2 rule 2a(ii): no pure red P3 available");
  }

  ScriptMove rule_2b(const View& v) {
    const NiceEdge ne = nice_.front();
    const VertexMask targets = stage_ == 1 ? v.black() : (v.pure_red() & ~vbit(ne.nice_vertex));
    EdgeId best = -1;
    for (Vertex end : {ne.e.u, ne.e.v})
      for (VertexMask m = targets; m; m &= m - 1) {
        const Vertex w = std::countr_zero(m);
        if (v.free(end, w) && (best < 0 || v.id(end, w) < best)) best = v.id(end, w);
      }
    if (best < 0) throw ScriptDesync("th2 rule 2b: no edge from the nice edge to a " + std::string(stage_ == 1 ? "black" : "pure red") + " vertex");
    const Edge e = edge_endpoints(best, v.n);
    a_ = ne.e.u;
    b_ = ne.e.v;
    c_ = (e.u == a_ || e.u == b_) ? e.v : e.u;
    nice_.erase(nice_.begin());
    plan_ = PlanKind::AroundNice;
    return move(v, "2b extend-nice", e);
  }

  ScriptMove rule_2c(const View& v) {
    for (VertexMask nv = nice_vertices_ & v.pure_red(); nv; nv &= nv - 1) {
      const Vertex c = std::countr_zero(nv);
      for (std::size_t idx = 0; idx < nice_.size(); ++idx) {
        const NiceEdge ne = nice_[idx];
        if (v.red.same_component(c, ne.nice_vertex)) continue;
        const Vertex first = v.id(c, ne.e.u) < v.id(c, ne.e.v) ? ne.e.u : ne.e.v;
        if (!v.free(c, first)) continue;
        a_ = ne.e.u;
        b_ = ne.e.v;
        c_ = c;
        nice_.erase(nice_.begin() + static_cast<std::ptrdiff_t>(idx));
        nice_vertices_ &= ~vbit(c);
        plan_ = PlanKind::AroundNice;
        return move(v, "2c nice-vertex-to-nice-edge", edge_of(c, first));
      }
    }
    throw ScriptDesync("th2 rule 2c: no nice vertex and nice edge in different RCs");
  }

  /// Closes the triangle on the two blue neighbours of `apex`.
  ScriptMove close_at(const View& v, Vertex apex, const std::string& rule) {
    const VertexMask nb = v.blue.neighbours(apex);
    if (std::popcount(nb) != 2) throw ScriptDesync("th2 " + rule + ": apex " + vname(apex) + " does not have blue degree 2");
    const Edge e = edge_of(lowest(nb), lowest(nb & (nb - 1)));
    if (!v.free(e.u, e.v)) throw ScriptDesync("th2 " + rule + ": closing edge " + ename(e) + " is not free");
    plan_ = PlanKind::None;
    return move(v, rule, e);
  }

  ScriptMove continue_plan(const View& v) {
    switch (plan_) {
      case PlanKind::TriangleX: {
        if (v.blue.degree(a_) == 1) {
          const VertexMask z = pure_red_in(v, c_);
          if (!z) throw ScriptDesync("th2 rule 2a(i): X3 has no pure red vertex");
          return move(v, "2a(i) xz", edge_of(a_, lowest(z)));
        }
        return close_at(v, a_, "2a(i) yz");
      }
      case PlanKind::TriangleW: {
        if (v.blue.degree(a_) == 1) {
          const VertexMask z = pure_red_in(v, c_);
          if (!z) throw ScriptDesync("th2 rule 2a(ii): X1 has no pure red vertex");
          return move(v, "2a(ii) X1-w", edge_of(lowest(z), a_));
        }
        return close_at(v, a_, "2a(ii) close");
      }
      case PlanKind::AroundNice: {
        const Edge e = v.blue_edge(a_, c_) ? edge_of(b_, c_) : edge_of(a_, c_);
        if (!v.free(e.u, e.v)) throw ScriptDesync("th2 triangle: closing edge " + ename(e) + " is not free");
        plan_ = PlanKind::None;
        return move(v, "close-triangle", e);
      }
      case PlanKind::PureP3: {
        for (Vertex end : {a_, b_})
          for (VertexMask m = v.pure_red(); m; m &= m - 1) {
            const Vertex c = std::countr_zero(m);
            if (v.free(end, c)) {
              plan_ = PlanKind::None;
              return move(v, "2a(ii) pure-red-P3", edge_of(end, c));
            }
          }
        throw ScriptDesync("th2 stage2 rule 2a(ii): the P3 cannot be completed");
      }
      case PlanKind::None:
        break;
    }
    throw ScriptDesync("th2: no plan");
  }

  Vertex u_ = -1, v_ = -1, i_ = -1;
  std::vector<NiceEdge> nice_;
  VertexMask nice_vertices_ = 0;
  PlanKind plan_ = PlanKind::None;
  Vertex a_ = -1, b_ = -1, c_ = -1;
  int stage_ = 1;
};

}  // namespace

std::unique_ptr<Script> make_th2_script(int) { return std::make_unique<Th2Script>(); }

}  // namespace avoid::detail
