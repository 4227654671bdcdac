#include "avoid/detectors.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace avoid {

namespace {

Vertex lowest(VertexMask m) { return std::countr_zero(m); }

template <class F>
void for_each_vertex(VertexMask m, F&& f) {
  while (m) {
    const Vertex v = std::countr_zero(m);
    m &= m - 1;
    f(v);
  }
}

}  // namespace

PlayerGraph::PlayerGraph(int n) : n_(n), adj_(n, 0), comp_(n), mask_(n), stats_(n) {
  if (n < 1 || n > kMaxVertices) throw OutOfRange("vertex count out of range: " + std::to_string(n));
  for (Vertex v = 0; v < n; ++v) {
    comp_[v] = v;
    mask_[v] = vbit(v);
  }
}

PlayerGraph::PlayerGraph(int n, std::span<const EdgeId> edges) : PlayerGraph(n) {
  for (EdgeId e : edges) add_edge(e);
}

void PlayerGraph::add_edge(EdgeId e) {
  const Edge ed = edge_endpoints(e, n_);
  add_edge(ed.u, ed.v);
}

void PlayerGraph::add_edge(Vertex a, Vertex b) {
  if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) throw OutOfRange("bad edge endpoints");
  if (has_edge(a, b)) throw std::invalid_argument("edge already present");
  adj_[a] |= vbit(b);
  adj_[b] |= vbit(a);
  touched_ |= vbit(a) | vbit(b);
  ++edge_count_;

  Vertex ra = comp_[a];
  Vertex rb = comp_[b];
  if (ra != rb) {
    // The merged component keeps the smaller label.
    if (rb < ra) std::swap(ra, rb);
    for_each_vertex(mask_[rb], [&](Vertex w) { comp_[w] = ra; });
    mask_[ra] |= mask_[rb];
    mask_[rb] = 0;
    stats_[ra].vertices += stats_[rb].vertices;
    stats_[ra].edges += stats_[rb].edges;
    stats_[ra].max_degree = std::max(stats_[ra].max_degree, stats_[rb].max_degree);
    stats_[rb] = {};
  }
  auto& s = stats_[ra];
  ++s.edges;
  s.max_degree = std::max({s.max_degree, degree(a), degree(b)});
}

std::vector<Vertex> PlayerGraph::component_labels() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n_; ++v)
    if (comp_[v] == v) out.push_back(v);
  return out;
}

std::vector<EdgeId> PlayerGraph::edges() const {
  std::vector<EdgeId> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < n_; ++u) {
    VertexMask higher = adj_[u] & ~((vbit(u) << 1) - 1);
    for_each_vertex(higher, [&](Vertex v) { out.push_back(edge_id_unchecked(u, v, n_)); });
  }
  return out;
}

bool is_star_component(const PlayerGraph::ComponentStats& s) {
  return s.edges == s.vertices - 1 && (s.vertices <= 2 || s.max_degree == s.vertices - 1);
}

bool is_triangle_component(const PlayerGraph::ComponentStats& s) { return s.vertices == 3 && s.edges == 3; }

namespace {

bool p4_from(const PlayerGraph& g, Vertex at, VertexMask visited, int edges_so_far) {
  if (edges_so_far == 3) return true;
  VertexMask next = g.neighbours(at) & ~visited;
  while (next) {
    const Vertex w = std::countr_zero(next);
    next &= next - 1;
    if (p4_from(g, w, visited | vbit(w), edges_so_far + 1)) return true;
  }
  return false;
}

}  // namespace

bool contains_p4_search(const PlayerGraph& g) {
  for (Vertex s = 0; s < g.n(); ++s)
    if (g.degree(s) > 0 && p4_from(g, s, vbit(s), 0)) return true;
  return false;
}

bool contains_p4_structural(const PlayerGraph& g) {
  for (Vertex c : g.component_labels()) {
    const auto& s = g.component_stats(c);
    if (!is_star_component(s) && !is_triangle_component(s)) return true;
  }
  return false;
}

bool contains_cc_gt3(const PlayerGraph& g) {
  for (Vertex c : g.component_labels())
    if (g.component_stats(c).vertices > 3) return true;
  return false;
}

bool max_degree_ge3(const PlayerGraph& g) {
  for (Vertex v = 0; v < g.n(); ++v)
    if (g.degree(v) >= 3) return true;
  return false;
}

bool has_cycle(const PlayerGraph& g) {
  for (Vertex c : g.component_labels()) {
    const auto& s = g.component_stats(c);
    if (s.edges >= s.vertices) return true;
  }
  return false;
}

bool has_triangle(const PlayerGraph& g) {
  for (Vertex u = 0; u < g.n(); ++u) {
    VertexMask higher = g.neighbours(u) & ~((vbit(u) << 1) - 1);
    while (higher) {
      const Vertex v = std::countr_zero(higher);
      higher &= higher - 1;
      if (g.neighbours(u) & g.neighbours(v)) return true;
    }
  }
  return false;
}

bool contains(const PlayerGraph& g, Forbidden f) {
  switch (f) {
    case Forbidden::SubgraphP4: return contains_p4_structural(g);
    case Forbidden::ComponentGT3: return contains_cc_gt3(g);
    case Forbidden::MaxDegreeGE3: return max_degree_ge3(g);
    case Forbidden::AnyCycle: return has_cycle(g);
    case Forbidden::Triangle: return has_triangle(g);
  }
  return false;
}

bool loses_by(const PlayerGraph& g, EdgeId new_edge, Forbidden f) {
  const Edge e = edge_endpoints(new_edge, g.n());
  const Vertex a = e.u;
  const Vertex b = e.v;
  if (g.has_edge(a, b)) throw std::invalid_argument("loses_by: edge already in graph");
  if (contains(g, f)) return true;

  const bool joined = g.same_component(a, b);
  const auto& sa = g.component_stats(a);
  const auto& sb = g.component_stats(b);
  switch (f) {
    case Forbidden::ComponentGT3: return (joined ? sa.vertices : sa.vertices + sb.vertices) > 3;
    case Forbidden::MaxDegreeGE3: return g.degree(a) >= 2 || g.degree(b) >= 2;
    case Forbidden::AnyCycle: return joined;
    case Forbidden::Triangle: return (g.neighbours(a) & g.neighbours(b)) != 0;
    case Forbidden::SubgraphP4: {
      PlayerGraph::ComponentStats merged;
      merged.vertices = joined ? sa.vertices : sa.vertices + sb.vertices;
      merged.edges = (joined ? sa.edges : sa.edges + sb.edges) + 1;
      merged.max_degree = std::max({sa.max_degree, sb.max_degree, g.degree(a) + 1, g.degree(b) + 1});
      return !is_star_component(merged) && !is_triangle_component(merged);
    }
  }
  return false;
}

ComponentKind classify_component(const PlayerGraph& g, Vertex member) {
  using K = ComponentKind::Kind;
  ComponentKind out;
  const auto& s = g.component_stats(member);
  out.vertices = g.component_mask(member);
  if (s.vertices == 1) {
    out.kind = K::IsolatedVertex;
    out.center = member;
    return out;
  }
  if (is_triangle_component(s)) {
    out.kind = K::Triangle;
    return out;
  }
  if (!is_star_component(s)) {
    out.kind = K::Other;
    return out;
  }
  out.leaf_count = s.vertices - 1;
  if (s.vertices == 2) {
    out.kind = K::Edge;
    out.center = lowest(out.vertices);
    return out;
  }
  VertexMask m = out.vertices;
  while (m) {
    const Vertex v = std::countr_zero(m);
    m &= m - 1;
    if (g.degree(v) == s.vertices - 1) {
      out.center = v;
      break;
    }
  }
  out.kind = s.vertices == 3 ? K::PathOn3 : K::Star;
  return out;
}

std::vector<ComponentKind> classify_components(const PlayerGraph& g) {
  std::vector<ComponentKind> out;
  for (Vertex c : g.component_labels()) out.push_back(classify_component(g, c));
  return out;
}

namespace {

bool find_p4(const PlayerGraph& g, std::vector<Vertex>& path) {
  if (path.size() == 4) return true;
  VertexMask used = 0;
  for (Vertex v : path) used |= vbit(v);
  VertexMask next = g.neighbours(path.back()) & ~used;
  while (next) {
    const Vertex w = std::countr_zero(next);
    next &= next - 1;
    path.push_back(w);
    if (find_p4(g, path)) return true;
    path.pop_back();
  }
  return false;
}

std::vector<EdgeId> path_edges(const std::vector<Vertex>& path, int n) {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) out.push_back(edge_id_unchecked(path[i], path[i + 1], n));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<EdgeId> forbidden_witness(const PlayerGraph& g, Forbidden f) {
  const int n = g.n();
  switch (f) {
    case Forbidden::SubgraphP4:
      for (Vertex s = 0; s < n; ++s) {
        std::vector<Vertex> path{s};
        if (find_p4(g, path)) return path_edges(path, n);
      }
      return {};
    case Forbidden::MaxDegreeGE3:
      for (Vertex v = 0; v < n; ++v) {
        if (g.degree(v) < 3) continue;
        std::vector<EdgeId> out;
        VertexMask m = g.neighbours(v);
        for (int i = 0; i < 3; ++i) {
          const Vertex w = std::countr_zero(m);
          m &= m - 1;
          out.push_back(edge_id_unchecked(v, w, n));
        }
        std::sort(out.begin(), out.end());
        return out;
      }
      return {};
    case Forbidden::ComponentGT3:
      for (Vertex c : g.component_labels()) {
        if (g.component_stats(c).vertices <= 3) continue;
        // Grow a tree on four vertices from the label vertex.
        std::vector<EdgeId> out;
        VertexMask in = vbit(c);
        while (std::popcount(in) < 4) {
          bool grown = false;
          for (Vertex v = 0; v < n && !grown; ++v) {
            if (!(in & vbit(v))) continue;
            const VertexMask out_nb = g.neighbours(v) & ~in;
            if (out_nb) {
              const Vertex w = std::countr_zero(out_nb);
              out.push_back(edge_id_unchecked(v, w, n));
              in |= vbit(w);
              grown = true;
            }
          }
        }
        std::sort(out.begin(), out.end());
        return out;
      }
      return {};
    case Forbidden::Triangle:
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
          if (!g.has_edge(u, v)) continue;
          const VertexMask common = g.neighbours(u) & g.neighbours(v);
          if (common) {
            const Vertex w = std::countr_zero(common);
            std::vector<EdgeId> out{edge_id_unchecked(u, v, n), edge_id_unchecked(u, w, n),
                                    edge_id_unchecked(v, w, n)};
            std::sort(out.begin(), out.end());
            return out;
          }
        }
      }
      return {};
    case Forbidden::AnyCycle: {
      // DFS with parent pointers; the first back edge closes a cycle.
      std::vector<Vertex> parent(n, -1);
      std::vector<int> depth(n, -1);
      for (Vertex root = 0; root < n; ++root) {
        if (depth[root] >= 0 || g.degree(root) == 0) continue;
        std::vector<Vertex> stack{root};
        depth[root] = 0;
        while (!stack.empty()) {
          const Vertex v = stack.back();
          stack.pop_back();
          VertexMask nb = g.neighbours(v);
          while (nb) {
            const Vertex w = std::countr_zero(nb);
            nb &= nb - 1;
            if (w == parent[v]) continue;
            if (depth[w] < 0) {
              depth[w] = depth[v] + 1;
              parent[w] = v;
              stack.push_back(w);
              continue;
            }
            // Back/cross edge inside a tree: climb both ends to their meeting point.
            std::vector<EdgeId> out{edge_id_unchecked(v, w, n)};
            Vertex a = v;
            Vertex b = w;
            while (a != b) {
              if (depth[a] >= depth[b]) {
                out.push_back(edge_id_unchecked(a, parent[a], n));
                a = parent[a];
              } else {
                out.push_back(edge_id_unchecked(b, parent[b], n));
                b = parent[b];
              }
            }
            std::sort(out.begin(), out.end());
            return out;
          }
        }
      }
      return {};
    }
  }
  return {};
}

}  // namespace avoid
