#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "avoid/edges.hpp"

namespace avoid {

using VertexMask = std::uint64_t;

constexpr VertexMask vbit(Vertex v) { return VertexMask{1} << v; }

/// One player's graph on the vertex set [n]. The component partition is kept
/// up to date on every insertion (edges are never removed in these games).
class PlayerGraph {
 public:
  struct ComponentStats {
    int vertices = 1;
    int edges = 0;
    int max_degree = 0;
  };

  explicit PlayerGraph(int n);
  PlayerGraph(int n, std::span<const EdgeId> edges);

  int n() const { return n_; }
  int edge_count() const { return edge_count_; }

  /// Throws std::invalid_argument if the edge is already present.
  void add_edge(EdgeId e);
  void add_edge(Vertex u, Vertex v);

  bool has_edge(Vertex u, Vertex v) const { return (adj_[u] >> v) & 1U; }
  VertexMask neighbours(Vertex v) const { return adj_[v]; }
  int degree(Vertex v) const { return std::popcount(adj_[v]); }
  /// Vertices with at least one incident edge.
  VertexMask touched() const { return touched_; }

  /// Label (lowest-id member) of the component containing v.
  Vertex component(Vertex v) const { return comp_[v]; }
  VertexMask component_mask(Vertex v) const { return mask_[comp_[v]]; }
  const ComponentStats& component_stats(Vertex v) const { return stats_[comp_[v]]; }
  bool same_component(Vertex u, Vertex v) const { return comp_[u] == comp_[v]; }

  /// Component labels, ascending.
  std::vector<Vertex> component_labels() const;
  std::vector<EdgeId> edges() const;

 private:
  int n_;
  int edge_count_ = 0;
  VertexMask touched_ = 0;
  std::vector<VertexMask> adj_;
  std::vector<Vertex> comp_;
  std::vector<VertexMask> mask_;  // indexed by label
  std::vector<ComponentStats> stats_;  // indexed by label
};

bool is_star_component(const PlayerGraph::ComponentStats& s);
bool is_triangle_component(const PlayerGraph::ComponentStats& s);

/// Bounded DFS for a path on four distinct vertices.
bool contains_p4_search(const PlayerGraph& g);
/// Some component is neither a star nor a triangle.
bool contains_p4_structural(const PlayerGraph& g);
inline bool contains_p4(const PlayerGraph& g) { return contains_p4_search(g); }

bool contains_cc_gt3(const PlayerGraph& g);
bool max_degree_ge3(const PlayerGraph& g);
bool has_cycle(const PlayerGraph& g);
bool has_triangle(const PlayerGraph& g);

bool contains(const PlayerGraph& g, Forbidden f);

/// Whether g + new_edge contains the forbidden structure. Looks only at the
/// components joined by new_edge plus the cached component statistics.
bool loses_by(const PlayerGraph& g, EdgeId new_edge, Forbidden f);
inline bool loses_by(const PlayerGraph& g, EdgeId new_edge, const RuleSet& r) {
  return loses_by(g, new_edge, r.forbidden);
}

struct ComponentKind {
  enum class Kind : std::uint8_t { Star, Triangle, Edge, IsolatedVertex, PathOn3, Other };

  Kind kind = Kind::Other;
  /// Star centre (lower endpoint for an isolated edge, middle vertex of a P3,
  /// the vertex itself when isolated); -1 for triangles and Other.
  Vertex center = -1;
  int leaf_count = 0;
  VertexMask vertices = 0;

  /// Stars in the broad sense: isolated vertices and edges, P3s and K_{1,k}.
  bool is_star() const {
    return kind == Kind::Star || kind == Kind::Edge || kind == Kind::IsolatedVertex || kind == Kind::PathOn3;
  }
};

/// One entry per component (isolated vertices included), ordered by lowest member.
std::vector<ComponentKind> classify_components(const PlayerGraph& g);
ComponentKind classify_component(const PlayerGraph& g, Vertex member);

/// A small edge set in g exhibiting the forbidden structure, or empty.
std::vector<EdgeId> forbidden_witness(const PlayerGraph& g, Forbidden f);

}  // namespace avoid
