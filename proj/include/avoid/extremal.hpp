#pragma once

#include <vector>

#include "avoid/edges.hpp"

namespace avoid {

struct ExtremalAnswer {
  int n = 0;
  int max_edges = 0;
  std::vector<EdgeId> witness;  // sorted
};

/// Largest P4-free graph on n vertices: triangles plus one star when 3 does not divide n.
ExtremalAnswer max_edges_p4_free(int n);

/// Largest graph on n vertices with all components on at most three vertices:
/// triangles plus an isolated vertex (n = 3k+1) or an isolated edge (n = 3k+2).
ExtremalAnswer max_edges_cc3_free(int n);

/// Exhaustive search over edge subsets of K_n for n <= 7. The witness is the
/// lexicographically least maximum edge set.
ExtremalAnswer brute_force_max_edges(int n, Forbidden f);

}  // namespace avoid
