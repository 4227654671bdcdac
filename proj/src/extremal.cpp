#include "avoid/extremal.hpp"

#include <algorithm>
#include <string>

#include "avoid/detectors.hpp"

namespace avoid {

namespace {

void add_triangles(int n, int count, std::vector<EdgeId>& out) {
  for (int t = 0; t < count; ++t) {
    const Vertex a = 3 * t;
    out.push_back(edge_id_unchecked(a, a + 1, n));
    out.push_back(edge_id_unchecked(a, a + 2, n));
    out.push_back(edge_id_unchecked(a + 1, a + 2, n));
  }
}

void check_n(int n) {
  if (n < 1 || n > kMaxVertices) throw OutOfRange("vertex count out of range: " + std::to_string(n));
}

}  // namespace

ExtremalAnswer max_edges_p4_free(int n) {
  check_n(n);
  ExtremalAnswer a{n, n % 3 == 0 ? n : n - 1, {}};
  const int triangles = n / 3;
  add_triangles(n, triangles, a.witness);
  // Leftover vertices form one star centred at the first of them.
  const Vertex center = 3 * triangles;
  for (Vertex leaf = center + 1; leaf < n; ++leaf) a.witness.push_back(edge_id_unchecked(center, leaf, n));
  std::sort(a.witness.begin(), a.witness.end());
  return a;
}

ExtremalAnswer max_edges_cc3_free(int n) {
  check_n(n);
  ExtremalAnswer a{n, n % 3 == 0 ? n : n - 1, {}};
  const int triangles = n / 3;
  add_triangles(n, triangles, a.witness);
  if (n % 3 == 2) a.witness.push_back(edge_id_unchecked(n - 2, n - 1, n));
  std::sort(a.witness.begin(), a.witness.end());
  return a;
}

namespace {

struct Search {
  int n;
  int m;
  Forbidden f;
  int best = -1;
  std::vector<EdgeId> chosen;
  std::vector<EdgeId> best_set;

  // Include-first DFS visits equal-size sets in lexicographic order of their
  // sorted edge lists, so the first maximum found is the least one.
  void run(EdgeId next, PlayerGraph& g) {
    const int here = static_cast<int>(chosen.size());
    if (here > best) {
      best = here;
      best_set = chosen;
    }
    if (next == m || here + (m - next) <= best) return;
    if (!loses_by(g, next, f)) {
      PlayerGraph with = g;
      with.add_edge(next);
      chosen.push_back(next);
      run(next + 1, with);
      chosen.pop_back();
    }
    run(next + 1, g);
  }
};

}  // namespace

ExtremalAnswer brute_force_max_edges(int n, Forbidden f) {
  check_n(n);
  if (n > 7) throw BudgetExceeded("brute force limited to n <= 7");
  if (n == 1) return {1, 0, {}};
  Search s{n, edge_count(n), f};
  PlayerGraph g(n);
  s.run(0, g);
  return {n, s.best, s.best_set};
}

}  // namespace avoid
