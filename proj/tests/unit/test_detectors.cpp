#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "avoid/detectors.hpp"

using namespace avoid;

namespace {

PlayerGraph graph(int n, std::initializer_list<std::pair<int, int>> edges) {
  PlayerGraph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

PlayerGraph from_mask(int n, std::uint64_t mask) {
  PlayerGraph g(n);
  for (EdgeId e = 0; e < edge_count(n); ++e)
    if (mask >> e & 1U) g.add_edge(e);
  return g;
}

// Independent connected-component sizes by flood fill over the adjacency masks.
std::vector<int> component_sizes(const PlayerGraph& g) {
  std::vector<int> sizes;
  VertexMask seen = 0;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (seen & vbit(s)) continue;
    VertexMask frontier = vbit(s), comp = vbit(s);
    while (frontier) {
      const Vertex v = std::countr_zero(frontier);
      frontier &= frontier - 1;
      const VertexMask fresh = g.neighbours(v) & ~comp;
      comp |= fresh;
      frontier |= fresh;
    }
    seen |= comp;
    sizes.push_back(std::popcount(comp));
  }
  return sizes;
}

bool brute_contains(const PlayerGraph& g, Forbidden f) {
  const int n = g.n();
  switch (f) {
    case Forbidden::SubgraphP4: return contains_p4_search(g);
    case Forbidden::ComponentGT3:
      for (int s : component_sizes(g))
        if (s > 3) return true;
      return false;
    case Forbidden::MaxDegreeGE3: return max_degree_ge3(g);
    case Forbidden::AnyCycle: {
      // Forest iff |E| = n - #components.
      return g.edge_count() != n - static_cast<int>(component_sizes(g).size());
    }
    case Forbidden::Triangle:
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
          for (int c = b + 1; c < n; ++c)
            if (g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c)) return true;
      return false;
  }
  return false;
}

constexpr Forbidden kAll[] = {Forbidden::SubgraphP4, Forbidden::ComponentGT3, Forbidden::MaxDegreeGE3,
                              Forbidden::AnyCycle, Forbidden::Triangle};

}  // namespace

TEST_CASE("contains_p4 examples") {
  CHECK(contains_p4(graph(5, {{0, 1}, {1, 2}, {2, 3}})));
  CHECK_FALSE(contains_p4(graph(5, {{0, 1}, {0, 2}, {0, 3}})));
  CHECK_FALSE(contains_p4(graph(5, {{0, 1}, {1, 2}, {0, 2}})));
}

TEST_CASE("contains_cc_gt3 examples") {
  CHECK(contains_cc_gt3(graph(5, {{0, 1}, {0, 2}, {0, 3}})));
  CHECK_FALSE(contains_cc_gt3(graph(5, {{0, 1}, {1, 2}, {0, 2}})));
  CHECK_FALSE(contains_cc_gt3(graph(5, {{0, 1}, {2, 3}})));
}

TEST_CASE("degree, cycle and triangle examples") {
  CHECK_FALSE(max_degree_ge3(graph(5, {{0, 1}, {1, 2}, {2, 3}})));
  const auto tri = graph(5, {{0, 1}, {1, 2}, {0, 2}});
  CHECK(has_cycle(tri));
  CHECK(has_triangle(tri));
  auto tree = graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  CHECK_FALSE(has_cycle(tree));
  tree.add_edge(0, 4);
  CHECK(has_cycle(tree));
}

TEST_CASE("loses_by examples") {
  const auto p3 = graph(5, {{0, 1}, {1, 2}});
  CHECK(loses_by(p3, edge_id(2, 3, 5), Forbidden::SubgraphP4));
  CHECK_FALSE(loses_by(p3, edge_id(0, 2, 5), Forbidden::SubgraphP4));
  const PlayerGraph empty(5);
  for (Forbidden f : kAll)
    for (EdgeId e = 0; e < edge_count(5); ++e) CHECK_FALSE(loses_by(empty, e, f));
  CHECK_THROWS_AS(loses_by(p3, edge_id(0, 1, 5), Forbidden::SubgraphP4), std::invalid_argument);
}

TEST_CASE("classify_components examples") {
  using K = ComponentKind::Kind;
  const auto star = classify_components(graph(6, {{0, 1}, {0, 2}, {0, 3}}));
  REQUIRE(star.size() == 3);
  CHECK(star[0].kind == K::Star);
  CHECK(star[0].center == 0);
  CHECK(star[0].leaf_count == 3);
  CHECK(star[1].kind == K::IsolatedVertex);
  CHECK(star[2].kind == K::IsolatedVertex);

  const auto mixed = classify_components(graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}}));
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].kind == K::Triangle);
  CHECK(mixed[1].kind == K::Edge);
  CHECK(mixed[1].center == 3);
  CHECK(mixed[2].kind == K::IsolatedVertex);

  const auto path = classify_components(graph(4, {{0, 1}, {1, 2}, {2, 3}}));
  REQUIRE(path.size() == 1);
  CHECK(path[0].kind == K::Other);

  const auto p3 = classify_components(graph(4, {{2, 1}, {1, 3}}));
  CHECK(p3[1].kind == K::PathOn3);
  CHECK(p3[1].center == 1);
}

TEST_CASE("P4 detectors agree exhaustively on n <= 5 and on random graphs up to n = 7") {
  for (int n = 1; n <= 5; ++n) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edge_count(n)); ++mask) {
      const auto g = from_mask(n, mask);
      CHECK(contains_p4_search(g) == contains_p4_structural(g));
    }
  }
  std::mt19937_64 rng(42);
  int disagreements = 0;
  for (int i = 0; i < 100000; ++i) {
    const int n = 6 + static_cast<int>(rng() % 2);
    // Sparse and dense samples alike.
    const int density = static_cast<int>(rng() % 4);
    std::uint64_t mask = rng();
    for (int d = 0; d < density; ++d) mask &= rng();
    mask &= (std::uint64_t{1} << edge_count(n)) - 1;
    const auto g = from_mask(n, mask);
    if (contains_p4_search(g) != contains_p4_structural(g)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("incremental loss detection matches batch recomputation") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 3000; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    std::vector<EdgeId> order(edge_count(n));
    for (EdgeId e = 0; e < edge_count(n); ++e) order[e] = e;
    std::shuffle(order.begin(), order.end(), rng);
    PlayerGraph g(n);
    std::vector<EdgeId> so_far;
    for (EdgeId e : order) {
      so_far.push_back(e);
      const PlayerGraph batch(n, so_far);
      for (Forbidden f : kAll) CHECK(loses_by(g, e, f) == brute_contains(batch, f));
      g.add_edge(e);
      for (Forbidden f : kAll) CHECK(contains(g, f) == brute_contains(g, f));
    }
  }
}

TEST_CASE("P4-free graphs have n minus #star-components edges") {
  auto check = [](const PlayerGraph& g) {
    int stars = 0;
    for (const auto& c : classify_components(g)) {
      CHECK(c.kind != ComponentKind::Kind::Other);
      if (c.is_star()) ++stars;
    }
    CHECK(g.edge_count() == g.n() - stars);
  };
  for (int n = 1; n <= 5; ++n)
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << edge_count(n)); ++mask) {
      const auto g = from_mask(n, mask);
      if (!contains_p4_search(g)) check(g);
    }
  // Random P4-free graphs up to n = 8 grown by rejection.
  std::mt19937 rng(99);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 6 + static_cast<int>(rng() % 3);
    PlayerGraph g(n);
    for (int step = 0; step < 40; ++step) {
      const EdgeId e = static_cast<EdgeId>(rng() % edge_count(n));
      const Edge ed = edge_endpoints(e, n);
      if (g.has_edge(ed.u, ed.v) || loses_by(g, e, Forbidden::SubgraphP4)) continue;
      g.add_edge(e);
    }
    check(g);
  }
}

TEST_CASE("forbidden witnesses are genuine and only exist for violating graphs") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20000; ++i) {
    const int n = 4 + static_cast<int>(rng() % 4);
    std::uint64_t mask = rng() & rng() & ((std::uint64_t{1} << edge_count(n)) - 1);
    const auto g = from_mask(n, mask);
    for (Forbidden f : kAll) {
      const auto w = forbidden_witness(g, f);
      CHECK(w.empty() == !contains(g, f));
      for (EdgeId e : w) CHECK((mask >> e & 1U));
      if (!w.empty()) CHECK(contains(PlayerGraph(n, w), f));
    }
  }
}
