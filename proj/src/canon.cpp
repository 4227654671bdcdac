#include "avoid/canon.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <string>

namespace avoid {

std::string CanonicalKey::bytes() const {
  std::string out(17, '\0');
  out[0] = static_cast<char>(n);
  for (int i = 0; i < 8; ++i) {
    out[1 + i] = static_cast<char>((red >> (8 * i)) & 0xFF);
    out[9 + i] = static_cast<char>((blue >> (8 * i)) & 0xFF);
  }
  return out;
}

namespace {

constexpr int kMax = kMaxCanonVertices;
using Ranks = std::array<std::uint8_t, kMax>;
using Sig = unsigned __int128;

struct EdgeTable {
  std::array<std::array<std::uint8_t, 2>, 64> ends{};
  std::array<std::array<std::uint8_t, kMax>, kMax> id{};
};

const EdgeTable& edge_table(int n) {
  static const auto tables = [] {
    std::array<EdgeTable, kMax + 1> t{};
    for (int m = 2; m <= kMax; ++m) {
      for (int u = 0; u < m; ++u)
        for (int v = u + 1; v < m; ++v) {
          const int e = edge_id_unchecked(u, v, m);
          t[m].ends[e] = {static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(v)};
          t[m].id[u][v] = t[m].id[v][u] = static_cast<std::uint8_t>(e);
        }
    }
    return t;
  }();
  return tables[n];
}

struct Canonicalizer {
  int n;
  std::uint64_t red;
  std::uint64_t blue;
  const EdgeTable& table;
  std::array<std::uint16_t, kMax> red_adj{};
  std::array<std::uint16_t, kMax> blue_adj{};

  bool have_first = false;
  Ranks first_lab{};
  CanonicalKey first_cert;
  Ranks best_lab{};
  CanonicalKey best_cert;
  std::vector<Permutation> generators;
  std::uint64_t leaves = 0;

  Canonicalizer(int n_, std::uint64_t r, std::uint64_t b) : n(n_), red(r), blue(b), table(edge_table(n_)) {
    for (std::uint64_t m = red; m; m &= m - 1) {
      const auto& e = table.ends[std::countr_zero(m)];
      red_adj[e[0]] |= static_cast<std::uint16_t>(1U << e[1]);
      red_adj[e[1]] |= static_cast<std::uint16_t>(1U << e[0]);
    }
    for (std::uint64_t m = blue; m; m &= m - 1) {
      const auto& e = table.ends[std::countr_zero(m)];
      blue_adj[e[0]] |= static_cast<std::uint16_t>(1U << e[1]);
      blue_adj[e[1]] |= static_cast<std::uint16_t>(1U << e[0]);
    }
  }

  int count_cells(const Ranks& rank) const {
    std::uint32_t seen = 0;
    for (int v = 0; v < n; ++v) seen |= 1U << rank[v];
    return std::popcount(seen);
  }

  // Refines to the coarsest equitable partition below `rank`, where a cell's
  // signature counts red and blue neighbours in every other cell.
  int refine(Ranks& rank) const {
    int cells = count_cells(rank);
    while (cells < n) {
      std::array<std::uint16_t, kMax> cell_mask{};
      std::array<int, kMax> starts{};
      int k = 0;
      {
        std::uint32_t seen = 0;
        for (int v = 0; v < n; ++v) {
          seen |= 1U << rank[v];
          cell_mask[rank[v]] |= static_cast<std::uint16_t>(1U << v);
        }
        for (std::uint32_t s = seen; s; s &= s - 1) starts[k++] = std::countr_zero(s);
      }
      std::array<Sig, kMax> sig{};
      for (int v = 0; v < n; ++v) {
        Sig s = static_cast<Sig>(rank[v]) << 100;
        for (int i = 0; i < k; ++i) {
          const std::uint16_t cm = cell_mask[starts[i]];
          const unsigned r = std::popcount(static_cast<unsigned>(red_adj[v] & cm));
          const unsigned b = std::popcount(static_cast<unsigned>(blue_adj[v] & cm));
          s |= static_cast<Sig>((r << 4) | b) << (8 * (k - 1 - i));
        }
        sig[v] = s;
      }
      std::array<int, kMax> order{};
      for (int v = 0; v < n; ++v) order[v] = v;
      for (int i = 1; i < n; ++i) {
        const int x = order[i];
        int j = i;
        while (j > 0 && sig[order[j - 1]] > sig[x]) {
          order[j] = order[j - 1];
          --j;
        }
        order[j] = x;
      }
      int new_cells = 0;
      for (int i = 0, start = 0; i < n; ++i) {
        if (i == 0 || sig[order[i]] != sig[order[i - 1]]) {
          start = i;
          ++new_cells;
        }
        rank[order[i]] = static_cast<std::uint8_t>(start);
      }
      if (new_cells == cells) break;
      cells = new_cells;
    }
    return cells;
  }

  CanonicalKey certificate(const Ranks& lab) const {
    CanonicalKey c;
    c.n = static_cast<std::uint8_t>(n);
    for (std::uint64_t m = red; m; m &= m - 1) {
      const auto& e = table.ends[std::countr_zero(m)];
      c.red |= std::uint64_t{1} << table.id[lab[e[0]]][lab[e[1]]];
    }
    for (std::uint64_t m = blue; m; m &= m - 1) {
      const auto& e = table.ends[std::countr_zero(m)];
      c.blue |= std::uint64_t{1} << table.id[lab[e[0]]][lab[e[1]]];
    }
    return c;
  }

  static bool less(const CanonicalKey& a, const CanonicalKey& b) {
    return a.red != b.red ? a.red < b.red : a.blue < b.blue;
  }

  void record_automorphism(const Ranks& target, const Ranks& lab) {
    // target maps G to C and so does lab; target^-1 o lab fixes G.
    Ranks inv{};
    for (int v = 0; v < n; ++v) inv[target[v]] = static_cast<std::uint8_t>(v);
    Permutation g(n);
    bool identity = true;
    for (int v = 0; v < n; ++v) {
      g[v] = inv[lab[v]];
      identity &= g[v] == v;
    }
    if (!identity) generators.push_back(std::move(g));
  }

  void leaf(const Ranks& lab) {
    ++leaves;
    const CanonicalKey cert = certificate(lab);
    if (!have_first) {
      have_first = true;
      first_lab = best_lab = lab;
      first_cert = best_cert = cert;
      return;
    }
    if (cert == first_cert) {
      record_automorphism(first_lab, lab);
    } else if (cert == best_cert) {
      record_automorphism(best_lab, lab);
    } else if (less(cert, best_cert)) {
      best_cert = cert;
      best_lab = lab;
    }
  }

  int find(std::array<int, kMax>& parent, int x) const {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  void search(Ranks rank, std::uint16_t fixed) {
    if (refine(rank) == n) {
      leaf(rank);
      return;
    }
    std::array<int, kMax> size{};
    for (int v = 0; v < n; ++v) ++size[rank[v]];
    int target = -1;
    for (int s = 0; s < n; ++s)
      if (size[s] > 1) {
        target = s;
        break;
      }
    std::uint16_t explored = 0;
    for (int v = 0; v < n; ++v) {
      if (rank[v] != target) continue;
      if (explored && equivalent_to_explored(v, explored, fixed)) continue;
      Ranks child = rank;
      for (int w = 0; w < n; ++w)
        if (rank[w] == target && w != v) child[w] = static_cast<std::uint8_t>(target + 1);
      search(child, static_cast<std::uint16_t>(fixed | (1U << v)));
      explored |= static_cast<std::uint16_t>(1U << v);
    }
  }

  // Whether some already-explored sibling lies in v's orbit under the
  // automorphisms found so far that fix every individualised vertex.
  bool equivalent_to_explored(int v, std::uint16_t explored, std::uint16_t fixed) {
    std::array<int, kMax> parent{};
    std::iota(parent.begin(), parent.begin() + n, 0);
    bool any = false;
    for (const auto& g : generators) {
      bool fixes = true;
      for (std::uint16_t f = fixed; f; f &= f - 1) {
        const int x = std::countr_zero(static_cast<unsigned>(f));
        if (g[x] != x) {
          fixes = false;
          break;
        }
      }
      if (!fixes) continue;
      any = true;
      for (int x = 0; x < n; ++x) {
        const int a = find(parent, x);
        const int b = find(parent, g[x]);
        if (a != b) parent[a] = b;
      }
    }
    if (!any) return false;
    const int root = find(parent, v);
    for (std::uint16_t e = explored; e; e &= e - 1)
      if (find(parent, std::countr_zero(static_cast<unsigned>(e))) == root) return true;
    return false;
  }
};

}  // namespace

CanonResult canonicalize(int n, std::uint64_t red, std::uint64_t blue) {
  if (n < 2 || n > kMaxCanonVertices) throw OutOfRange("canonical form supports 2 <= n <= 11");
  Canonicalizer c(n, red, blue);
  Ranks start{};
  // Initial cells by (red degree, blue degree) come from the first refinement round.
  c.search(start, 0);
  CanonResult out;
  out.key = c.best_cert;
  out.labelling.assign(c.best_lab.begin(), c.best_lab.begin() + n);
  out.generators = std::move(c.generators);
  out.leaves = c.leaves;
  return out;
}

CanonicalKey canonical_key(const Position& p) { return canonicalize(p.n(), p.red_mask(), p.blue_mask()).key; }

EdgeOrbits free_edge_orbits(int n, std::uint64_t red, std::uint64_t blue, std::span<const Permutation> generators) {
  const int m = edge_count(n);
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& g : generators) {
    for (EdgeId e = 0; e < m; ++e) {
      const Edge ed = edge_endpoints(e, n);
      const int a = find(e);
      const int b = find(edge_id_unchecked(g[ed.u], g[ed.v], n));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  const std::uint64_t taken = red | blue;
  EdgeOrbits out;
  std::vector<int> slot(m, -1);
  for (EdgeId e = 0; e < m; ++e) {
    if (taken >> e & 1U) continue;
    const int r = find(e);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.orbits.size());
      out.orbits.emplace_back();
    }
    out.orbits[slot[r]].push_back(e);
  }
  return out;
}

EdgeOrbits free_edge_orbits(const Position& p) {
  const auto c = canonicalize(p.n(), p.red_mask(), p.blue_mask());
  return free_edge_orbits(p.n(), p.red_mask(), p.blue_mask(), c.generators);
}

Position permuted(const Position& p, std::span<const Vertex> perm) {
  Position out(p.n());
  for (const Move& m : p.history()) {
    const Edge e = edge_endpoints(m.edge, p.n());
    out.play(edge_id(perm[e.u], perm[e.v], p.n()));
  }
  return out;
}

}  // namespace avoid
