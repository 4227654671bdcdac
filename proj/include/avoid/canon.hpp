#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "avoid/board.hpp"

namespace avoid {

/// Boards up to this size fit their edge set in one 64-bit word.
inline constexpr int kMaxCanonVertices = 11;

/// Isomorphism-class identifier of a two-coloured K_n. Colours are not
/// interchangeable. `red`/`blue` are the edge masks under the canonical labelling.
struct CanonicalKey {
  std::uint8_t n = 0;
  std::uint64_t red = 0;
  std::uint64_t blue = 0;

  std::string bytes() const;
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    std::uint64_t h = k.red * 0x9E3779B97F4A7C15ULL;
    h ^= (k.blue + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2)) * 0xBF58476D1CE4E5B9ULL;
    h ^= k.n;
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

using Permutation = std::vector<Vertex>;

struct CanonResult {
  CanonicalKey key;
  /// labelling[v] = canonical label of vertex v.
  Permutation labelling;
  /// Automorphisms found during the search; they generate a subgroup of Aut
  /// (in practice all of it).
  std::vector<Permutation> generators;
  std::uint64_t leaves = 0;
};

/// Individualisation-refinement over colour-degree equitable partitions, with
/// automorphism pruning of the search tree. Exact: never a hash.
CanonResult canonicalize(int n, std::uint64_t red, std::uint64_t blue);
CanonicalKey canonical_key(const Position& p);

/// Partition of the free edges into classes of a subgroup of the position's
/// automorphism group: edges in one class give isomorphic successors.
struct EdgeOrbits {
  std::vector<std::vector<EdgeId>> orbits;  // each ascending, ordered by smallest member
};

EdgeOrbits free_edge_orbits(int n, std::uint64_t red, std::uint64_t blue, std::span<const Permutation> generators);
EdgeOrbits free_edge_orbits(const Position& p);

/// Relabels every vertex v to perm[v], replaying the history in order.
Position permuted(const Position& p, std::span<const Vertex> perm);

}  // namespace avoid
