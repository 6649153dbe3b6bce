#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dimer/errors.hpp"

namespace dimer {

/// Overlap pattern of a cluster tuple: a simple loop-free graph on at most
/// `kMaxVertices` vertices with adjacency stored as per-vertex bitmasks.
struct OverlapGraph {
  static constexpr int kMaxVertices = 8;

  int n = 0;
  std::array<std::uint16_t, kMaxVertices> adj{};

  explicit OverlapGraph(int vertices = 0) : n(vertices) {
    if (vertices < 0 || vertices > kMaxVertices)
      throw std::invalid_argument("overlap graph size out of range");
  }

  void add_edge(int i, int j) {
    if (i == j) throw std::invalid_argument("overlap graph is loop-free");
    adj[i] |= std::uint16_t(1) << j;
    adj[j] |= std::uint16_t(1) << i;
  }

  bool has_edge(int i, int j) const { return adj[i] & (std::uint16_t(1) << j); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (has_edge(i, j)) out.emplace_back(i, j);
    return out;
  }

  bool connected() const {
    if (n == 0) return false;
    std::uint16_t seen = 1;
    std::uint16_t frontier = 1;
    while (frontier) {
      std::uint16_t next = 0;
      for (int i = 0; i < n; ++i)
        if (frontier & (std::uint16_t(1) << i)) next |= adj[i];
      frontier = next & ~seen;
      seen |= next;
    }
    return seen == (std::uint16_t(1) << n) - 1;
  }

  /// Packed key: vertex count plus upper-triangle adjacency bits.
  std::uint64_t key() const {
    std::uint64_t k = static_cast<std::uint64_t>(n);
    int bit = 4;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++bit)
        if (has_edge(i, j)) k |= std::uint64_t(1) << bit;
    return k;
  }
};

namespace detail {

inline bool spanning_connected(int n, const std::vector<std::pair<int, int>>& edges,
                               std::uint32_t mask) {
  std::array<int, OverlapGraph::kMaxVertices> parent;
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int components = n;
  for (size_t e = 0; e < edges.size(); ++e) {
    if (!(mask & (std::uint32_t(1) << e))) continue;
    int a = find(edges[e].first), b = find(edges[e].second);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace detail

/// Ursell factor by direct enumeration: sum over spanning connected edge
/// subsets of (-1)^{#edges}. 1 on a single vertex, 0 on disconnected input.
inline long long ursell_edge_subsets(const OverlapGraph& g) {
  if (g.n == 0) throw std::invalid_argument("empty overlap graph");
  if (g.n > 6) throw BudgetError("ursell edge-subset enumeration is bounded at 6 vertices");
  if (g.n == 1) return 1;
  auto edges = g.edges();
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << edges.size()); ++mask) {
    if (!detail::spanning_connected(g.n, edges, mask)) continue;
    total += (__builtin_popcount(mask) % 2 == 0) ? 1 : -1;
  }
  return total;
}

/// Independent route to the same number: inclusion-exclusion over the
/// vertex set spanned by the component of a fixed root, using
/// sum_{A subset of E(S)} (-1)^{|A|} = [E(S) empty].
inline long long ursell_mobius(const OverlapGraph& g) {
  if (g.n == 0) throw std::invalid_argument("empty overlap graph");
  if (g.n > 8) throw BudgetError("ursell subset recursion is bounded at 8 vertices");
  int n = g.n;
  auto edges_empty = [&](std::uint16_t subset) {
    for (int i = 0; i < n; ++i)
      if (subset & (std::uint16_t(1) << i))
        if (g.adj[i] & subset) return false;
    return true;
  };
  std::vector<long long> u(std::size_t(1) << n, 0);
  std::vector<bool> known(std::size_t(1) << n, false);
  std::function<long long(std::uint16_t)> value = [&](std::uint16_t S) -> long long {
    if (known[S]) return u[S];
    known[S] = true;
    int size = __builtin_popcount(S);
    if (size == 1) return u[S] = 1;
    if (edges_empty(S)) return u[S] = 0;  // disconnected for size >= 2
    int root = __builtin_ctz(S);
    std::uint16_t root_bit = std::uint16_t(1) << root;
    std::uint16_t others = S & ~root_bit;
    long long acc = 0;
    // proper subsets R of S containing the root with E(S \ R) empty
    for (std::uint16_t sub = others; sub > 0; sub = (sub - 1) & others) {
      std::uint16_t R = static_cast<std::uint16_t>(root_bit | (others & ~sub));
      if (!edges_empty(sub)) continue;
      acc += value(R);
    }
    return u[S] = -acc;
  };
  return value(static_cast<std::uint16_t>((std::size_t(1) << n) - 1));
}

/// Cached Ursell factor. The two independent routes above are reconciled in
/// the test suite; this entry point uses the edge-subset definition.
inline long long ursell(const OverlapGraph& g) {
  static thread_local std::unordered_map<std::uint64_t, long long> cache;
  std::uint64_t k = g.key();
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  long long value = ursell_edge_subsets(g);
  cache.emplace(k, value);
  return value;
}

}  // namespace dimer
