#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/rational.hpp"

namespace dimer {

/// Number of ways to partition an N-set into blocks of size n:
/// N! / ((N/n)! (n!)^{N/n}).
inline Int count_subset_tilings(std::int64_t N, unsigned n) {
  if (n < 2) throw std::invalid_argument("block size must be >= 2");
  if (N < static_cast<std::int64_t>(n) || N % n != 0)
    throw std::invalid_argument("block size must divide the set size");
  unsigned long blocks = static_cast<unsigned long>(N / n);
  Int den = factorial(blocks) * int_pow(factorial(n), blocks);
  Int num = factorial(static_cast<unsigned long>(N));
  Int q;
  mpz_divexact(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

struct ZeroOrder {
  Rat Z0;
  Real p0_hat;  // ln(Z0)/N
};

/// Z0 and its per-vertex log pressure. p0_hat tends to (1-n)/n as N grows.
inline ZeroOrder z0_and_p0(std::int64_t N, unsigned n) {
  Int tilings = count_subset_tilings(N, n);
  Rat z0 = Rat(tilings) * rat_pow(f0_value(N, n), static_cast<unsigned long>(N / n));
  ZeroOrder out;
  out.Z0 = z0;
  out.p0_hat = log(to_real(z0)) / to_real(Int(N));
  return out;
}

namespace detail {

struct MatchAdjacency {
  // per vertex: (neighbor, parallel edge count), neighbor-deduplicated
  std::vector<std::vector<std::pair<int, int>>> adj;
};

inline MatchAdjacency matching_adjacency(const TorusLattice& lat) {
  MatchAdjacency m;
  int n = static_cast<int>(lat.vertex_count());
  m.adj.resize(n);
  for (const LocatedTile& t : enumerate_dimers(lat)) {
    int a = static_cast<int>(t.v[0]), b = static_cast<int>(t.v[1]);
    m.adj[a].emplace_back(b, t.multiplicity);
    m.adj[b].emplace_back(a, t.multiplicity);
  }
  return m;
}

inline Int count_matchings_rec(const MatchAdjacency& m, int n, std::uint64_t covered) {
  int v = -1;
  for (int i = 0; i < n; ++i) {
    if (!(covered & (std::uint64_t(1) << i))) {
      v = i;
      break;
    }
  }
  if (v < 0) return Int(1);
  Int total = 0;
  for (auto [w, mult] : m.adj[v]) {
    if (covered & (std::uint64_t(1) << w)) continue;
    total += Int(mult) * count_matchings_rec(
                             m, n, covered | (std::uint64_t(1) << v) | (std::uint64_t(1) << w));
  }
  return total;
}

}  // namespace detail

/// Exact perfect-matching count of the torus multigraph: each parallel edge
/// counts as a distinct matching when used. Recursion pairs the
/// lowest-indexed uncovered vertex first.
inline Int count_perfect_matchings(const TorusLattice& lat, int size_bound = 36) {
  std::int64_t N = lat.vertex_count();
  if (N % 2 != 0) throw std::invalid_argument("odd vertex count has no perfect matching");
  if (N > size_bound || N > 64)
    throw BudgetError("lattice exceeds the brute-force size bound");
  auto adj = detail::matching_adjacency(lat);
  return detail::count_matchings_rec(adj, static_cast<int>(N), 0);
}

struct PartitionFunctionResult {
  Int matchings;
  Rat Z;          // matchings * (1/(2d))^{N/2}
  Real lambda_N;  // (1/2)ln(2d) + ln(Z)/N = ln(matchings)/N
};

/// Z under the dimer weight f = 1/(2d) and the finite-volume growth rate.
/// The identity (2d)^{N/2} Z = matching count is asserted in exact
/// arithmetic before any logarithm is taken.
inline PartitionFunctionResult partition_function(const TorusLattice& lat,
                                                  int size_bound = 36) {
  PartitionFunctionResult out;
  out.matchings = count_perfect_matchings(lat, size_bound);
  std::int64_t N = lat.vertex_count();
  Rat slot_weight = make_rat(1, 2L * lat.dim());
  out.Z = Rat(out.matchings) * rat_pow(slot_weight, static_cast<unsigned long>(N / 2));
  Rat check = out.Z * rat_pow(make_rat(2L * lat.dim(), 1), static_cast<unsigned long>(N / 2));
  if (check != Rat(out.matchings))
    throw ConsistencyError("(2d)^{N/2} Z does not reproduce the matching count");
  if (out.matchings > 0)
    out.lambda_N = log(to_real(out.matchings)) / to_real(Int(N));
  else
    out.lambda_N = Real(0);
  return out;
}

/// beta(N,i) for tiles of size 2: the constant-weight completion factor of
/// the degree-i term of Z, normalized by Z0. Closed form
/// f0^{N/2-i} * T(N-2i) / Z0 with T the subset-tiling count.
inline Rat beta_exact(std::int64_t N, std::int64_t i) {
  if (N < 2 || N % 2 != 0) throw std::invalid_argument("beta needs even N >= 2");
  if (i < 0 || 2 * i > N) throw std::invalid_argument("beta needs 0 <= 2i <= N");
  Rat f0 = f0_value(N, 2);
  Rat z0 = Rat(count_subset_tilings(N, 2)) * rat_pow(f0, static_cast<unsigned long>(N / 2));
  Rat completions = (N - 2 * i >= 2)
                        ? Rat(count_subset_tilings(N - 2 * i, 2))
                        : Rat(1);  // nothing left to tile
  return rat_pow(f0, static_cast<unsigned long>(N / 2 - i)) * completions / z0;
}

/// g(j) = ((1-2j)/2) ln(1-2j) + j on [0, 1/2], continuously extended by
/// g(1/2) = 1/2. Governs beta(N, jN) ~ exp(N g(j)).
inline Real beta_asym(const Rat& j) {
  if (j < 0 || j > make_rat(1, 2))
    throw std::invalid_argument("beta_asym needs 0 <= j <= 1/2");
  if (j == make_rat(1, 2)) return to_real(make_rat(1, 2));
  Rat one_minus = Rat(1) - Rat(2) * j;
  return to_real(one_minus) / 2 * log(to_real(one_minus)) + to_real(j);
}

}  // namespace dimer
