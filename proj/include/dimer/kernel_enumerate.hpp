#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/partitions.hpp"
#include "dimer/rational.hpp"
#include "dimer/ursell.hpp"

namespace dimer {

/// Brute-force cluster sums. The tile universe is every 2-subset of the
/// lattice; a tile carries v = f - f0 with f = multiplicity/(2d) on lattice
/// edges and 0 elsewhere. Ordered tuples are aggregated as multisets of
/// distinct tiles (the Ursell weight and the tile weights are
/// permutation-invariant), with the multinomial ordering count restored.
class BruteForceKernel {
 public:
  explicit BruteForceKernel(TorusLattice lat, long long budget = 100'000'000)
      : lat_(std::move(lat)), wa_(make_weights(lat_)), budget_(budget) {
    n_ = lat_.vertex_count();
  }

  /// J-bar_s via the full (unreduced) tuple sum: J_s / (s! N).
  Rat full_sum(int s) {
    Rat total = run(s, /*anchored=*/false);
    return total / (Rat(factorial(static_cast<unsigned long>(s))) * Rat(Int(n_)));
  }

  /// J-bar_s via the translation-reduced sum over tuples whose union
  /// contains the origin, each weighted by 1/|union|. Equals full_sum on a
  /// torus; the identity is exercised in the tests.
  Rat anchored_sum(int s) {
    Rat total = run(s, /*anchored=*/true);
    return total / Rat(factorial(static_cast<unsigned long>(s)));
  }

  long long visited() const { return visited_; }

 private:
  using TileId = std::int64_t;

  TileId tile_id(Vertex a, Vertex b) const { return a * n_ + b; }  // a < b
  Vertex tile_lo(TileId t) const { return t / n_; }
  Vertex tile_hi(TileId t) const { return t % n_; }

  Rat tile_v(TileId t) const {
    int mult = lat_.edge_multiplicity(tile_lo(t), tile_hi(t));
    Rat f = mult > 0 ? Rat(mult) * wa_.dimer_value : Rat(0);
    return f - wa_.f0;
  }

  void charge(long long amount) {
    visited_ += amount;
    if (visited_ > budget_)
      throw BudgetError("cluster enumeration exceeded the tuple budget");
  }

  Rat run(int s, bool anchored) {
    if (s < 1) throw std::invalid_argument("cluster order must be >= 1");
    if (s > 5) throw BudgetError("cluster order above 5 is not enumerable here");
    s_ = s;
    anchored_ = anchored;
    acc_ = 0;
    forbidden_.assign(static_cast<size_t>(n_) * n_, 0);
    set_.clear();
    in_union_.assign(static_cast<size_t>(n_), 0);
    union_list_.clear();

    std::vector<TileId> starts;
    if (anchored) {
      for (Vertex b = 1; b < n_; ++b) starts.push_back(tile_id(0, b));
    } else {
      for (Vertex a = 0; a < n_; ++a)
        for (Vertex b = a + 1; b < n_; ++b) starts.push_back(tile_id(a, b));
    }
    for (TileId t : starts) {
      push_tile(t);
      grow();
      pop_tile(t);
      forbidden_[t] = 1;  // later sets may not reuse earlier start tiles
    }
    for (TileId t : starts) forbidden_[t] = 0;
    return acc_;
  }

  void push_tile(TileId t) {
    set_.push_back(t);
    for (Vertex x : {tile_lo(t), tile_hi(t)}) {
      if (in_union_[x]++ == 0) union_list_.push_back(x);
    }
  }

  void pop_tile(TileId t) {
    set_.pop_back();
    // reverse of push order so union_list_ stays a stack
    for (Vertex x : {tile_hi(t), tile_lo(t)}) {
      if (--in_union_[x] == 0) union_list_.pop_back();
    }
  }

  void grow() {
    visit_current_set();
    if (static_cast<int>(set_.size()) == s_) return;

    // every tile sharing a vertex with the current union, id-ascending
    std::vector<TileId> candidates;
    for (Vertex x : union_list_) {
      for (Vertex y = 0; y < n_; ++y) {
        if (y == x) continue;
        TileId t = x < y ? tile_id(x, y) : tile_id(y, x);
        if (forbidden_[t]) continue;
        candidates.push_back(t);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [&](TileId t) {
                                      return std::find(set_.begin(), set_.end(), t) != set_.end();
                                    }),
                     candidates.end());
    charge(static_cast<long long>(candidates.size()));

    std::vector<TileId> marked;
    for (TileId t : candidates) {
      push_tile(t);
      grow();
      pop_tile(t);
      forbidden_[t] = 1;  // exclude from later siblings and their subtrees
      marked.push_back(t);
    }
    for (TileId t : marked) forbidden_[t] = 0;
  }

  void visit_current_set() {
    int m = static_cast<int>(set_.size());
    if (m > s_) return;
    // tile-intersection structure of the distinct tiles
    std::vector<std::vector<bool>> meets(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        bool inter = tile_lo(set_[i]) == tile_lo(set_[j]) || tile_lo(set_[i]) == tile_hi(set_[j]) ||
                     tile_hi(set_[i]) == tile_lo(set_[j]) || tile_hi(set_[i]) == tile_hi(set_[j]);
        meets[i][j] = meets[j][i] = inter;
      }
    std::vector<Rat> v(m);
    for (int i = 0; i < m; ++i) v[i] = tile_v(set_[i]);

    Rat union_size(static_cast<long>(union_list_.size()));
    for (const auto& comp : positive_compositions(s_, m)) {
      charge(1);
      // blown-up overlap graph: comp[i] copies of tile i
      OverlapGraph g(s_);
      std::vector<int> owner(s_);
      {
        int idx = 0;
        for (int i = 0; i < m; ++i)
          for (int k = 0; k < comp[i]; ++k) owner[idx++] = i;
      }
      for (int a = 0; a < s_; ++a)
        for (int b = a + 1; b < s_; ++b)
          if (owner[a] == owner[b] || meets[owner[a]][owner[b]]) g.add_edge(a, b);
      long long psi = ursell(g);
      if (psi == 0) continue;

      Int orderings = factorial(static_cast<unsigned long>(s_));
      for (int i = 0; i < m; ++i)
        mpz_divexact(orderings.get_mpz_t(), orderings.get_mpz_t(),
                     factorial(static_cast<unsigned long>(comp[i])).get_mpz_t());

      Rat weight(orderings);
      weight *= static_cast<long>(psi);
      for (int i = 0; i < m; ++i) weight *= rat_pow(v[i], static_cast<unsigned long>(comp[i]));
      if (anchored_) weight /= union_size;
      acc_ += weight;
    }
  }

  TorusLattice lat_;
  WeightAssignment wa_;
  long long budget_;
  long long visited_ = 0;
  std::int64_t n_ = 0;
  int s_ = 0;
  bool anchored_ = false;
  Rat acc_;
  std::vector<char> forbidden_;
  std::vector<TileId> set_;
  std::vector<int> in_union_;
  std::vector<Vertex> union_list_;
};

/// The six Appendix terms of the s = 2 kernel at finite N, by direct
/// classification of ordered intersecting tile pairs. A,B,C collect pairs
/// with equal tiles; D,E,F pairs sharing one vertex; the second index splits
/// f*f', f0*f0 and the cross terms.
struct AppendixTerms {
  Rat A, B, C, D, E, F;

  Rat total() const { return A + B + C + D + E + F; }
};

inline AppendixTerms appendix_bruteforce(const TorusLattice& lat) {
  std::int64_t n = lat.vertex_count();
  WeightAssignment wa = make_weights(lat);
  auto f_of = [&](Vertex a, Vertex b) {
    int mult = lat.edge_multiplicity(a, b);
    return mult > 0 ? Rat(mult) * wa.dimer_value : Rat(0);
  };
  Rat pref = make_rat(-1, 2) / Rat(Int(n));
  AppendixTerms t{};
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) {
      Rat f1 = f_of(a, b);
      // ordered partners sharing at least one vertex, deduplicated
      std::vector<std::pair<Vertex, Vertex>> partners;
      for (Vertex x : {a, b})
        for (Vertex y = 0; y < n; ++y) {
          if (y == x) continue;
          partners.emplace_back(std::min(x, y), std::max(x, y));
        }
      std::sort(partners.begin(), partners.end());
      partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
      for (auto [c, d] : partners) {
        Rat f2 = f_of(c, d);
        bool equal = (c == a && d == b);
        Rat ff = pref * f1 * f2;
        Rat f0f0 = pref * wa.f0 * wa.f0;
        Rat cross = -pref * wa.f0 * (f1 + f2);
        if (equal) {
          t.A += ff;
          t.B += f0f0;
          t.C += cross;
        } else {
          t.D += ff;
          t.E += f0f0;
          t.F += cross;
        }
      }
    }
  return t;
}

}  // namespace dimer
