#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <unordered_map>
#include <vector>

#include "dimer/errors.hpp"
#include "dimer/interpolate.hpp"
#include "dimer/partitions.hpp"
#include "dimer/rational.hpp"
#include "dimer/ursell.hpp"

namespace dimer {

namespace detail {

/// Homomorphism count of a small connected graph into Z^d with a fixed
/// root image: vertices map to lattice points, edges to unit steps,
/// coincidences allowed. Independent of the root choice.
class RootedHomCounter {
 public:
  explicit RootedHomCounter(int d) : d_(d) {}

  long long count(int n, std::uint32_t edge_mask) {
    std::uint64_t key = (static_cast<std::uint64_t>(n) << 32) | edge_mask;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    adj_.assign(n, 0);
    int bit = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++bit)
        if (edge_mask & (std::uint32_t(1) << bit)) {
          adj_[i] |= 1u << j;
          adj_[j] |= 1u << i;
        }
    // BFS order from vertex 0; the caller guarantees connectivity
    order_.clear();
    order_.push_back(0);
    std::uint32_t seen = 1;
    for (size_t head = 0; head < order_.size(); ++head) {
      std::uint32_t fresh = adj_[order_[head]] & ~seen;
      while (fresh) {
        int v = __builtin_ctz(fresh);
        fresh &= fresh - 1;
        seen |= 1u << v;
        order_.push_back(v);
      }
    }
    pos_.assign(n, {});
    pos_[0].assign(d_, 0);  // order_[0] at the origin
    long long result = place(1);
    cache_.emplace(key, result);
    return result;
  }

 private:
  long long place(size_t idx) {
    if (idx == order_.size()) return 1;
    int w = order_[idx];
    // anchor on the first already-placed neighbor
    int anchor = -1;
    for (size_t k = 0; k < idx; ++k)
      if (adj_[w] & (1u << order_[k])) {
        anchor = order_[k];
        break;
      }
    long long total = 0;
    std::vector<int> cand(pos_[anchor]);
    for (int axis = 0; axis < d_; ++axis) {
      for (int delta : {+1, -1}) {
        cand[axis] += delta;
        bool ok = true;
        for (size_t k = 0; k < idx && ok; ++k) {
          int q = order_[k];
          if (q == anchor || !(adj_[w] & (1u << q))) continue;
          int dist = 0;
          for (int a = 0; a < d_; ++a) dist += std::abs(cand[a] - pos_[q][a]);
          ok = (dist == 1);
        }
        if (ok) {
          pos_[w] = cand;
          total += place(idx + 1);
        }
        cand[axis] -= delta;
      }
    }
    return total;
  }

  int d_;
  std::vector<std::uint32_t> adj_;
  std::vector<int> order_;
  std::vector<std::vector<int>> pos_;
  std::unordered_map<std::uint64_t, long long> cache_;
};

}  // namespace detail

/// Appendix term classes for the s = 2 breakdown: pairs (overlap size,
/// weight type). Index: A=0 .. F=5.
enum class AppendixClass { kA = 0, kB, kC, kD, kE, kF };

/// The cluster kernel of order s in dimension d as an exact rational
/// function of N, computed by summing over slot-coincidence patterns:
///
///   J-bar_s(N) = numerator(N) / (s! 2^s N (N-1)^s)
///
/// valid on any torus whose sides all are >= 2s+1 (so no cluster wraps and
/// no doubled edges exist). Obtained by expanding every v into its dimer
/// part f = 1/(2d) and smooth part -f0 = -1/(N-1), classifying tuples by
/// the partition of the 2s tile-endpoint slots into lattice vertices, and
/// counting injective placements by Moebius inversion over block merges;
/// each connected quotient component contributes N times a local
/// root-anchored embedding count.
struct PatternKernel {
  int s = 0;
  int d = 0;
  Poly numerator;
  std::array<Poly, 6> appendix_numerators{};  // populated when s == 2

  Rat denominator_at(const Int& N) const {
    Rat den(factorial(static_cast<unsigned long>(s)) *
            int_pow(Int(2), static_cast<unsigned long>(s)));
    den *= Rat(N);
    den *= rat_pow(Rat(N - 1), static_cast<unsigned long>(s));
    return den;
  }

  Rat eval(std::int64_t N) const {
    if (N < min_vertex_count())
      throw std::invalid_argument("pattern kernel needs all torus sides >= 2s+1");
    return poly_eval(numerator, Rat(Int(N))) / denominator_at(Int(N));
  }

  Rat eval_appendix(AppendixClass cls, std::int64_t N) const {
    return poly_eval(appendix_numerators[static_cast<int>(cls)], Rat(Int(N))) /
           denominator_at(Int(N));
  }

  std::int64_t min_vertex_count() const {
    std::int64_t m = 1;
    for (int i = 0; i < d; ++i) m *= 2 * s + 1;
    return m;
  }
};

namespace detail {
inline PatternKernel pattern_kernel_uncached(int s, int d);
}

/// Memoized: the rational function depends on (s, d) only.
inline const PatternKernel& pattern_kernel(int s, int d) {
  static thread_local std::map<std::pair<int, int>, PatternKernel> cache;
  auto it = cache.find({s, d});
  if (it == cache.end())
    it = cache.emplace(std::make_pair(s, d), detail::pattern_kernel_uncached(s, d)).first;
  return it->second;
}

namespace detail {

inline PatternKernel pattern_kernel_uncached(int s, int d) {
  if (s < 1 || s > 5) throw std::invalid_argument("pattern kernel supports 1 <= s <= 5");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");

  const int slots = 2 * s;
  RootedHomCounter hom(d);
  PatternKernel out;
  out.s = s;
  out.d = d;

  // (N-1)^j as polynomials, j = 0..s
  std::vector<Poly> nm1_pow(s + 1);
  nm1_pow[0] = {Rat(1)};
  for (int j = 1; j <= s; ++j) nm1_pow[j] = poly_mul(nm1_pow[j - 1], Poly{Rat(-1), Rat(1)});

  Rat inv2d = make_rat(1, 2L * d);
  std::vector<Rat> inv2d_pow(s + 1);
  inv2d_pow[0] = 1;
  for (int j = 1; j <= s; ++j) inv2d_pow[j] = inv2d_pow[j - 1] * inv2d;

  auto add_term = [](Poly& acc, const Poly& base, int shift, const Rat& scale) {
    if (scale == 0 || base.empty()) return;
    if (acc.size() < base.size() + shift) acc.resize(base.size() + shift, Rat(0));
    for (size_t i = 0; i < base.size(); ++i) acc[i + shift] += scale * base[i];
  };

  for_each_set_partition(slots, [&](const std::vector<int>& rgs, int n_blocks) {
    // slots 2i, 2i+1 belong to tile i and must stay separated
    for (int i = 0; i < s; ++i)
      if (rgs[2 * i] == rgs[2 * i + 1]) return;

    // tile overlap graph induced by shared blocks
    OverlapGraph g(s);
    for (int i = 0; i < s; ++i)
      for (int j = i + 1; j < s; ++j) {
        bool share = rgs[2 * i] == rgs[2 * j] || rgs[2 * i] == rgs[2 * j + 1] ||
                     rgs[2 * i + 1] == rgs[2 * j] || rgs[2 * i + 1] == rgs[2 * j + 1];
        if (share) g.add_edge(i, j);
      }
    if (s > 1 && !g.connected()) return;
    long long psi = ursell(g);
    if (psi == 0) return;

    int appendix_shared = 0;
    if (s == 2) {
      appendix_shared = (rgs[0] == rgs[2] || rgs[0] == rgs[3] ? 1 : 0) +
                        (rgs[1] == rgs[2] || rgs[1] == rgs[3] ? 1 : 0);
    }

    // Moebius inversion over merges of the n_blocks pattern blocks
    for_each_set_partition(n_blocks, [&](const std::vector<int>& qrgs, int n_qblocks) {
      std::vector<int> qsize(n_qblocks, 0);
      for (int b = 0; b < n_blocks; ++b) ++qsize[qrgs[b]];
      long long mu = partition_mobius(qsize);

      // quotient endpoints of each tile
      std::vector<std::pair<int, int>> tile_q(s);
      for (int i = 0; i < s; ++i)
        tile_q[i] = {qrgs[rgs[2 * i]], qrgs[rgs[2 * i + 1]]};

      for (std::uint32_t sigma = 0; sigma < (std::uint32_t(1) << s); ++sigma) {
        int n_f = __builtin_popcount(sigma);
        int n_f0 = s - n_f;

        // dimer-constraint graph H/Q on the quotient blocks
        bool loop = false;
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < s && !loop; ++i) {
          if (!(sigma & (std::uint32_t(1) << i))) continue;
          auto [a, b] = tile_q[i];
          if (a == b) {
            loop = true;  // an edge cannot close on one vertex
            break;
          }
          edges.emplace_back(std::min(a, b), std::max(a, b));
        }
        if (loop) continue;
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        // components of H/Q via union-find
        std::array<int, 16> parent;
        for (int i = 0; i < n_qblocks; ++i) parent[i] = i;
        auto find = [&](int x) {
          while (parent[x] != x) x = parent[x] = parent[parent[x]];
          return x;
        };
        int n_comp = n_qblocks;
        for (auto [a, b] : edges) {
          int ra = find(a), rb = find(b);
          if (ra != rb) {
            parent[ra] = rb;
            --n_comp;
          }
        }

        // local embedding count per nontrivial component
        long long rooted_product = 1;
        {
          std::vector<std::vector<int>> comp_vertices;
          std::vector<int> comp_index(n_qblocks, -1);
          for (int vtx = 0; vtx < n_qblocks; ++vtx) {
            int root = find(vtx);
            // gather components lazily keyed by their root
            bool fresh = true;
            for (size_t c = 0; c < comp_vertices.size(); ++c)
              if (find(comp_vertices[c][0]) == root) {
                comp_vertices[c].push_back(vtx);
                comp_index[vtx] = static_cast<int>(c);
                fresh = false;
                break;
              }
            if (fresh) {
              comp_index[vtx] = static_cast<int>(comp_vertices.size());
              comp_vertices.push_back({vtx});
            }
          }
          for (const auto& verts : comp_vertices) {
            if (verts.size() == 1) continue;
            std::vector<int> local(n_qblocks, -1);
            for (size_t k = 0; k < verts.size(); ++k) local[verts[k]] = static_cast<int>(k);
            std::uint32_t mask = 0;
            int bit = 0;
            int k = static_cast<int>(verts.size());
            for (int i = 0; i < k; ++i)
              for (int j = i + 1; j < k; ++j, ++bit)
                for (auto [a, b] : edges)
                  if (local[a] >= 0 && local[b] >= 0 &&
                      std::minmax(local[a], local[b]) == std::minmax(i, j)) {
                    mask |= std::uint32_t(1) << bit;
                    break;
                  }
            rooted_product *= hom.count(k, mask);
            if (rooted_product == 0) break;
          }
        }
        if (rooted_product == 0) continue;

        Rat scale = Rat(static_cast<long>(psi * mu)) * Rat(static_cast<long>(rooted_product)) * inv2d_pow[n_f];
        if (n_f0 % 2 == 1) scale = -scale;
        add_term(out.numerator, nm1_pow[s - n_f0], n_comp, scale);
        if (s == 2) {
          int cls;
          if (appendix_shared == 2)
            cls = (n_f == 2) ? 0 : (n_f == 0 ? 1 : 2);  // A, B, C
          else
            cls = (n_f == 2) ? 3 : (n_f == 0 ? 4 : 5);  // D, E, F
          add_term(out.appendix_numerators[cls], nm1_pow[s - n_f0], n_comp, scale);
        }
      }
    });
  });

  poly_trim(out.numerator);
  for (auto& p : out.appendix_numerators) poly_trim(p);
  return out;
}

}  // namespace detail

}  // namespace dimer
