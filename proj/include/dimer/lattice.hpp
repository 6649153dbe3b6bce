#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dimer/rational.hpp"

namespace dimer {

using Vertex = std::int64_t;

/// A located tile of size two: a sorted pair of distinct vertices.
/// `multiplicity` counts the distinct lattice edges on this vertex pair;
/// it exceeds 1 only for dimers along an axis of length 2, where the +1
/// and -1 steps wrap onto the same neighbor.
struct LocatedTile {
  std::array<Vertex, 2> v{0, 0};
  int multiplicity = 1;

  friend bool operator==(const LocatedTile& a, const LocatedTile& b) {
    return a.v == b.v && a.multiplicity == b.multiplicity;
  }
};

/// d-dimensional torus with sides L_1..L_d. Vertices are indexed in mixed
/// radix with axis 0 fastest; coordinate arithmetic wraps per axis.
class TorusLattice {
 public:
  explicit TorusLattice(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) throw std::invalid_argument("torus needs at least one axis");
    n_vertices_ = 1;
    strides_.resize(dims_.size());
    for (size_t a = 0; a < dims_.size(); ++a) {
      int side = dims_[a];
      if (side < 2) throw std::invalid_argument("every side length must be >= 2");
      if (n_vertices_ > std::numeric_limits<std::int64_t>::max() / side)
        throw std::invalid_argument("vertex count overflows");
      strides_[a] = n_vertices_;
      n_vertices_ *= side;
    }
  }

  int dim() const { return static_cast<int>(dims_.size()); }
  std::int64_t vertex_count() const { return n_vertices_; }
  const std::vector<int>& dims() const { return dims_; }

  int min_side() const {
    int m = dims_[0];
    for (int side : dims_) m = std::min(m, side);
    return m;
  }

  std::vector<int> coords(Vertex v) const {
    std::vector<int> c(dims_.size());
    for (size_t a = 0; a < dims_.size(); ++a) {
      c[a] = static_cast<int>(v % dims_[a]);
      v /= dims_[a];
    }
    return c;
  }

  Vertex vertex_at(const std::vector<int>& c) const {
    Vertex v = 0;
    for (size_t a = dims_.size(); a-- > 0;) {
      int x = c[a] % dims_[a];
      if (x < 0) x += dims_[a];
      v = v * dims_[a] + x;
    }
    return v;
  }

  /// Neighbor along `axis`, `delta` steps away (wraps).
  Vertex step(Vertex v, int axis, int delta) const {
    int side = dims_[axis];
    std::int64_t stride = strides_[axis];
    std::int64_t x = (v / stride) % side;
    std::int64_t rest = v - x * stride;
    std::int64_t nx = (x + delta) % side;
    if (nx < 0) nx += side;
    return rest + nx * stride;
  }

  /// The 2d incident dimer slots of `v`, one entry per slot. On an axis of
  /// length 2 the +1 and -1 slots list the same neighbor twice.
  std::vector<Vertex> neighbor_slots(Vertex v) const {
    std::vector<Vertex> out;
    out.reserve(2 * dims_.size());
    for (int a = 0; a < dim(); ++a) {
      out.push_back(step(v, a, +1));
      out.push_back(step(v, a, -1));
    }
    return out;
  }

  /// 0 when {a,b} is not a lattice edge; otherwise the number of parallel
  /// edges (2 exactly when the connecting axis has length 2).
  int edge_multiplicity(Vertex a, Vertex b) const {
    if (a == b) return 0;
    std::vector<int> ca = coords(a), cb = coords(b);
    int axis = -1;
    for (int i = 0; i < dim(); ++i) {
      if (ca[i] != cb[i]) {
        if (axis >= 0) return 0;  // differs in more than one axis
        axis = i;
      }
    }
    int side = dims_[axis];
    int diff = ca[axis] - cb[axis];
    if (diff < 0) diff = -diff;
    if (diff != 1 && diff != side - 1) return 0;
    return side == 2 ? 2 : 1;
  }

 private:
  std::vector<int> dims_;
  std::vector<std::int64_t> strides_;
  std::int64_t n_vertices_ = 0;
};

inline TorusLattice build_torus(const std::vector<int>& dims) {
  return TorusLattice(dims);
}

/// All nearest-neighbor located tiles, sorted by vertex pair, with edge
/// multiplicities merged. Total multiplicity over the list is N*d.
inline std::vector<LocatedTile> enumerate_dimers(const TorusLattice& lat) {
  std::vector<LocatedTile> tiles;
  tiles.reserve(static_cast<size_t>(lat.vertex_count()) * lat.dim());
  for (Vertex v = 0; v < lat.vertex_count(); ++v) {
    for (int a = 0; a < lat.dim(); ++a) {
      Vertex u = lat.step(v, a, +1);
      LocatedTile t;
      t.v = {std::min(v, u), std::max(v, u)};
      tiles.push_back(t);
    }
  }
  std::sort(tiles.begin(), tiles.end(), [](const LocatedTile& x, const LocatedTile& y) {
    return x.v < y.v;
  });
  std::vector<LocatedTile> merged;
  for (const auto& t : tiles) {
    if (!merged.empty() && merged.back().v == t.v)
      merged.back().multiplicity += t.multiplicity;
    else
      merged.push_back(t);
  }
  return merged;
}

/// Constant weight per tile of size n on N vertices: (n-1)!(N-n)!/(N-1)!,
/// evaluated as (n-1)! over the falling product (N-1)(N-2)...(N-n+1).
inline Rat f0_value(std::int64_t N, unsigned n) {
  if (n < 2) throw std::invalid_argument("tile size must be >= 2");
  if (static_cast<std::int64_t>(n) >= N)
    throw std::invalid_argument("tile size must be smaller than the lattice");
  Int den = 1;
  for (unsigned k = 1; k < n; ++k) den *= Int(N - k);
  return make_rat(factorial(n - 1), den);
}

/// The dimer weight assignment: f = 1/(2d) per incidence slot on dimers,
/// 0 elsewhere, with the smooth part f0.
struct WeightAssignment {
  unsigned tile_size = 2;
  Rat dimer_value;  // per incidence slot
  Rat f0;
};

inline WeightAssignment make_weights(const TorusLattice& lat) {
  WeightAssignment wa;
  wa.tile_size = 2;
  wa.dimer_value = make_rat(1, 2L * lat.dim());
  wa.f0 = f0_value(lat.vertex_count(), 2);
  return wa;
}

struct TileWeight {
  Rat f;
  Rat v;
};

/// f and v = f - f0 for a single incidence slot of `tile`; multiplicity is
/// handled by callers.
inline TileWeight weight_and_v(const TorusLattice& lat, const WeightAssignment& wa,
                               const LocatedTile& tile) {
  if (wa.tile_size != 2) throw std::invalid_argument("only 2-tiles are weighted");
  if (tile.v[0] == tile.v[1]) throw std::invalid_argument("tile vertices must be distinct");
  if (tile.v[0] < 0 || tile.v[1] >= lat.vertex_count() || tile.v[0] > tile.v[1])
    throw std::invalid_argument("tile out of range or unsorted");
  TileWeight w;
  w.f = lat.edge_multiplicity(tile.v[0], tile.v[1]) > 0 ? wa.dimer_value : Rat(0);
  w.v = w.f - wa.f0;
  return w;
}

}  // namespace dimer
