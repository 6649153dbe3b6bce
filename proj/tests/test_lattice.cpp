#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "dimer/lattice.hpp"

using namespace dimer;

TEST_CASE("torus construction and neighbor wrap") {
  TorusLattice ring = build_torus({6});
  REQUIRE(ring.vertex_count() == 6);
  REQUIRE(ring.dim() == 1);
  for (Vertex v = 0; v < 6; ++v) {
    auto nb = ring.neighbor_slots(v);
    REQUIRE(nb.size() == 2);
    std::set<Vertex> got(nb.begin(), nb.end());
    std::set<Vertex> want{(v + 1) % 6, (v + 5) % 6};
    REQUIRE(got == want);
  }

  TorusLattice cube = build_torus({3, 3, 3});
  REQUIRE(cube.vertex_count() == 27);
  for (Vertex v = 0; v < 27; ++v) {
    auto nb = cube.neighbor_slots(v);
    REQUIRE(nb.size() == 6);
    REQUIRE(std::set<Vertex>(nb.begin(), nb.end()).size() == 6);  // all distinct
  }

  TorusLattice tiny = build_torus({2, 2});
  REQUIRE(tiny.vertex_count() == 4);
  for (Vertex v = 0; v < 4; ++v) {
    auto nb = tiny.neighbor_slots(v);
    REQUIRE(nb.size() == 4);
    REQUIRE(std::set<Vertex>(nb.begin(), nb.end()).size() == 2);  // double edges
  }

  REQUIRE_THROWS_AS(build_torus({}), std::invalid_argument);
  REQUIRE_THROWS_AS(build_torus({1, 4}), std::invalid_argument);
  REQUIRE_THROWS_AS(build_torus({0}), std::invalid_argument);
}

TEST_CASE("coordinate round trip and stepping") {
  TorusLattice lat = build_torus({4, 5});
  for (Vertex v = 0; v < lat.vertex_count(); ++v) {
    REQUIRE(lat.vertex_at(lat.coords(v)) == v);
  }
  Vertex corner = lat.vertex_at({3, 4});
  REQUIRE(lat.step(corner, 0, +1) == lat.vertex_at({0, 4}));
  REQUIRE(lat.step(corner, 1, +1) == lat.vertex_at({3, 0}));
  REQUIRE(lat.step(corner, 0, -1) == lat.vertex_at({2, 4}));
}

TEST_CASE("dimer enumeration matches the cycle and small tori") {
  auto ring = build_torus({6});
  auto dimers = enumerate_dimers(ring);
  REQUIRE(dimers.size() == 6);
  std::set<std::pair<Vertex, Vertex>> got;
  for (const auto& t : dimers) {
    REQUIRE(t.multiplicity == 1);
    got.insert({t.v[0], t.v[1]});
  }
  std::set<std::pair<Vertex, Vertex>> want{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}};
  REQUIRE(got == want);

  auto grid = build_torus({4, 4});
  auto grid_dimers = enumerate_dimers(grid);
  REQUIRE(grid_dimers.size() == 32);
  for (const auto& t : grid_dimers) REQUIRE(t.multiplicity == 1);

  auto tiny = build_torus({2, 2});
  auto tiny_dimers = enumerate_dimers(tiny);
  REQUIRE(tiny_dimers.size() == 4);
  long slots = 0;
  for (const auto& t : tiny_dimers) {
    REQUIRE(t.multiplicity == 2);
    slots += t.multiplicity;
  }
  REQUIRE(slots == tiny.vertex_count() * tiny.dim());
}

TEST_CASE("total dimer multiplicity is N*d") {
  for (auto dims : std::vector<std::vector<int>>{{6}, {8}, {2, 2}, {4, 4}, {3, 3, 3}, {2, 5}}) {
    auto lat = build_torus(dims);
    long slots = 0;
    for (const auto& t : enumerate_dimers(lat)) slots += t.multiplicity;
    REQUIRE(slots == lat.vertex_count() * lat.dim());
  }
}

TEST_CASE("f0 closed form") {
  REQUIRE(f0_value(10, 2) == make_rat(1, 9));
  REQUIRE(f0_value(6, 2) == make_rat(1, 5));
  REQUIRE(f0_value(9, 3) == make_rat(1, 28));
  REQUIRE_THROWS_AS(f0_value(4, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(f0_value(4, 5), std::invalid_argument);
}

TEST_CASE("f0 satisfies the normalization over subsets containing a vertex") {
  // n = 3, N = 9: sum over all 3-subsets containing vertex 0 must be 1.
  Rat sum = 0;
  int count = 0;
  for (int a = 1; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b) {
      sum += f0_value(9, 3);
      ++count;
    }
  REQUIRE(count == 28);
  REQUIRE(sum == Rat(1));
  // n = 2: (N-1) f0 = 1.
  for (std::int64_t N : {4, 6, 16, 36, 200}) {
    REQUIRE(Rat(N - 1) * f0_value(N, 2) == Rat(1));
  }
}

TEST_CASE("weights and the perturbation v") {
  auto ring = build_torus({6});
  auto wa = make_weights(ring);
  auto w01 = weight_and_v(ring, wa, LocatedTile{{0, 1}});
  REQUIRE(w01.f == make_rat(1, 2));
  REQUIRE(w01.v == make_rat(3, 10));
  auto w03 = weight_and_v(ring, wa, LocatedTile{{0, 3}});
  REQUIRE(w03.f == Rat(0));
  REQUIRE(w03.v == make_rat(-1, 5));

  auto grid = build_torus({4, 4});
  auto wg = make_weights(grid);
  LocatedTile t{{grid.vertex_at({0, 0}), grid.vertex_at({1, 0})}};
  auto w = weight_and_v(grid, wg, t);
  REQUIRE(w.f == make_rat(1, 4));
  REQUIRE(w.v == make_rat(1, 4) - make_rat(1, 15));

  REQUIRE_THROWS_AS(weight_and_v(ring, wa, LocatedTile{{2, 2}}), std::invalid_argument);
}

TEST_CASE("per-vertex normalization of f holds with multiplicity") {
  for (auto dims : std::vector<std::vector<int>>{{6}, {8}, {2, 2}, {4, 4}, {3, 3, 3}, {2, 5}}) {
    auto lat = build_torus(dims);
    auto wa = make_weights(lat);
    std::map<Vertex, Rat> per_vertex;
    for (const auto& t : enumerate_dimers(lat)) {
      Rat f = weight_and_v(lat, wa, t).f * t.multiplicity;
      per_vertex[t.v[0]] += f;
      per_vertex[t.v[1]] += f;
    }
    for (Vertex v = 0; v < lat.vertex_count(); ++v) {
      REQUIRE(per_vertex[v] == Rat(1));
    }
  }
}

TEST_CASE("f and v depend only on the translation class") {
  auto lat = build_torus({4, 6});
  auto wa = make_weights(lat);
  // translate a dimer and a non-dimer around the torus
  for (int dx = 0; dx < 4; ++dx)
    for (int dy = 0; dy < 6; ++dy) {
      Vertex a = lat.vertex_at({dx, dy});
      Vertex b = lat.vertex_at({dx + 1, dy});
      LocatedTile dtile{{std::min(a, b), std::max(a, b)}};
      auto w = weight_and_v(lat, wa, dtile);
      REQUIRE(w.f == make_rat(1, 4));

      Vertex c = lat.vertex_at({dx + 2, dy + 3});
      LocatedTile far{{std::min(a, c), std::max(a, c)}};
      auto wf = weight_and_v(lat, wa, far);
      REQUIRE(wf.f == Rat(0));
      REQUIRE(wf.v == -wa.f0);
    }
}
