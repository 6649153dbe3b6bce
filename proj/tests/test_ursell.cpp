#include <catch2/catch_amalgamated.hpp>

#include "dimer/ursell.hpp"

using namespace dimer;

namespace {

OverlapGraph from_mask(int n, std::uint32_t mask) {
  OverlapGraph g(n);
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask & (std::uint32_t(1) << bit)) g.add_edge(i, j);
  return g;
}

}  // namespace

TEST_CASE("ursell factors on standard patterns") {
  OverlapGraph single(1);
  REQUIRE(ursell(single) == 1);

  OverlapGraph pair(2);
  pair.add_edge(0, 1);
  REQUIRE(ursell(pair) == -1);

  OverlapGraph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  REQUIRE(ursell(path) == 1);

  OverlapGraph triangle(3);
  triangle.add_edge(0, 1);
  triangle.add_edge(1, 2);
  triangle.add_edge(0, 2);
  REQUIRE(ursell(triangle) == 2);

  // complete graphs: (-1)^{n-1} (n-1)!
  OverlapGraph k4(4);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) k4.add_edge(i, j);
  REQUIRE(ursell(k4) == -6);

  OverlapGraph disconnected(3);
  disconnected.add_edge(0, 1);
  REQUIRE(ursell(disconnected) == 0);

  OverlapGraph isolated(2);
  REQUIRE(ursell(isolated) == 0);
}

TEST_CASE("the two ursell routes agree on every graph with up to 5 vertices") {
  for (int n = 1; n <= 5; ++n) {
    int edges = n * (n - 1) / 2;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << edges); ++mask) {
      OverlapGraph g = from_mask(n, mask);
      REQUIRE(ursell_edge_subsets(g) == ursell_mobius(g));
    }
  }
}

TEST_CASE("ursell is invariant under relabeling") {
  // path 0-1-2-3 versus the same path with shuffled labels
  OverlapGraph a(4);
  a.add_edge(0, 1);
  a.add_edge(1, 2);
  a.add_edge(2, 3);
  OverlapGraph b(4);
  b.add_edge(2, 0);
  b.add_edge(0, 3);
  b.add_edge(3, 1);
  REQUIRE(ursell(a) == ursell(b));
}

TEST_CASE("size bound is enforced") {
  OverlapGraph big(7);
  for (int i = 0; i < 6; ++i) big.add_edge(i, i + 1);
  REQUIRE_THROWS_AS(ursell_edge_subsets(big), BudgetError);
}
