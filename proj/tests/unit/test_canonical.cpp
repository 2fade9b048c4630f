#include <doctest.h>

#include <set>
#include <unordered_map>

#include "../support/iso.hpp"
#include "ptlab/canonical.hpp"
#include "ptlab/graph.hpp"
#include "ptlab/rng.hpp"

using namespace ptlab;

TEST_CASE("triangle code survives all six labelings") {
  std::set<std::string> codes;
  int perm[3];
  for (perm[0] = 0; perm[0] < 3; ++perm[0])
    for (perm[1] = 0; perm[1] < 3; ++perm[1]) {
      if (perm[1] == perm[0]) continue;
      perm[2] = 3 - perm[0] - perm[1];
      Graph g = Graph::from_edges(3, 2,
                                  {{perm[0], perm[1]},
                                   {perm[1], perm[2]},
                                   {perm[0], perm[2]}});
      codes.insert(canonical_form(g).code);
    }
  CHECK(codes.size() == 1);
}

TEST_CASE("P3 and the 2-star are the same unlabeled graph") {
  Graph p3 = Graph::from_edges(3, 2, {{0, 1}, {1, 2}});
  Graph star = Graph::from_edges(3, 2, {{1, 0}, {1, 2}});
  CHECK(canonical_form(p3) == canonical_form(star));
}

TEST_CASE("C6 differs from two triangles") {
  Graph c6 = Graph::from_edges(
      6, 2, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}});
  Graph tris = Graph::from_edges(
      6, 2, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  CHECK(canonical_form(c6) != canonical_form(tris));
}

TEST_CASE("empty graph has the documented degenerate form") {
  Graph empty(0, 2);
  CHECK(canonical_form(empty).code == "E");
  CHECK(canonical_form(empty).n_vertices == 0);
}

TEST_CASE("hex serialization round-trips") {
  Graph g = Graph::from_edges(5, 3, {{0, 1}, {1, 2}, {3, 4}});
  CanonicalForm f = canonical_form(g);
  CanonicalForm back = CanonicalForm::from_hex(f.hex());
  CHECK(back.code == f.code);
  for (char c : f.hex()) CHECK(std::string("0123456789abcdef").find(c) !=
                               std::string::npos);
}

// Exhaustive ground truth: the number of unlabeled graphs on 4 and 5
// vertices is 11 and 34. Counting distinct forms over every labeled graph
// checks both directions of the iff at once.
TEST_CASE("form classes over all labeled graphs match known counts") {
  auto count_classes = [](int n) {
    int pairs = n * (n - 1) / 2;
    std::set<std::string> codes;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
      std::vector<std::pair<int, int>> edges;
      int bit = 0;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v, ++bit)
          if (mask & (1u << bit)) edges.emplace_back(u, v);
      codes.insert(canonical_form(Graph::from_edges(n, n - 1, edges)).code);
    }
    return codes.size();
  };
  CHECK(count_classes(4) == 11);
  CHECK(count_classes(5) == 34);
}

TEST_CASE("form equality agrees with the bijection oracle on random pairs") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 5 + static_cast<int>(rng.below(3));
    auto random_graph = [&]() {
      std::vector<std::pair<int, int>> edges;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          if (rng.below(3) == 0) edges.emplace_back(u, v);
      return Graph::from_edges(n, n - 1, edges);
    };
    Graph a = random_graph(), b = random_graph();
    CHECK((canonical_form(a) == canonical_form(b)) ==
          ptlab_test::brute_force_isomorphic(a, b));
  }
}

TEST_CASE("tree codes use the center-rooted encoding") {
  // Paths get the two-center form; their codes must still match any
  // relabeling and differ from the spider on the same vertex count.
  Graph p6 = Graph::from_edges(6, 3,
                               {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}});
  Graph p6_shuffled = Graph::from_edges(
      6, 3, {{3, 5}, {5, 1}, {1, 0}, {0, 4}, {4, 2}});
  Graph spider = Graph::from_edges(6, 3,
                                   {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 5}});
  CHECK(canonical_form(p6) == canonical_form(p6_shuffled));
  CHECK(canonical_form(p6) != canonical_form(spider));
  CHECK(canonical_form(p6).code[0] == 'F');
}
