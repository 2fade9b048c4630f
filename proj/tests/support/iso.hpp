#pragma once

// Test-side isomorphism oracle, independent of the canonical-form code
// under test: straight bijection search with degree pruning. Fine for the
// sparse graphs up to ~16 vertices the tests feed it.

#include <algorithm>
#include <numeric>
#include <vector>

#include "ptlab/graph.hpp"

namespace ptlab_test {

inline bool extend_mapping(const ptlab::Graph& a, const ptlab::Graph& b,
                           std::vector<int>& map, std::vector<bool>& used,
                           const std::vector<int>& order, std::size_t depth) {
  if (depth == order.size()) return true;
  int v = order[depth];
  for (int w = 0; w < b.vertex_count(); ++w) {
    if (used[w] || a.degree(v) != b.degree(w)) continue;
    bool ok = true;
    for (int u = 0; u < a.vertex_count() && ok; ++u)
      if (map[u] >= 0 && a.has_edge(v, u) != b.has_edge(w, map[u]))
        ok = false;
    if (!ok) continue;
    map[v] = w;
    used[w] = true;
    if (extend_mapping(a, b, map, used, order, depth + 1)) return true;
    map[v] = -1;
    used[w] = false;
  }
  return false;
}

inline bool brute_force_isomorphic(const ptlab::Graph& a,
                                   const ptlab::Graph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
    return false;
  auto degrees = [](const ptlab::Graph& g) {
    std::vector<int> d;
    for (int v = 0; v < g.vertex_count(); ++v) d.push_back(g.degree(v));
    std::sort(d.begin(), d.end());
    return d;
  };
  if (degrees(a) != degrees(b)) return false;

  std::vector<int> order(a.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a.degree(x) > a.degree(y); });
  std::vector<int> map(a.vertex_count(), -1);
  std::vector<bool> used(b.vertex_count(), false);
  return extend_mapping(a, b, map, used, order, 0);
}

}  // namespace ptlab_test
