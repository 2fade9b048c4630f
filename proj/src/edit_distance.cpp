#include "ptlab/edit_distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ptlab/canonical.hpp"

namespace ptlab {

namespace {

constexpr int kExactLimit = 10;

// Branch and bound over vertex bijections. Vertices of g1 are assigned in
// decreasing-degree order; partial cost counts mismatched pairs among the
// assigned prefix.
struct ExactSearch {
  const Graph& g1;
  const Graph& g2;
  int n;
  std::vector<int> order;   // g1 vertices, assignment order
  std::vector<int> image;   // order index -> g2 vertex
  std::vector<bool> used;
  long best;

  ExactSearch(const Graph& a, const Graph& b)
      : g1(a), g2(b), n(a.vertex_count()), image(n), used(n, false) {
    order.resize(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return g1.degree(x) > g1.degree(y);
    });
    best = full_cost_identity();
  }

  long full_cost_identity() const {
    long cost = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (g1.has_edge(i, j) != g2.has_edge(i, j)) ++cost;
    return cost;
  }

  void run(int depth, long cost) {
    if (cost >= best) return;
    if (depth == n) {
      best = cost;
      return;
    }
    int v = order[depth];
    for (int w = 0; w < n; ++w) {
      if (used[w]) continue;
      long add = 0;
      for (int k = 0; k < depth && cost + add < best; ++k)
        if (g1.has_edge(v, order[k]) != g2.has_edge(w, image[k])) ++add;
      used[w] = true;
      image[depth] = w;
      run(depth + 1, cost + add);
      used[w] = false;
    }
  }

  long solve() {
    run(0, 0);
    return best;
  }
};

}  // namespace

EditDistanceResult edit_distance(const Graph& g1, const Graph& g2,
                                 EditDistanceMode mode) {
  if (g1.vertex_count() != g2.vertex_count())
    throw std::invalid_argument("edit_distance: vertex counts differ");
  const int n = g1.vertex_count();
  const int d = std::max(g1.degree_bound(), g2.degree_bound());
  const double dn = static_cast<double>(d) * std::max(n, 1);

  if (mode == EditDistanceMode::kExactTiny) {
    if (n > kExactLimit)
      throw std::invalid_argument("edit_distance: exact mode limited to 10");
    long edits = n == 0 ? 0 : ExactSearch(g1, g2).solve();
    return {edits, edits / dn, true};
  }

  // Certified lower bound from label-invariant global quantities only.
  // Edits may merge or split components, so nothing finer than these is
  // sound without extra structure.
  if (canonical_form(g1) == canonical_form(g2)) return {0, 0.0, true};
  long bound = 1;  // non-isomorphic, so at least one edit
  bound = std::max(bound, std::labs(g1.edge_count() - g2.edge_count()));

  // Each edit shifts exactly two degrees by one, so half the L1 gap
  // between sorted degree sequences is a lower bound.
  std::vector<int> d1, d2;
  d1.reserve(n);
  d2.reserve(n);
  for (int v = 0; v < n; ++v) {
    d1.push_back(g1.degree(v));
    d2.push_back(g2.degree(v));
  }
  std::sort(d1.begin(), d1.end());
  std::sort(d2.begin(), d2.end());
  long l1 = 0;
  for (int i = 0; i < n; ++i) l1 += std::abs(d1[i] - d2[i]);
  bound = std::max(bound, (l1 + 1) / 2);

  // Each edit changes the number of connected components by at most one.
  long comp_diff = std::labs(
      static_cast<long>(connected_components(g1).size()) -
      static_cast<long>(connected_components(g2).size()));
  bound = std::max(bound, comp_diff);
  return {bound, bound / dn, false};
}

long edit_distance_exact_bounded(const Graph& g1, const Graph& g2,
                                 long upper_bound) {
  if (g1.vertex_count() != g2.vertex_count())
    throw std::invalid_argument("edit_distance: vertex counts differ");
  if (g1.vertex_count() == 0) return 0;
  ExactSearch search(g1, g2);
  search.best = std::min(search.best, upper_bound + 1);
  return search.solve();
}

}  // namespace ptlab
