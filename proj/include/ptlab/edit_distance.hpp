#pragma once

#include "ptlab/graph.hpp"

namespace ptlab {

struct EditDistanceResult {
  long edits = 0;
  double normalized = 0.0;  // edits / (d * n)
  bool exact = false;       // false means certified lower bound
};

enum class EditDistanceMode {
  kExactTiny,            // bijection search, up to 10 vertices
  kCertifiedLowerBound,  // label-invariant global bound, any size
};

// Minimum number of edge insertions/deletions turning g1 into a graph
// isomorphic to g2 (exact mode), or a certified lower bound on it.
// The lower bound uses only label-invariant global quantities (distinct
// canonical forms, edge counts, sorted degree sequences, component
// counts); edits may merge or split components, so no per-component
// charging is sound in general. Both graphs must have the same vertex
// count.
EditDistanceResult edit_distance(const Graph& g1, const Graph& g2,
                                 EditDistanceMode mode);

// Exact edit distance by branch and bound, seeded with a known upper
// bound so the search prunes aggressively. Intended for graphs up to a
// few dozen vertices where a good bound is available; `upper_bound`
// must be >= the true distance or the result is wrong.
long edit_distance_exact_bounded(const Graph& g1, const Graph& g2,
                                 long upper_bound);

}  // namespace ptlab
