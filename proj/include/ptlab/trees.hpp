#pragma once

#include <string>
#include <vector>

#include "ptlab/family.hpp"
#include "ptlab/graph.hpp"

namespace ptlab {

// All unordered rooted trees on `size` vertices in which every node has at
// most two children, one canonical parenthesis code per tree, sorted.
// Exhaustive enumeration; size is capped at 16.
std::vector<std::string> enumerate_rooted_trees(int size);

// Materialize a rooted code as a Graph with degree bound 3 (a node can
// have a parent and two children).
Graph rooted_tree_to_graph(const std::string& code);

struct TreeFamilyResult {
  SuitableFamily family;          // one representative per unrooted class
  std::vector<int> orbit_sizes;   // rooted trees collapsing to each member
  std::size_t rooted_count = 0;
};

// Collapse rooted trees to unrooted-isomorphism classes via center-rooted
// canonical forms.
TreeFamilyResult dedupe_unrooted(const std::vector<std::string>& rooted,
                                 int size);

}  // namespace ptlab
