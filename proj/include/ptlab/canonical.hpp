#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ptlab/graph.hpp"

namespace ptlab {

// Isomorphism-invariant code for an unlabeled graph: equal codes iff the
// graphs are isomorphic. Trees are encoded by a center-rooted AHU string,
// everything else by the minimal adjacency encoding found through color
// refinement with individualization. Disconnected graphs combine the
// sorted multiset of component codes.
struct CanonicalForm {
  std::string code;
  int n_vertices = 0;

  bool operator==(const CanonicalForm& o) const { return code == o.code; }
  bool operator!=(const CanonicalForm& o) const { return code != o.code; }
  bool operator<(const CanonicalForm& o) const { return code < o.code; }

  std::string hex() const;
  static CanonicalForm from_hex(const std::string& hex);
};

struct CanonicalFormHash {
  std::size_t operator()(const CanonicalForm& f) const {
    return std::hash<std::string>{}(f.code);
  }
};

CanonicalForm canonical_form(const Graph& g);

// Form of one connected component, given as a vertex set of g.
CanonicalForm canonical_form(const Graph& g, const std::vector<int>& component);

// AHU code of a rooted tree given as children lists ("(...)" nesting with
// children sorted). Exposed for the rooted-tree enumeration.
std::string ahu_rooted_code(const std::vector<std::vector<int>>& children,
                            int root);

}  // namespace ptlab
