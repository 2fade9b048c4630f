#include "ptlab/trees.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "ptlab/canonical.hpp"

namespace ptlab {

namespace {

// Memoized enumeration: codes for all trees of a given size, sorted.
// A code is "(" + concatenated child codes (sorted) + ")".
const std::vector<std::string>& rooted_codes(int size) {
  static std::map<int, std::vector<std::string>> memo;
  auto it = memo.find(size);
  if (it != memo.end()) return it->second;

  std::vector<std::string> out;
  if (size == 1) {
    out.push_back("()");
  } else {
    // One child subtree.
    for (const auto& sub : rooted_codes(size - 1))
      out.push_back("(" + sub + ")");
    // Two child subtrees, unordered: enforce code(left) <= code(right).
    for (int a = 1; 2 * a <= size - 1; ++a) {
      int b = size - 1 - a;
      const auto& left = rooted_codes(a);
      const auto& right = rooted_codes(b);
      for (const auto& lc : left)
        for (const auto& rc : right) {
          if (a == b && rc < lc) continue;
          out.push_back("(" + lc + rc + ")");
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return memo.emplace(size, std::move(out)).first->second;
}

}  // namespace

std::vector<std::string> enumerate_rooted_trees(int size) {
  if (size < 1) throw std::invalid_argument("enumerate_rooted_trees: size < 1");
  if (size > 16)
    throw std::invalid_argument("enumerate_rooted_trees: size > 16");
  return rooted_codes(size);
}

Graph rooted_tree_to_graph(const std::string& code) {
  // Parse the nesting; vertex 0 is the root.
  std::vector<std::pair<int, int>> edges;
  std::vector<int> stack;
  int next_id = 0;
  for (char c : code) {
    if (c == '(') {
      int v = next_id++;
      if (!stack.empty()) edges.emplace_back(stack.back(), v);
      stack.push_back(v);
    } else if (c == ')') {
      if (stack.empty())
        throw std::invalid_argument("rooted_tree_to_graph: unbalanced code");
      stack.pop_back();
    } else {
      throw std::invalid_argument("rooted_tree_to_graph: bad character");
    }
  }
  if (!stack.empty())
    throw std::invalid_argument("rooted_tree_to_graph: unbalanced code");
  return Graph::from_edges(next_id, 3, edges);
}

TreeFamilyResult dedupe_unrooted(const std::vector<std::string>& rooted,
                                 int size) {
  TreeFamilyResult result;
  result.rooted_count = rooted.size();

  std::map<CanonicalForm, std::pair<Graph, int>> classes;
  for (const auto& code : rooted) {
    Graph g = rooted_tree_to_graph(code);
    if (g.vertex_count() != size)
      throw std::invalid_argument("dedupe_unrooted: size mismatch");
    CanonicalForm form = canonical_form(g);
    auto it = classes.find(form);
    if (it == classes.end())
      classes.emplace(std::move(form), std::make_pair(std::move(g), 1));
    else
      ++it->second.second;
  }

  SuitableFamily& f = result.family;
  f.kind = "tree";
  f.t = size;
  f.degree_bound = 3;
  f.epsilon = size > 0 ? 1.0 / size : 0.0;
  for (auto& [form, entry] : classes) {
    f.members.push_back(std::move(entry.first));
    f.forms.push_back(form);
    result.orbit_sizes.push_back(entry.second);
  }
  return result;
}

}  // namespace ptlab
