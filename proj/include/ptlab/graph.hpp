#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ptlab {

class Rng;

// Bounded-degree graph with per-vertex sorted adjacency lists.
// Slot i of a vertex answers the i-th neighbor query. Graphs are treated
// as immutable once built; construction goes through from_edges or a
// sequence of add_edge calls followed by use.
class Graph {
 public:
  Graph() = default;
  Graph(int n, int degree_bound);

  static Graph from_edges(int n, int degree_bound,
                          const std::vector<std::pair<int, int>>& edges);

  // Inserts the undirected edge {u, v}, keeping slots sorted by neighbor id.
  // Throws on self-loops, duplicates, out-of-range ids, degree overflow.
  void add_edge(int u, int v);

  int vertex_count() const { return n_; }
  int degree_bound() const { return d_; }
  int degree(int v) const;
  long edge_count() const;
  const std::vector<int>& neighbors(int v) const;
  bool has_edge(int u, int v) const;
  std::vector<std::pair<int, int>> edges() const;  // u < v, sorted

  // Text format: header "n d", then one line per vertex "v: u1 u2 ...".
  std::string to_text() const;
  static Graph from_text(const std::string& text);

 private:
  void check_vertex(int v) const;

  int n_ = 0;
  int d_ = 0;
  std::vector<std::vector<int>> adj_;
};

// Session-local accounting of oracle access. Counters only go up; a new
// algorithm run gets a fresh ledger.
struct QueryLedger {
  std::uint64_t neighbor_queries = 0;
  std::unordered_set<int> vertices_touched;
};

struct ComponentView {
  std::vector<int> vertices;               // ascending vertex ids
  std::vector<std::pair<int, int>> edges;  // induced edges, u < v
};

// The i-th neighbor of v, or nullopt when slot i is empty. Out-of-range
// v or slot is a usage error (std::out_of_range), distinct from nullopt.
std::optional<int> neighbor_query(const Graph& g, QueryLedger& ledger, int v,
                                  int slot);

// BFS through neighbor_query until the component of `start` is exhausted.
// Returns nullopt once more than `cap` vertices have been seen.
std::optional<ComponentView> explore_component(const Graph& g,
                                               QueryLedger& ledger, int start,
                                               int cap);

// Uniformly random vertex relabeling; slots are re-sorted by new id.
Graph random_relabel(const Graph& g, Rng& rng);

// Block-structured disjoint union; all parts must share the degree bound.
Graph disjoint_union(
    const std::vector<std::pair<const Graph*, int>>& parts);

// Subgraph induced on `vertices` (any order; local ids follow sorted order).
Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices);

std::vector<std::vector<int>> connected_components(const Graph& g);

bool is_connected(const Graph& g);

}  // namespace ptlab
