#include "ptlab/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "ptlab/rng.hpp"

namespace ptlab {

Graph::Graph(int n, int degree_bound) : n_(n), d_(degree_bound), adj_(n) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  if (degree_bound < 1 && n > 0)
    throw std::invalid_argument("Graph: degree bound must be positive");
}

Graph Graph::from_edges(int n, int degree_bound,
                        const std::vector<std::pair<int, int>>& edges) {
  Graph g(n, degree_bound);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void Graph::check_vertex(int v) const {
  if (v < 0 || v >= n_) throw std::out_of_range("Graph: vertex out of range");
}

void Graph::add_edge(int u, int v) {
  check_vertex(u);
  check_vertex(v);
  if (u == v) throw std::invalid_argument("Graph: self-loop");
  auto& au = adj_[u];
  auto it = std::lower_bound(au.begin(), au.end(), v);
  if (it != au.end() && *it == v)
    throw std::invalid_argument("Graph: parallel edge");
  if (static_cast<int>(au.size()) >= d_ ||
      static_cast<int>(adj_[v].size()) >= d_)
    throw std::invalid_argument("Graph: degree bound exceeded");
  au.insert(it, v);
  auto& av = adj_[v];
  av.insert(std::lower_bound(av.begin(), av.end(), u), u);
}

int Graph::degree(int v) const {
  check_vertex(v);
  return static_cast<int>(adj_[v].size());
}

long Graph::edge_count() const {
  long twice = 0;
  for (const auto& a : adj_) twice += static_cast<long>(a.size());
  return twice / 2;
}

const std::vector<int>& Graph::neighbors(int v) const {
  check_vertex(v);
  return adj_[v];
}

bool Graph::has_edge(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  const auto& au = adj_[u];
  return std::binary_search(au.begin(), au.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count()));
  for (int u = 0; u < n_; ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

std::string Graph::to_text() const {
  std::ostringstream os;
  os << n_ << ' ' << d_ << '\n';
  for (int v = 0; v < n_; ++v) {
    os << v << ':';
    for (int u : adj_[v]) os << ' ' << u;
    os << '\n';
  }
  return os.str();
}

Graph Graph::from_text(const std::string& text) {
  std::istringstream is(text);
  int n = 0, d = 0;
  if (!(is >> n >> d)) throw std::invalid_argument("graph text: bad header");
  Graph g(n, d);
  std::string line;
  std::getline(is, line);
  for (int v = 0; v < n; ++v) {
    if (!std::getline(is, line))
      throw std::invalid_argument("graph text: missing vertex line");
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head != std::to_string(v) + ":")
      throw std::invalid_argument("graph text: bad vertex line");
    int u;
    while (ls >> u)
      if (u > v) g.add_edge(v, u);
  }
  return g;
}

std::optional<int> neighbor_query(const Graph& g, QueryLedger& ledger, int v,
                                  int slot) {
  if (v < 0 || v >= g.vertex_count())
    throw std::out_of_range("neighbor_query: vertex out of range");
  if (slot < 0 || slot >= g.degree_bound())
    throw std::out_of_range("neighbor_query: slot out of range");
  ++ledger.neighbor_queries;
  ledger.vertices_touched.insert(v);
  const auto& ns = g.neighbors(v);
  if (slot >= static_cast<int>(ns.size())) return std::nullopt;
  return ns[slot];
}

std::optional<ComponentView> explore_component(const Graph& g,
                                               QueryLedger& ledger, int start,
                                               int cap) {
  if (cap < 1) throw std::invalid_argument("explore_component: cap < 1");
  std::unordered_set<int> seen{start};
  std::queue<int> frontier;
  frontier.push(start);
  ComponentView view;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    view.vertices.push_back(v);
    for (int slot = 0; slot < g.degree_bound(); ++slot) {
      auto u = neighbor_query(g, ledger, v, slot);
      if (!u) break;  // slots are packed: first empty slot ends the list
      if (v < *u) view.edges.emplace_back(v, *u);
      if (seen.insert(*u).second) {
        if (static_cast<int>(seen.size()) > cap) return std::nullopt;
        frontier.push(*u);
      }
    }
  }
  std::sort(view.vertices.begin(), view.vertices.end());
  std::sort(view.edges.begin(), view.edges.end());
  return view;
}

Graph random_relabel(const Graph& g, Rng& rng) {
  const int n = g.vertex_count();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  rng.shuffle(perm);
  Graph out(n, g.degree_bound());
  for (int u = 0; u < n; ++u)
    for (int v : g.neighbors(u))
      if (u < v) out.add_edge(perm[u], perm[v]);
  return out;
}

Graph disjoint_union(
    const std::vector<std::pair<const Graph*, int>>& parts) {
  int d = 0;
  long total = 0;
  for (auto [part, mult] : parts) {
    if (mult < 0) throw std::invalid_argument("disjoint_union: negative count");
    if (part->vertex_count() > 0) {
      if (d == 0) d = part->degree_bound();
      if (part->degree_bound() != d)
        throw std::invalid_argument("disjoint_union: degree bounds differ");
    }
    total += static_cast<long>(part->vertex_count()) * mult;
  }
  Graph out(static_cast<int>(total), d == 0 ? 1 : d);
  int offset = 0;
  for (auto [part, mult] : parts) {
    for (int c = 0; c < mult; ++c) {
      for (int u = 0; u < part->vertex_count(); ++u)
        for (int v : part->neighbors(u))
          if (u < v) out.add_edge(offset + u, offset + v);
      offset += part->vertex_count();
    }
  }
  return out;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& vertices) {
  std::vector<int> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  std::unordered_map<int, int> local;
  local.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    local[sorted[i]] = static_cast<int>(i);
  Graph out(static_cast<int>(sorted.size()), g.degree_bound());
  for (int u : sorted)
    for (int v : g.neighbors(u))
      if (u < v && local.count(v)) out.add_edge(local[u], local[v]);
  return out;
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> comps;
  std::vector<bool> seen(n, false);
  for (int start = 0; start < n; ++start) {
    if (seen[start]) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      comp.push_back(v);
      for (int u : g.neighbors(v))
        if (!seen[u]) {
          seen[u] = true;
          q.push(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

bool is_connected(const Graph& g) {
  return g.vertex_count() <= 1 || connected_components(g).size() == 1;
}

}  // namespace ptlab
