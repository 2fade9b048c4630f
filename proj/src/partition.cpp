#include "ptlab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ptlab {

namespace {

// Components of the subgraph induced on `subset`, as global vertex sets.
std::vector<std::vector<int>> subset_components(
    const Graph& g, const std::vector<int>& subset) {
  std::unordered_set<int> in(subset.begin(), subset.end());
  std::vector<std::vector<int>> comps;
  std::unordered_set<int> seen;
  for (int start : subset) {
    if (seen.count(start)) continue;
    std::vector<int> comp;
    std::queue<int> q;
    q.push(start);
    seen.insert(start);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      comp.push_back(v);
      for (int u : g.neighbors(v))
        if (in.count(u) && seen.insert(u).second) q.push(u);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

// Split component groups into two sides, each with at least a third of the
// total weight (possible whenever every group is at most two thirds).
std::pair<std::vector<int>, std::vector<int>> third_split(
    const std::vector<std::vector<int>>& comps) {
  long total = 0;
  for (const auto& c : comps) total += static_cast<long>(c.size());
  std::vector<std::size_t> order(comps.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return comps[a].size() > comps[b].size();
  });
  std::vector<int> a, b;
  long a_weight = 0;
  for (std::size_t idx : order) {
    const auto& c = comps[idx];
    if (3 * a_weight < total) {
      a.insert(a.end(), c.begin(), c.end());
      a_weight += static_cast<long>(c.size());
    } else {
      b.insert(b.end(), c.begin(), c.end());
    }
  }
  return {std::move(a), std::move(b)};
}

int tree_centroid(const Graph& sub) {
  const int n = sub.vertex_count();
  std::vector<int> size(n, 1), parent(n, -1), order;
  order.reserve(n);
  std::vector<int> stack{0};
  std::vector<bool> seen(n, false);
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int u : sub.neighbors(v))
      if (!seen[u]) {
        seen[u] = true;
        parent[u] = v;
        stack.push_back(u);
      }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (parent[*it] >= 0) size[parent[*it]] += size[*it];
  for (int v : order) {
    int worst = n - size[v];
    for (int u : sub.neighbors(v))
      if (u != parent[v]) worst = std::max(worst, size[u]);
    if (2 * worst <= n) return v;
  }
  return 0;  // unreachable for a connected tree
}

bool balanced_after_removal(const Graph& g, const std::vector<int>& removed,
                            double max_component) {
  std::vector<bool> gone(g.vertex_count(), false);
  for (int v : removed) gone[v] = true;
  std::vector<bool> seen(g.vertex_count(), false);
  for (int start = 0; start < g.vertex_count(); ++start) {
    if (gone[start] || seen[start]) continue;
    long size = 0;
    std::queue<int> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      ++size;
      if (static_cast<double>(size) > max_component + 1e-9) return false;
      for (int u : g.neighbors(v))
        if (!gone[u] && !seen[u]) {
          seen[u] = true;
          q.push(u);
        }
    }
  }
  return true;
}

}  // namespace

long recount_cut_edges(const Graph& g, const Partition& p) {
  long cut = 0;
  for (int u = 0; u < g.vertex_count(); ++u)
    for (int v : g.neighbors(u))
      if (u < v && p.block_of[u] != p.block_of[v]) ++cut;
  return cut;
}

bool validate_partition(const Graph& g, const Partition& p, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (static_cast<int>(p.block_of.size()) != g.vertex_count())
    return fail("block_of size mismatch");
  std::vector<bool> covered(g.vertex_count(), false);
  for (std::size_t id = 0; id < p.blocks.size(); ++id) {
    const auto& block = p.blocks[id];
    if (block.empty()) return fail("empty block");
    if (p.k > 0 && static_cast<int>(block.size()) > p.k)
      return fail("block exceeds size bound");
    for (int v : block) {
      if (covered[v]) return fail("vertex in two blocks");
      covered[v] = true;
      if (p.block_of[v] != static_cast<int>(id))
        return fail("block_of inconsistent");
    }
    // Connectivity within the block.
    std::unordered_set<int> in(block.begin(), block.end());
    std::unordered_set<int> seen{block[0]};
    std::queue<int> q;
    q.push(block[0]);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int u : g.neighbors(v))
        if (in.count(u) && seen.insert(u).second) q.push(u);
    }
    if (seen.size() != block.size()) return fail("block not connected");
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (!covered[v]) return fail("vertex not covered");
  if (p.cut_edges != recount_cut_edges(g, p))
    return fail("cut_edges does not match recount");
  return true;
}

std::string partition_to_text(const Partition& p) {
  std::ostringstream os;
  for (std::size_t id = 0; id < p.blocks.size(); ++id) {
    os << id << ':';
    for (int v : p.blocks[id]) os << ' ' << v;
    os << '\n';
  }
  os << "cut_edges: " << p.cut_edges << '\n';
  os << "k: " << p.k << '\n';
  return os.str();
}

SeparatorResult min_balanced_separator(const Graph& g, double balance,
                                       std::uint64_t subset_budget) {
  const int n = g.vertex_count();
  const double max_comp = balance * n;
  SeparatorResult result;
  result.balance = balance;
  if (n == 0) {
    result.exact = true;
    return result;
  }

  std::uint64_t examined = 0;
  for (int size = 0; size <= n; ++size) {
    // All subsets of the given size, lexicographic.
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    for (;;) {
      if (++examined > subset_budget) {
        // Heuristic fallback: strip highest-degree vertices until balanced.
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
          return g.degree(a) > g.degree(b);
        });
        std::vector<int> removed;
        for (int v : order) {
          if (balanced_after_removal(g, removed, max_comp)) break;
          removed.push_back(v);
        }
        result.vertices = std::move(removed);
        std::sort(result.vertices.begin(), result.vertices.end());
        result.exact = false;
        return result;
      }
      if (balanced_after_removal(g, pick, max_comp)) {
        result.vertices = pick;
        result.exact = true;
        return result;
      }
      // Next combination.
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  result.exact = true;  // n == removal of everything, never reached
  return result;
}

std::optional<int> TrivialPartitionOracle::block_id(int v,
                                                    QueryLedger& ledger) {
  auto it = block_of_.find(v);
  if (it != block_of_.end()) return it->second;
  auto view = explore_component(g_, ledger, v, k_);
  if (!view) return std::nullopt;
  int id = static_cast<int>(blocks_.size());
  for (int u : view->vertices) block_of_[u] = id;
  blocks_.push_back(std::move(view->vertices));
  return id;
}

SeparatorFn default_separator_fn() {
  return [](const Graph& g, const std::vector<int>& subset) -> std::vector<int> {
    auto comps = subset_components(g, subset);
    const long total = static_cast<long>(subset.size());
    std::size_t largest = 0;
    for (std::size_t i = 1; i < comps.size(); ++i)
      if (comps[i].size() > comps[largest].size()) largest = i;
    if (comps.empty() ||
        3 * static_cast<long>(comps[largest].size()) <= 2 * total)
      return {};

    const auto& big = comps[largest];
    Graph sub = induced_subgraph(g, big);
    std::vector<int> local_sep;
    if (sub.edge_count() == sub.vertex_count() - 1) {
      local_sep.push_back(tree_centroid(sub));
    } else {
      double balance = 2.0 * total / (3.0 * sub.vertex_count());
      local_sep = min_balanced_separator(sub, balance).vertices;
    }
    // Map local ids back to global (induced_subgraph uses sorted order).
    std::vector<int> sorted = big;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> out;
    out.reserve(local_sep.size());
    for (int v : local_sep) out.push_back(sorted[v]);
    return out;
  };
}

namespace {

struct DecomposeState {
  const Graph& g;
  const SeparatorFn& separator;
  double threshold;  // recurse while subset size >= threshold
  int tau;
  long removed_edges = 0;
  int leaves = 0;
  int nodes = 0;
  std::vector<std::vector<int>> blocks;
  std::vector<int> separator_vertices;  // in removal order
  std::unordered_set<int> held_out;     // separator vertices so far

  void recurse(std::vector<int> subset) {
    ++nodes;
    if (static_cast<double>(subset.size()) < threshold) {
      ++leaves;
      for (auto& comp : subset_components(g, subset))
        blocks.push_back(std::move(comp));
      return;
    }
    std::vector<int> sep = separator(g, subset);
    if (static_cast<int>(sep.size()) > tau)
      throw std::runtime_error("decompose: separator larger than tau");
    std::unordered_set<int> sep_set(sep.begin(), sep.end());
    std::vector<int> rest;
    rest.reserve(subset.size());
    for (int v : subset)
      if (!sep_set.count(v)) rest.push_back(v);

    // Deleted edges: alive edges incident to the separator within the
    // subset (separator-internal edges counted once).
    std::unordered_set<int> in(subset.begin(), subset.end());
    for (int v : sep)
      for (int u : g.neighbors(v)) {
        if (!in.count(u) || held_out.count(u)) continue;
        if (sep_set.count(u)) {
          if (v < u) ++removed_edges;
        } else {
          ++removed_edges;
        }
      }

    auto comps = subset_components(g, rest);
    for (const auto& c : comps)
      if (3 * static_cast<long>(c.size()) > 2 * static_cast<long>(subset.size()))
        throw std::runtime_error("decompose: separator not balanced");

    for (int v : sep) {
      separator_vertices.push_back(v);
      held_out.insert(v);
    }
    auto [a, b] = third_split(comps);
    if (a.empty() || b.empty()) {
      // Single component left after separator removal; recurse on it alone.
      if (!a.empty()) recurse(std::move(a));
      if (!b.empty()) recurse(std::move(b));
      return;
    }
    recurse(std::move(a));
    recurse(std::move(b));
  }
};

DecomposeResult finish_decompose(const Graph& g, DecomposeState& state,
                                 int block_limit) {
  DecomposeResult result;
  result.removed_edges = state.removed_edges;
  result.recursion_leaves = state.leaves;
  result.recursion_nodes = state.nodes;

  Partition& p = result.partition;
  p.k = block_limit;
  p.block_of.assign(g.vertex_count(), -1);
  p.blocks = std::move(state.blocks);
  for (std::size_t id = 0; id < p.blocks.size(); ++id)
    for (int v : p.blocks[id]) p.block_of[v] = static_cast<int>(id);

  // Reattach separator vertices: smallest adjacent block that stays within
  // the bound (adding an adjacent vertex preserves connectivity), else a
  // singleton block.
  for (int v : state.separator_vertices) {
    int best = -1;
    for (int u : g.neighbors(v)) {
      int id = p.block_of[u];
      if (id < 0) continue;
      if (static_cast<int>(p.blocks[id].size()) + 1 > block_limit) continue;
      if (best < 0 || p.blocks[id].size() < p.blocks[best].size()) best = id;
    }
    if (best < 0) {
      best = static_cast<int>(p.blocks.size());
      p.blocks.push_back({});
    }
    p.blocks[best].push_back(v);
    std::sort(p.blocks[best].begin(), p.blocks[best].end());
    p.block_of[v] = best;
  }
  p.cut_edges = recount_cut_edges(g, p);
  return result;
}

}  // namespace

DecomposeResult decompose(const Graph& g, double eps, int tau,
                          const SeparatorFn& separator) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("decompose: bad eps");
  if (tau < 1) throw std::invalid_argument("decompose: tau < 1");
  DecomposeState state{g, separator, 6.0 * tau / eps, tau};
  std::vector<int> all(g.vertex_count());
  std::iota(all.begin(), all.end(), 0);
  if (!all.empty()) state.recurse(std::move(all));
  int limit = static_cast<int>(std::floor(6.0 * tau / eps));
  return finish_decompose(g, state, limit);
}

DecomposeResult treewidth_partition(const Graph& g, double eps, int tau) {
  if (eps <= 0 || eps > 1)
    throw std::invalid_argument("treewidth_partition: bad eps");
  const int limit = static_cast<int>(std::floor(30.0 * tau / eps));
  DecomposeResult result;
  Partition& p = result.partition;
  p.k = limit;
  p.block_of.assign(g.vertex_count(), -1);

  for (auto& comp : connected_components(g)) {
    if (static_cast<int>(comp.size()) <= limit) {
      int id = static_cast<int>(p.blocks.size());
      for (int v : comp) p.block_of[v] = id;
      p.blocks.push_back(std::move(comp));
      continue;
    }
    // Refine oversized components with the recursive decomposition.
    std::vector<int> sorted = comp;
    std::sort(sorted.begin(), sorted.end());
    Graph sub = induced_subgraph(g, sorted);
    DecomposeResult inner = decompose(sub, eps / 2.0, tau);
    result.removed_edges += inner.removed_edges;
    result.recursion_leaves += inner.recursion_leaves;
    result.recursion_nodes += inner.recursion_nodes;
    for (const auto& block : inner.partition.blocks) {
      int id = static_cast<int>(p.blocks.size());
      std::vector<int> global;
      global.reserve(block.size());
      for (int v : block) global.push_back(sorted[v]);
      for (int v : global) p.block_of[v] = id;
      p.blocks.push_back(std::move(global));
    }
  }
  p.cut_edges = recount_cut_edges(g, p);
  return result;
}

std::optional<CutEstimate> cut_edge_estimate(const Graph& g,
                                             PartitionOracle& oracle,
                                             QueryLedger& ledger, double eps,
                                             long trials, Rng& rng) {
  if (g.vertex_count() == 0) return CutEstimate{0.0, true, trials};
  long cut = 0;
  for (long i = 0; i < trials; ++i) {
    int u = static_cast<int>(rng.below(g.vertex_count()));
    int slot = static_cast<int>(rng.below(g.degree_bound()));
    auto v = neighbor_query(g, ledger, u, slot);
    if (!v) continue;  // empty slot, counts as non-cut
    auto bu = oracle.block_id(u, ledger);
    auto bv = oracle.block_id(*v, ledger);
    if (!bu || !bv) return std::nullopt;
    if (*bu != *bv) ++cut;
  }
  double fraction = static_cast<double>(cut) / trials;
  return CutEstimate{fraction, fraction <= eps / 4.0, trials};
}

}  // namespace ptlab
