#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptlab/graph.hpp"
#include "ptlab/rng.hpp"

namespace ptlab {

// Partition of the vertex set into connected blocks of size at most k.
struct Partition {
  std::vector<int> block_of;            // vertex id -> block id
  std::vector<std::vector<int>> blocks; // block id -> ascending vertex ids
  long cut_edges = 0;
  int k = 0;  // size bound the blocks are promised to respect (0 = none)
};

long recount_cut_edges(const Graph& g, const Partition& p);

// Checks cover, disjointness, connectivity, the size bound and the cut
// count. On failure optionally reports a reason through `why`.
bool validate_partition(const Graph& g, const Partition& p,
                        std::string* why = nullptr);

// One line per block "id: v1 v2 ...", then "cut_edges: c" and "k: k".
std::string partition_to_text(const Partition& p);

struct SeparatorResult {
  std::vector<int> vertices;  // ascending
  double balance = 0.0;       // components after removal are <= balance * n
  bool exact = true;          // false when the subset budget forced a fallback
};

// Smallest vertex set whose removal leaves every component at most
// balance * n vertices. Exhaustive over subsets by increasing size; after
// `subset_budget` candidate subsets it falls back to a greedy heuristic.
SeparatorResult min_balanced_separator(const Graph& g, double balance,
                                       std::uint64_t subset_budget = 1u << 25);

// Local access to some partition: block ids are discovered lazily and
// queries are charged to the caller's ledger.
class PartitionOracle {
 public:
  virtual ~PartitionOracle() = default;
  // Block id of v, or nullopt when the oracle cannot answer within its
  // locality budget.
  virtual std::optional<int> block_id(int v, QueryLedger& ledger) = 0;
  virtual const std::vector<int>& block_members(int id) const = 0;
};

// Blocks are the connected components, explored up to `k` vertices each.
// A component larger than k makes the oracle refuse (nullopt).
class TrivialPartitionOracle : public PartitionOracle {
 public:
  TrivialPartitionOracle(const Graph& g, int k) : g_(g), k_(k) {}

  std::optional<int> block_id(int v, QueryLedger& ledger) override;
  const std::vector<int>& block_members(int id) const override {
    return blocks_.at(id);
  }

 private:
  const Graph& g_;
  int k_;
  std::unordered_map<int, int> block_of_;
  std::vector<std::vector<int>> blocks_;
};

// Oracle over a fully materialized partition; never refuses.
class FixedPartitionOracle : public PartitionOracle {
 public:
  explicit FixedPartitionOracle(Partition p) : p_(std::move(p)) {}

  std::optional<int> block_id(int v, QueryLedger& ledger) override {
    (void)ledger;
    return p_.block_of.at(v);
  }
  const std::vector<int>& block_members(int id) const override {
    return p_.blocks.at(id);
  }
  const Partition& partition() const { return p_; }

 private:
  Partition p_;
};

// Given the whole graph and a vertex subset (with only the edges inside
// the subset considered alive), returns a separator: removing it must
// leave components of at most two thirds of the subset. An empty result
// is valid when the subset is already that fragmented.
using SeparatorFn =
    std::function<std::vector<int>(const Graph&, const std::vector<int>&)>;

// Empty set when the largest component is already at most two thirds of
// the subset; the centroid for tree components; otherwise an exhaustive
// minimum balanced separator of the largest component.
SeparatorFn default_separator_fn();

struct DecomposeResult {
  Partition partition;
  long removed_edges = 0;   // alive edges deleted alongside separators
  int recursion_leaves = 0; // subsets that fell below the size threshold
  int recursion_nodes = 0;
};

// Recursive separator decomposition. Subsets of size below 6*tau/eps stop
// and their components become blocks; larger subsets give up a separator
// of at most tau vertices (contract-checked, violations throw) and split
// into two sides of at least a third each. Separator vertices rejoin the
// smallest adjacent block that stays within the bound, else become
// singletons. Blocks end up at most floor(6*tau/eps).
DecomposeResult decompose(const Graph& g, double eps, int tau,
                          const SeparatorFn& separator = default_separator_fn());

// Coarse stage: connected components of size at most floor(30*tau/eps)
// are kept whole; oversized ones are refined by decompose at eps/2.
DecomposeResult treewidth_partition(const Graph& g, double eps, int tau);

struct CutEstimate {
  double fraction = 0.0;  // estimated fraction of cut slots
  bool accept = false;    // fraction <= eps / 4
  long trials = 0;
};

// Samples uniform (vertex, slot) pairs and asks the oracle whether the
// endpoints share a block. Empty slots count as non-cut. Returns nullopt
// if the oracle refuses any lookup.
std::optional<CutEstimate> cut_edge_estimate(const Graph& g,
                                             PartitionOracle& oracle,
                                             QueryLedger& ledger, double eps,
                                             long trials, Rng& rng);

}  // namespace ptlab
