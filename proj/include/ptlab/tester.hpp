#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ptlab/canonical.hpp"
#include "ptlab/graph.hpp"
#include "ptlab/partition.hpp"
#include "ptlab/rng.hpp"

namespace ptlab {

// Normalized component histogram: counts[f] is (number of components with
// canonical form f) / n. Two graphs on the same number of vertices are
// isomorphic exactly when their count vectors coincide.
struct CountVector {
  std::unordered_map<CanonicalForm, double, CanonicalFormHash> counts;
  long total_vertices = 0;
};

double l1_distance(const CountVector& a, const CountVector& b);

CountVector exact_count_vector(const Graph& g);

// Number of samples for which the weighted estimator's total L1 error
// stays below `accuracy` with failure probability 1/(2B), union bounded
// over B coordinates (Hoeffding; each sample's weight lies in
// [0, sample_range], which is 1/t when every component has >= t vertices).
long count_vector_samples(double accuracy, long coordinate_bound,
                          double sample_range = 1.0);

// Estimates the count vector of the oracle's block structure by sampling
// uniform vertices and weighting each hit by 1/|block|. Block forms are
// memoized, so repeated hits cost no further exploration. Returns nullopt
// when the oracle refuses a lookup.
std::optional<CountVector> estimate_count_vector(const Graph& g,
                                                 PartitionOracle& oracle,
                                                 QueryLedger& ledger,
                                                 long samples, Rng& rng);

struct TesterParams {
  double eps = 0.1;
  int k = 0;           // block size bound of the promised partition
  int d = 0;           // degree bound
  long phase1_trials = 0;  // 0: ceil(48 / eps)
  long phase2_samples = 0; // 0: from count_vector_samples
  int seed_retries = 3;    // oracle refusals tolerated before rejecting
};

struct TesterVerdict {
  bool accept = false;
  int phase = 0;  // phase that decided: 1 = cut estimate, 2 = count vector
  std::uint64_t queries_used = 0;
  double cut_fraction = 0.0;
  double count_distance = 0.0;  // L1 to the target, phase 2 only
};

// Two-phase tester for "G is isomorphic to the graph with count vector
// `target`": phase 1 checks that few sampled slots cross block boundaries
// of the trivial (component) partition capped at k, phase 2 compares the
// estimated count vector against the target with radius eps / (2 k d).
TesterVerdict run_property_tester(const Graph& g, const CountVector& target,
                                  const TesterParams& params,
                                  std::uint64_t seed);

// Draws uniform vertices and reports the canonical form of the containing
// component (explored through the ledger, capped). Components are memoized
// across draws.
class ComponentSampler {
 public:
  ComponentSampler(const Graph& g, int cap) : g_(g), cap_(cap) {}

  // Form of a uniform vertex's component; with ignore_isolated, isolated
  // vertices are rejected and redrawn. Nullopt on cap overflow or when
  // rejection finds no non-isolated vertex in 10 * n attempts.
  std::optional<CanonicalForm> sample(Rng& rng, QueryLedger& ledger,
                                      bool ignore_isolated);

  // True when every non-isolated component seen so far has the same size.
  bool sizes_uniform() const { return sizes_uniform_; }

 private:
  const Graph& g_;
  int cap_;
  std::unordered_map<int, int> form_of_vertex_;  // vertex -> form index
  std::vector<CanonicalForm> forms_;
  std::vector<int> form_sizes_;
  int uniform_size_ = 0;  // size of the first non-isolated component seen
  bool sizes_uniform_ = true;
};

struct CollisionDecision {
  long samples = 0;
  long collisions = 0;     // sum over values of C(multiplicity, 2)
  double threshold = 0.0;  // 1.5 * C(q, 2) / family_size
  bool says_doubled = false;
};

// Collision count against the midpoint between the expectation under a
// uniform draw from `family_size` values (C(q,2)/|F|) and under a uniform
// draw from half of them (2 C(q,2)/|F|).
CollisionDecision collision_distinguish(
    const std::vector<std::uint64_t>& sample_ids, std::size_t family_size);
CollisionDecision collision_distinguish(
    const std::vector<CanonicalForm>& samples, std::size_t family_size);

struct ComplexityCell {
  long q = 0;
  int successes = 0;
  int trials = 0;
  double rate = 0.0;
  double wilson_low = 0.0;  // 95% Wilson lower bound on the rate
};

struct ComplexityPoint {
  std::size_t family_size = 0;
  long q_star = -1;  // least sampled q with rate >= target, -1 if none
  std::vector<ComplexityCell> cells;  // ascending q
  bool monotone = true;  // false if a larger q scored clearly worse
};

// Empirical sample complexity of telling a uniform member index from a
// uniform index out of a random half set, by collision counting. Probes a
// doubling ladder of q values, then bisects for the least passing q. Each
// trial picks a fresh world (fair coin) and half set.
ComplexityPoint empirical_sample_complexity(std::size_t family_size,
                                            int trials, std::uint64_t seed,
                                            long q_cap = 1 << 20,
                                            double target_rate = 2.0 / 3.0);

struct EqualizeResult {
  Graph a;
  Graph b;
  long edits = 0;  // edge deletions applied across both graphs
};

// Deletes the edges of surplus components on either side until the two
// count vectors coincide (surpluses decay to isolated vertices, which
// match automatically since the vertex totals agree). The edit count
// certifies dist(a, b) <= edits / (d * n).
EqualizeResult equalize_count_vectors(const Graph& a, const Graph& b);

}  // namespace ptlab
