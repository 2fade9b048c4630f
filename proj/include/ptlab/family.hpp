#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ptlab/canonical.hpp"
#include "ptlab/graph.hpp"
#include "ptlab/rng.hpp"

namespace ptlab {

// Side length of the square grid. Gadgets need s >= 12 so that the four
// corner attachments touch pairwise-disjoint vertices; smaller s is only
// legal in gadgetless mode.
struct GridParams {
  int s = 12;
};

// One bit per unit cell, cell-major order (row i, then column j, i.e.
// bit index i*(s-1)+j for the cell with lower-left corner (i,j)).
// Bit 0 selects the up diagonal, bit 1 the down diagonal.
struct DiagonalCode {
  std::vector<std::uint8_t> bits;

  int length() const { return static_cast<int>(bits.size()); }
  std::string to_string() const;
  static DiagonalCode from_string(const std::string& s);
  static DiagonalCode from_index(std::uint64_t index, int length);
};

int hamming(const DiagonalCode& a, const DiagonalCode& b);

struct SuitableFamily {
  std::vector<Graph> members;         // all on t vertices
  std::vector<CanonicalForm> forms;   // pairwise distinct
  std::vector<DiagonalCode> codes;    // grid families only
  std::string kind;                   // "grid" or "tree"
  int s = 0;                          // grid side, 0 for trees
  int t = 0;                          // member vertex count
  int degree_bound = 0;
  double epsilon = 0.0;
  int radius = 0;                     // grid families: Hamming carving radius
  int min_pairwise_hamming = -1;      // certified, -1 when not applicable
  int min_pairwise_edits = -1;        // certified exact, -1 until computed
  int dropped_isomorphic = 0;         // members removed by the form dedupe
  bool gadgetless = false;            // plain grid, no corner gadgets
  bool pool_exhaustive = true;
  std::uint64_t seed = 0;
};

// The corner-gadget base graph of side s (s >= 12): all grid edges plus,
// at each corner, edges to the two boundary vertices exactly 2, 3, 4 and
// 5 hops away along the incident boundary lines.
Graph build_base_graph(GridParams p);

Graph build_plain_grid(int s);  // grid edges only, any s >= 2

// Base graph (or plain grid when gadgetless) plus one diagonal per unit
// cell as selected by the code. Degree bound 8.
Graph build_diagonal_graph(GridParams p, const DiagonalCode& code,
                           bool gadgetless = false);

std::vector<DiagonalCode> enumerate_codes(int s);  // all 2^(s-1)^2 codes
std::vector<DiagonalCode> sample_codes(int s, std::size_t count, Rng& rng);

// Greedy ball carving over the code pool: keep a code iff it is more than
// `radius` Hamming away from every kept code. Members whose canonical form
// duplicates an earlier member (possible in gadgetless mode, where grid
// symmetries can make distinct codes isomorphic) are dropped afterwards;
// the count is recorded in dropped_isomorphic.
SuitableFamily take_scoops(GridParams p, const std::vector<DiagonalCode>& pool,
                           int radius, bool gadgetless, bool pool_exhaustive,
                           std::uint64_t seed);

// Smallest pairwise Hamming distance among member codes (grid families).
int code_min_hamming(const SuitableFamily& f);

// Exact smallest pairwise edit distance among members, by branch and
// bound over bijections with each pair capped at the running minimum.
// Needed because gadgetless grid symmetries can realize distinct codes
// within far fewer edits than their Hamming distance suggests. Stores
// the result in f.min_pairwise_edits and returns it. Feasible for
// t <= 16 or so; no-ops (returns the stored value) on singleton families.
int certify_min_pairwise_edits(SuitableFamily& f);

struct SeparatorCheck {
  int third_balanced = 0;    // (1/3, 2/3) minimum balanced separator
  int extreme_balanced = 0;  // (0.01/d, 1-0.01/d) version
  bool exact = false;
};

struct SuitabilityReport {
  double min_pairwise_distance_lb = 0.0;  // normalized by d*t
  bool pairwise_distance_required = false;  // only when t > 2/eps
  bool pairwise_ok = false;
  bool forms_distinct = false;
  std::vector<SeparatorCheck> separators;  // one per member
  double separator_threshold = 0.0;        // c * eps * t
  bool separators_ok = false;
  std::string to_text() const;
};

// separator_budget caps the exhaustive separator search per member; past
// it the greedy fallback takes over and the check is marked inexact.
SuitabilityReport check_suitable(const SuitableFamily& f, double eps, int d,
                                 double separator_constant = 1.0,
                                 std::uint64_t separator_budget = 1u << 22);

struct HardInstancePair {
  Graph yes_graph;
  Graph no_graph;
  std::vector<int> half_set;  // member indices doubled in no_graph
  std::uint64_t seed = 0;
};

// Relabeled union of `copies` copies of every member, padded with isolated
// vertices up to pad_to when given.
Graph build_yes_instance(const SuitableFamily& f, int copies, Rng& rng,
                         int pad_to = 0);

// Uniform half index set R, |R| = |F|/2; no_graph carries 2*copies copies
// of each R-member. Requires even |F|.
HardInstancePair build_no_instance(const SuitableFamily& f, int copies,
                                   Rng& rng);

// Matching-style lower bound on dist(yes, no), normalized by d*n:
// components are identified with members by canonical form and each
// leftover component is charged the cheapest certified member-pair
// distance. Gadgeted grids charge the code Hamming distance (corner
// gadgets pin every vertex, so differing cells force distinct edits);
// gadgetless grids charge min_pairwise_edits when certified, else 1
// (distinct canonical forms). The bound assumes edits are charged per
// component, matching how the hard instances are assembled.
double certified_pair_farness(const SuitableFamily& f,
                              const HardInstancePair& pair);

// Archive: directory with manifest.txt plus member_###.graph files.
void save_family(const SuitableFamily& f, const std::string& dir);
SuitableFamily load_family(const std::string& dir);

}  // namespace ptlab
