#include <doctest.h>

#include <cmath>

#include "ptlab/family.hpp"
#include "ptlab/tester.hpp"

using namespace ptlab;

namespace {

SuitableFamily small_family() {
  return take_scoops(GridParams{4}, enumerate_codes(4), 3, true, true, 1);
}

}  // namespace

TEST_CASE("exact count vector histograms components") {
  Graph tri = Graph::from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  Graph g = disjoint_union({{&tri, 3}});
  auto cv = exact_count_vector(g);
  REQUIRE(cv.counts.size() == 1);
  CHECK(cv.counts.begin()->second == doctest::Approx(3.0 / 9.0));

  // Normalized l1 mass lies in [1/k, 1] for a partition into blocks <= k.
  double mass = 0.0;
  for (const auto& [form, value] : cv.counts) mass += value;
  CHECK(mass >= 1.0 / 3.0);
  CHECK(mass <= 1.0);
}

TEST_CASE("l1 distance handles disjoint supports") {
  Graph tri = Graph::from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  Graph p3 = Graph::from_edges(3, 2, {{0, 1}, {1, 2}});
  auto a = exact_count_vector(tri);
  auto b = exact_count_vector(p3);
  CHECK(l1_distance(a, a) == 0.0);
  CHECK(l1_distance(a, b) == doctest::Approx(2.0 / 3.0));
  CHECK(l1_distance(a, b) == l1_distance(b, a));
}

TEST_CASE("estimated count vector tracks the exact one") {
  auto f = small_family();
  Rng build(3);
  Graph yes = build_yes_instance(f, 5, build);
  auto exact = exact_count_vector(yes);

  TrivialPartitionOracle oracle(yes, f.t);
  QueryLedger ledger;
  Rng rng(77);
  long q = count_vector_samples(0.02, 13, 1.0 / f.t);
  auto est = estimate_count_vector(yes, oracle, ledger, q, rng);
  REQUIRE(est.has_value());
  CHECK(l1_distance(*est, exact) < 0.02);
}

TEST_CASE("single-form graphs concentrate the estimate on one bucket") {
  Graph tri = Graph::from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  Graph g = disjoint_union({{&tri, 20}});
  TrivialPartitionOracle oracle(g, 3);
  QueryLedger ledger;
  Rng rng(4);
  auto est = estimate_count_vector(g, oracle, ledger, 500, rng);
  REQUIRE(est.has_value());
  REQUIRE(est->counts.size() == 1);
  CHECK(est->counts.begin()->second == doctest::Approx(20.0 / 60.0));
}

TEST_CASE("tester accepts yes instances and rejects far ones") {
  auto f = small_family();
  Rng build(9);
  Graph yes = build_yes_instance(f, 4, build);
  auto pair = build_no_instance(f, 4, build);
  auto target = exact_count_vector(yes);

  TesterParams params;
  params.eps = 0.25;
  params.k = f.t;
  params.d = f.degree_bound;

  int yes_accepts = 0, no_rejects = 0;
  const int runs = 12;
  for (int i = 0; i < runs; ++i) {
    Graph relabeled = random_relabel(yes, build);
    if (run_property_tester(relabeled, target, params, 100 + i).accept)
      ++yes_accepts;
    if (!run_property_tester(pair.no_graph, target, params, 200 + i).accept)
      ++no_rejects;
  }
  CHECK(yes_accepts * 3 >= runs * 2);
  CHECK(no_rejects * 3 >= runs * 2);
}

TEST_CASE("oversized components reject without reaching phase 2") {
  // A path longer than k cannot be explored within the block bound.
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < 20; ++v) edges.emplace_back(v, v + 1);
  Graph path = Graph::from_edges(20, 2, edges);
  Graph tri = Graph::from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  auto target = exact_count_vector(tri);

  TesterParams params;
  params.eps = 0.25;
  params.k = 5;
  params.d = 2;
  auto verdict = run_property_tester(path, target, params, 1);
  CHECK(!verdict.accept);
  CHECK(verdict.phase == 1);
}

TEST_CASE("tester verdict reports its query ledger") {
  auto f = small_family();
  Rng build(15);
  Graph yes = build_yes_instance(f, 2, build);
  auto target = exact_count_vector(yes);
  TesterParams params;
  params.eps = 0.25;
  params.k = f.t;
  params.d = f.degree_bound;
  params.phase2_samples = 2000;
  auto verdict = run_property_tester(yes, target, params, 3);
  CHECK(verdict.queries_used > 0);
  // Phase 1 plus capped exploration of sampled blocks.
  std::uint64_t cap =
      static_cast<std::uint64_t>(std::ceil(48.0 / 0.25)) * 3 +
      2000ull * params.d * (params.k + 1);
  CHECK(verdict.queries_used <= cap);
}

TEST_CASE("component sampler draws uniform components") {
  auto f = small_family();
  Rng build(21);
  Graph yes = build_yes_instance(f, 10, build);
  ComponentSampler sampler(yes, f.t);
  QueryLedger ledger;
  Rng rng(5);

  std::unordered_map<CanonicalForm, long, CanonicalFormHash> tally;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    auto form = sampler.sample(rng, ledger, false);
    REQUIRE(form.has_value());
    ++tally[*form];
  }
  CHECK(sampler.sizes_uniform());
  REQUIRE(tally.size() == f.members.size());

  // Chi-square against uniform over 12 forms: df = 11, mean 11, sd
  // sqrt(22); 35 is beyond four sigma.
  double expected = double(draws) / tally.size();
  double chi = 0.0;
  for (const auto& [form, count] : tally)
    chi += (count - expected) * (count - expected) / expected;
  CHECK(chi < 35.0);
}

TEST_CASE("sampler skips padding when asked") {
  Graph tri = Graph::from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  Graph padded = disjoint_union({{&tri, 2}});
  Graph with_pad(10, 2);
  for (auto [u, v] : padded.edges()) with_pad.add_edge(u, v);
  ComponentSampler sampler(with_pad, 3);
  QueryLedger ledger;
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    auto form = sampler.sample(rng, ledger, true);
    REQUIRE(form.has_value());
    CHECK(form->n_vertices == 3);
  }
}

TEST_CASE("collision rule at |F|=12, q=2 fires only on a collision") {
  CollisionDecision hit = collision_distinguish(
      std::vector<std::uint64_t>{4, 4}, 12);
  CHECK(hit.collisions == 1);
  CHECK(hit.threshold == doctest::Approx(1.5 / 12.0));
  CHECK(hit.says_doubled);

  CollisionDecision miss = collision_distinguish(
      std::vector<std::uint64_t>{4, 5}, 12);
  CHECK(miss.collisions == 0);
  CHECK(!miss.says_doubled);
}

TEST_CASE("distinguisher depends only on canonical forms") {
  auto f = small_family();
  Rng build(33);
  Graph yes = build_yes_instance(f, 3, build);
  Graph relabeled = random_relabel(yes, build);
  // Same component multiset, so identical forms feed the decision.
  std::vector<CanonicalForm> a, b;
  for (const auto& comp : connected_components(yes))
    a.push_back(canonical_form(yes, comp));
  for (const auto& comp : connected_components(relabeled))
    b.push_back(canonical_form(relabeled, comp));
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  REQUIRE(a.size() == b.size());
  CHECK(std::equal(a.begin(), a.end(), b.begin()));
  auto da = collision_distinguish(a, f.members.size());
  auto db = collision_distinguish(b, f.members.size());
  CHECK(da.collisions == db.collisions);
  CHECK(da.says_doubled == db.says_doubled);
}

TEST_CASE("sample complexity grows with the family size") {
  CHECK_THROWS(empirical_sample_complexity(1, 100, 1));  // degenerate
  auto small = empirical_sample_complexity(2, 200, 5);
  auto large = empirical_sample_complexity(12, 200, 5);
  REQUIRE(small.q_star > 0);
  REQUIRE(large.q_star > 0);
  CHECK(large.q_star > small.q_star);
  for (const auto& cell : small.cells) CHECK(cell.trials == 200);
}

TEST_CASE("equalization realizes the claimed edit bound") {
  Graph tri = Graph::from_edges(3, 2, {{0, 1}, {1, 2}, {0, 2}});
  Graph a = disjoint_union({{&tri, 3}});
  Graph b(9, 2);
  b.add_edge(0, 1);
  b.add_edge(1, 2);
  b.add_edge(0, 2);

  auto same = equalize_count_vectors(a, a);
  CHECK(same.edits == 0);

  auto result = equalize_count_vectors(a, b);
  CHECK(l1_distance(exact_count_vector(result.a),
                    exact_count_vector(result.b)) == 0.0);
  // Absolute count difference: 2 triangles + 6 singletons = 8; bound 8*k*d.
  CHECK(result.edits == 6);
  CHECK(result.edits <= 8 * 3 * 2);
}

TEST_CASE("equalization bound holds on random component unions") {
  Rng rng(55);
  for (int trial = 0; trial < 25; ++trial) {
    auto random_union = [&]() {
      Graph g(30, 3);
      int base = 0;
      while (base + 3 <= 30) {
        int size = 2 + static_cast<int>(rng.below(2));
        for (int v = 0; v + 1 < size; ++v) g.add_edge(base + v, base + v + 1);
        if (size == 3 && rng.coin()) g.add_edge(base, base + 2);
        base += size;
      }
      return g;
    };
    Graph a = random_union(), b = random_union();
    auto ca = exact_count_vector(a);
    auto cb = exact_count_vector(b);
    double delta_abs = l1_distance(ca, cb) * 30;  // unnormalize
    auto result = equalize_count_vectors(a, b);
    CHECK(l1_distance(exact_count_vector(result.a),
                      exact_count_vector(result.b)) ==
          doctest::Approx(0.0));
    CHECK(result.edits <= delta_abs * 3 * 3);
  }
}
