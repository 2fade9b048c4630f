#include <doctest.h>

#include <filesystem>
#include <set>

#include "../support/iso.hpp"
#include "ptlab/canonical.hpp"
#include "ptlab/family.hpp"
#include "ptlab/tester.hpp"

using namespace ptlab;

TEST_CASE("base graph at s=12 has the documented shape") {
  Graph g = build_base_graph(GridParams{12});
  CHECK(g.vertex_count() == 144);

  // Independent edge enumeration: grid edges plus two gadget edges per
  // corner.
  long grid_edges = 2 * 12 * 11;
  CHECK(g.edge_count() == grid_edges + 8);

  // Corner (0,0): grid neighbors (0,1), (1,0) plus gadget ends (0,2), (2,0).
  auto id = [](int i, int j) { return i * 12 + j; };
  std::vector<int> expected = {id(0, 1), id(0, 2), id(1, 0), id(2, 0)};
  std::vector<int> actual = g.neighbors(id(0, 0));
  std::sort(expected.begin(), expected.end());
  CHECK(actual == expected);

  CHECK_THROWS(build_base_graph(GridParams{11}));
}

TEST_CASE("diagonal graphs add one diagonal per cell, degree at most 8") {
  GridParams p{12};
  int cells = 11 * 11;
  DiagonalCode zeros = DiagonalCode::from_index(0, cells);
  Graph g = build_diagonal_graph(p, zeros);
  CHECK(g.edge_count() == build_base_graph(p).edge_count() + cells);
  // All-zero code: every cell carries its up diagonal.
  CHECK(g.has_edge(0, 13));

  Rng rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    DiagonalCode code = sample_codes(12, 1, rng)[0];
    Graph h = build_diagonal_graph(p, code);
    int max_degree = 0;
    for (int v = 0; v < h.vertex_count(); ++v)
      max_degree = std::max(max_degree, h.degree(v));
    CHECK(max_degree <= 8);
    CHECK(h.degree_bound() == 8);
  }
}

TEST_CASE("diagonal code strings round-trip") {
  DiagonalCode c = DiagonalCode::from_index(0b1101, 4);
  CHECK(DiagonalCode::from_string(c.to_string()).bits == c.bits);
  CHECK(hamming(c, DiagonalCode::from_index(0b0101, 4)) == 1);
}

TEST_CASE("take_scoops carves a pairwise-far family") {
  GridParams p{4};
  auto pool = enumerate_codes(4);
  CHECK(pool.size() == 512);

  SuitableFamily singleton = take_scoops(p, {pool[3]}, 2, true, false, 1);
  CHECK(singleton.members.size() == 1);

  SuitableFamily f = take_scoops(p, pool, 2, true, true, 1);
  CHECK(f.members.size() >= 12);  // 512 / (1 + 9 + 36)
  for (std::size_t i = 0; i < f.codes.size(); ++i)
    for (std::size_t j = i + 1; j < f.codes.size(); ++j)
      CHECK(hamming(f.codes[i], f.codes[j]) > 2);
  CHECK(f.min_pairwise_hamming > 2);

  std::set<std::string> forms;
  for (const auto& form : f.forms) forms.insert(form.code);
  CHECK(forms.size() == f.members.size());

  CHECK_THROWS(take_scoops(p, {}, 2, true, true, 1));
}

TEST_CASE("check_suitable rejects a family of two identical graphs") {
  GridParams p{4};
  DiagonalCode c = DiagonalCode::from_index(7, 9);
  Graph g = build_diagonal_graph(p, c, true);
  SuitableFamily f;
  f.members = {g, g};
  f.forms = {canonical_form(g), canonical_form(g)};
  f.codes = {c, c};
  f.kind = "grid";
  f.s = 4;
  f.t = 16;
  f.degree_bound = 8;
  f.epsilon = 0.25;
  auto report = check_suitable(f, 0.25, 8);
  CHECK(!report.pairwise_ok);
  CHECK(!report.forms_distinct);
}

TEST_CASE("yes instance is m relabeled copies of every member") {
  auto pool = enumerate_codes(4);
  SuitableFamily f = take_scoops(GridParams{4}, pool, 3, true, true, 1);
  Rng rng(11);
  int m = 3;
  Graph yes = build_yes_instance(f, m, rng);
  CHECK(yes.vertex_count() ==
        m * f.t * static_cast<int>(f.members.size()));

  auto cv = exact_count_vector(yes);
  CHECK(cv.counts.size() == f.members.size());
  for (const auto& [form, value] : cv.counts)
    CHECK(value == doctest::Approx(double(m) / yes.vertex_count()));

  Graph padded = build_yes_instance(f, m, rng, yes.vertex_count() + 5);
  CHECK(padded.vertex_count() == yes.vertex_count() + 5);
}

TEST_CASE("no instance doubles a uniform half set") {
  auto pool = enumerate_codes(4);
  SuitableFamily f = take_scoops(GridParams{4}, pool, 3, true, true, 1);
  REQUIRE(f.members.size() % 2 == 0);
  Rng rng(17);
  int m = 2;
  auto pair = build_no_instance(f, m, rng);
  CHECK(pair.half_set.size() == f.members.size() / 2);
  CHECK(pair.no_graph.vertex_count() == pair.yes_graph.vertex_count());

  auto cv = exact_count_vector(pair.no_graph);
  CHECK(cv.counts.size() == f.members.size() / 2);
  for (const auto& [form, value] : cv.counts)
    CHECK(value ==
          doctest::Approx(double(2 * m) / pair.no_graph.vertex_count()));
}

TEST_CASE("certified farness covers the configured tester parameter") {
  auto pool = enumerate_codes(4);
  SuitableFamily f = take_scoops(GridParams{4}, pool, 3, true, true, 1);
  Rng rng(23);
  auto pair = build_no_instance(f, 10, rng);

  // Without certified edits, gadgetless members only carry the
  // distinct-forms floor of one edit per leftover component.
  double floor_farness = certified_pair_farness(f, pair);
  CHECK(floor_farness == doctest::Approx(1.0 / (2.0 * 8 * 16)));

  int minp = certify_min_pairwise_edits(f);
  CHECK(minp >= 1);
  CHECK(minp <= 2 * f.min_pairwise_hamming);  // identity mapping bound
  double farness = certified_pair_farness(f, pair);
  CHECK(farness == doctest::Approx(minp / (2.0 * 8 * 16)));
  // The tester's default farness parameter is eps / 32.
  CHECK(farness >= 0.25 / 32.0);
}

TEST_CASE("family archive round-trips through disk") {
  auto pool = enumerate_codes(4);
  SuitableFamily f = take_scoops(GridParams{4}, pool, 3, true, true, 9);
  auto dir = std::filesystem::temp_directory_path() / "ptlab_fam_test";
  std::filesystem::remove_all(dir);
  save_family(f, dir.string());
  SuitableFamily back = load_family(dir.string());
  REQUIRE(back.members.size() == f.members.size());
  CHECK(back.t == f.t);
  CHECK(back.s == f.s);
  CHECK(back.gadgetless == f.gadgetless);
  CHECK(back.min_pairwise_edits == f.min_pairwise_edits);
  CHECK(back.radius == f.radius);
  CHECK(back.seed == f.seed);
  CHECK(back.min_pairwise_hamming == f.min_pairwise_hamming);
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    CHECK(back.members[i].to_text() == f.members[i].to_text());
    CHECK(back.forms[i] == f.forms[i]);
    CHECK(back.codes[i].bits == f.codes[i].bits);
  }
  std::filesystem::remove_all(dir);
}
