// Experiment driver: builds hard-instance families, certifies their
// suitability, runs the two-phase tester, sweeps the collision
// distinguisher and demos the separator decomposition. All randomness is
// seeded; rerunning a subcommand with the same flags writes byte-identical
// output files.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ptlab/edit_distance.hpp"
#include "ptlab/family.hpp"
#include "ptlab/partition.hpp"
#include "ptlab/tester.hpp"
#include "ptlab/trees.hpp"

namespace {

constexpr const char* kVersion = "ptlab 1.0.0";
constexpr const char* kOutEnv = "PTLAB_OUT";

std::string resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutEnv)) return env;
  return ".";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? "."
                                          : path.parent_path().string());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

struct Report {
  std::ostringstream body;

  Report(const std::string& subcommand,
         const std::vector<std::pair<std::string, std::string>>& config) {
    body << "# " << kVersion << "\n# subcommand: " << subcommand << '\n';
    for (const auto& [k, v] : config) body << "# " << k << ": " << v << '\n';
  }
};

double wilson_low(int successes, int trials) {
  if (trials == 0) return 0.0;
  const double z = 1.959963984540054;
  double p = static_cast<double>(successes) / trials;
  double z2 = z * z;
  double center = p + z2 / (2.0 * trials);
  double margin =
      z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials));
  return (center - margin) / (1.0 + z2 / trials);
}

double wilson_high(int successes, int trials) {
  if (trials == 0) return 1.0;
  const double z = 1.959963984540054;
  double p = static_cast<double>(successes) / trials;
  double z2 = z * z;
  double center = p + z2 / (2.0 * trials);
  double margin =
      z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials));
  return (center + margin) / (1.0 + z2 / trials);
}

// True when no pair of vertex removals disconnects the graph.
bool is_three_connected(const ptlab::Graph& g) {
  const int n = g.vertex_count();
  if (n < 4 || !ptlab::is_connected(g)) return false;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> rest;
      rest.reserve(n - 2);
      for (int v = 0; v < n; ++v)
        if (v != a && v != b) rest.push_back(v);
      if (!ptlab::is_connected(ptlab::induced_subgraph(g, rest))) return false;
    }
  return true;
}

// Sorted hop distances from a corner to its gadget-edge endpoints; the
// four corners must not share a signature.
std::vector<std::vector<int>> corner_signatures(const ptlab::Graph& g,
                                                int s) {
  auto grid_id = [s](int i, int j) { return i * s + j; };
  std::vector<int> corners = {grid_id(0, 0), grid_id(0, s - 1),
                              grid_id(s - 1, s - 1), grid_id(s - 1, 0)};
  std::vector<std::vector<int>> sigs;
  for (int c : corners) {
    int ci = c / s, cj = c % s;
    std::vector<int> sig;
    for (int u : g.neighbors(c)) {
      int hops = std::abs(u / s - ci) + std::abs(u % s - cj);
      if (hops > 1) sig.push_back(hops);
    }
    std::sort(sig.begin(), sig.end());
    sigs.push_back(std::move(sig));
  }
  return sigs;
}

// Runs `trials` jobs over a small worker pool; results land in slot order,
// so the output is identical for any job count.
template <typename Fn>
std::vector<bool> run_trials(int trials, int jobs, Fn&& trial) {
  std::vector<bool> results(trials);
  if (jobs < 1) jobs = 1;
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= trials) return;
        results[i] = trial(i);
      }
    });
  for (auto& th : pool) th.join();
  return results;
}

int cmd_family_build(int s, int radius, bool gadgetless, long sample_pool,
                     double eps, std::uint64_t seed, const std::string& out,
                     bool check_3conn, bool certify_edits) {
  ptlab::GridParams p{s};
  std::vector<ptlab::DiagonalCode> pool;
  bool exhaustive = sample_pool <= 0;
  ptlab::Rng rng(seed);
  if (exhaustive) {
    pool = ptlab::enumerate_codes(s);
  } else {
    pool = ptlab::sample_codes(s, static_cast<std::size_t>(sample_pool), rng);
  }
  if (radius <= 0)
    radius = static_cast<int>(std::ceil(0.16 * s * s));
  auto family =
      ptlab::take_scoops(p, pool, radius, gadgetless, exhaustive, seed);
  if (certify_edits) {
    if (family.t > 16)
      throw std::invalid_argument(
          "--certify-edits: exact pairwise search is limited to t <= 16");
    ptlab::certify_min_pairwise_edits(family);
  }

  auto suit = ptlab::check_suitable(family, eps, family.degree_bound, 1.0,
                                    s <= 6 ? (1u << 22) : 4096u);

  Report report("family-build",
                {{"s", std::to_string(s)},
                 {"radius", std::to_string(radius)},
                 {"gadgetless", gadgetless ? "1" : "0"},
                 {"pool", exhaustive ? "exhaustive"
                                     : std::to_string(sample_pool)},
                 {"eps", fmt(eps)},
                 {"seed", std::to_string(seed)}});
  report.body << "members: " << family.members.size() << '\n'
              << "t: " << family.t << '\n'
              << "min_pairwise_hamming: " << family.min_pairwise_hamming
              << '\n'
              << "min_pairwise_edits: " << family.min_pairwise_edits << '\n'
              << "dropped_isomorphic: " << family.dropped_isomorphic << '\n'
              << suit.to_text();

  bool certified = suit.forms_distinct && suit.pairwise_ok &&
                   family.min_pairwise_hamming > radius;
  if (check_3conn) {
    if (gadgetless || s < 12) {
      report.body << "three_connected: skipped (needs gadgets, s >= 12)\n";
    } else {
      auto base = ptlab::build_base_graph(p);
      bool three = is_three_connected(base);
      auto sigs = corner_signatures(base, s);
      bool distinct = true;
      for (std::size_t i = 0; i < sigs.size(); ++i)
        for (std::size_t j = i + 1; j < sigs.size(); ++j)
          if (sigs[i] == sigs[j]) distinct = false;
      report.body << "three_connected: " << (three ? "yes" : "no") << '\n'
                  << "corner_signatures_distinct: "
                  << (distinct ? "yes" : "no") << '\n';
      certified = certified && three && distinct;
    }
  }
  report.body << "certified: " << (certified ? "yes" : "no") << '\n';

  std::filesystem::path dir = resolve_out(out);
  ptlab::save_family(family, dir.string());
  write_file(dir / "certification.txt", report.body.str());
  std::cout << report.body.str();
  return certified ? 0 : 1;
}

int cmd_tree_family(int size, const std::string& out) {
  auto rooted = ptlab::enumerate_rooted_trees(size);
  auto result = ptlab::dedupe_unrooted(rooted, size);

  Report report("tree-family", {{"s", std::to_string(size)}});
  report.body << "rooted: " << result.rooted_count << '\n'
              << "unrooted: " << result.family.members.size() << '\n';
  bool orbit_ok = true;
  for (std::size_t i = 0; i < result.orbit_sizes.size(); ++i) {
    report.body << "orbit " << i << ": " << result.orbit_sizes[i] << '\n';
    if (result.orbit_sizes[i] > size) orbit_ok = false;
  }
  report.body << "orbit_bound_le_s: " << (orbit_ok ? "yes" : "no") << '\n';

  std::filesystem::path dir = resolve_out(out);
  ptlab::save_family(result.family, dir.string());
  write_file(dir / "certification.txt", report.body.str());
  std::cout << report.body.str();
  return orbit_ok ? 0 : 1;
}

int cmd_verify_suitable(const std::string& family_dir, double eps,
                        const std::string& out) {
  auto family = ptlab::load_family(family_dir);
  auto suit = ptlab::check_suitable(family, eps, family.degree_bound);

  Report report("verify-suitable",
                {{"family", family_dir}, {"eps", fmt(eps)}});
  report.body << "members: " << family.members.size() << '\n'
              << suit.to_text();
  bool ok = suit.forms_distinct && suit.pairwise_ok && suit.separators_ok;
  report.body << "suitable: " << (ok ? "yes" : "no") << '\n';

  if (!out.empty() || std::getenv(kOutEnv))
    write_file(std::filesystem::path(resolve_out(out)) / "suitability.txt",
               report.body.str());
  std::cout << report.body.str();
  return ok ? 0 : 1;
}

int cmd_test_run(const std::string& family_dir, double eps, int m, int trials,
                 std::uint64_t seed, double farness_divisor, int jobs,
                 bool assert_rates, const std::string& out) {
  auto family = ptlab::load_family(family_dir);
  if (family.members.empty()) {
    std::cerr << "test-run: empty family\n";
    return 2;
  }
  const int d = family.degree_bound;
  const int k = family.t;
  const double farness = eps / farness_divisor;

  if (family.gadgetless && family.min_pairwise_edits < 0 && family.t <= 16)
    ptlab::certify_min_pairwise_edits(family);

  ptlab::Rng root(seed);
  ptlab::Rng build_rng = root.fork(0);
  ptlab::Graph yes = ptlab::build_yes_instance(family, m, build_rng);
  auto pair = ptlab::build_no_instance(family, m, build_rng);
  double certified = ptlab::certified_pair_farness(family, pair);

  ptlab::TesterParams params;
  params.eps = eps;
  params.k = k;
  params.d = d;
  auto target = ptlab::exact_count_vector(yes);

  auto yes_results = run_trials(trials, jobs, [&](int i) {
    return ptlab::run_property_tester(yes, target, params,
                                      root.fork(1000 + i).seed())
        .accept;
  });
  auto no_results = run_trials(trials, jobs, [&](int i) {
    return !ptlab::run_property_tester(pair.no_graph, target, params,
                                       root.fork(2000 + i).seed())
                .accept;
  });

  int yes_accepts = std::count(yes_results.begin(), yes_results.end(), true);
  int no_rejects = std::count(no_results.begin(), no_results.end(), true);

  Report report("test-run", {{"family", family_dir},
                             {"eps", fmt(eps)},
                             {"farness", fmt(farness)},
                             {"m", std::to_string(m)},
                             {"trials", std::to_string(trials)},
                             {"seed", std::to_string(seed)}});
  report.body << "experiment,s,F,n,q,success_rate,ci_low,ci_high,seed\n";
  auto row = [&](const std::string& id, int successes) {
    double rate = static_cast<double>(successes) / trials;
    report.body << id << ',' << family.s << ',' << family.members.size()
                << ',' << yes.vertex_count() << ",-," << fmt(rate) << ','
                << fmt(wilson_low(successes, trials)) << ','
                << fmt(wilson_high(successes, trials)) << ',' << seed << '\n';
  };
  row("yes-accept", yes_accepts);
  row("no-reject", no_rejects);
  report.body << "min_pairwise_edits: " << family.min_pairwise_edits << '\n'
              << "certified_farness: " << fmt(certified) << '\n'
              << "farness_parameter: " << fmt(farness) << '\n';

  std::filesystem::path dir = resolve_out(out);
  write_file(dir / "test_run.csv", report.body.str());
  std::cout << report.body.str();

  if (assert_rates) {
    bool ok = 3 * yes_accepts >= 2 * trials && 3 * no_rejects >= 2 * trials &&
              certified >= farness;
    return ok ? 0 : 1;
  }
  return 0;
}

int cmd_distinguish_sweep(const std::vector<int>& s_list, int radius,
                          int trials, long qfixed, std::uint64_t seed,
                          const std::string& out) {
  Report report("distinguish-sweep",
                {{"trials", std::to_string(trials)},
                 {"qfixed", std::to_string(qfixed)},
                 {"seed", std::to_string(seed)}});
  report.body << "experiment,s,F,n,q,success_rate,ci_low,ci_high,seed\n";

  long prev_q = -1;
  bool monotone = true;
  for (std::size_t idx = 0; idx < s_list.size(); ++idx) {
    int s = s_list[idx];
    int r = radius > 0 ? radius
                       : static_cast<int>(std::ceil(0.16 * s * s));
    auto pool = ptlab::enumerate_codes(s);
    auto family = ptlab::take_scoops(ptlab::GridParams{s}, pool, r, true,
                                     true, seed);
    std::size_t fsize = family.members.size() & ~std::size_t{1};
    if (fsize < 2) {
      std::cerr << "distinguish-sweep: family at s=" << s
                << " too small (" << family.members.size() << ")\n";
      return 2;
    }
    if (qfixed > 0) {
      // Fixed-q mode: one cell, no search.
      int successes = 0;
      ptlab::Rng root(seed + idx);
      for (int t = 0; t < trials; ++t) {
        ptlab::Rng rng = root.fork(t);
        bool doubled = rng.coin();
        std::vector<std::uint64_t> ids(fsize);
        std::iota(ids.begin(), ids.end(), 0ULL);
        rng.shuffle(ids);
        std::vector<std::uint64_t> draws;
        for (long i = 0; i < qfixed; ++i)
          draws.push_back(doubled ? ids[rng.below(fsize / 2)]
                                  : rng.below(fsize));
        if (ptlab::collision_distinguish(draws, fsize).says_doubled ==
            doubled)
          ++successes;
      }
      report.body << "distinguish-fixed," << s << ',' << fsize << ",-,"
                  << qfixed << ',' << fmt(double(successes) / trials) << ','
                  << fmt(wilson_low(successes, trials)) << ','
                  << fmt(wilson_high(successes, trials)) << ',' << seed
                  << '\n';
      continue;
    }
    auto point =
        ptlab::empirical_sample_complexity(fsize, trials, seed + idx);
    for (const auto& cell : point.cells)
      report.body << "distinguish-cell," << s << ',' << fsize << ",-,"
                  << cell.q << ',' << fmt(cell.rate) << ','
                  << fmt(cell.wilson_low) << ','
                  << fmt(wilson_high(cell.successes, cell.trials)) << ','
                  << seed << '\n';
    report.body << "distinguish-qstar," << s << ',' << fsize << ",-,"
                << point.q_star << ",-,-,-," << seed << '\n';
    if (!point.monotone)
      report.body << "# warning: non-monotone success curve at s=" << s
                  << '\n';
    if (prev_q >= 0 && point.q_star <= prev_q) monotone = false;
    prev_q = point.q_star;
  }
  if (s_list.size() > 1)
    report.body << "qstar_strictly_increasing: " << (monotone ? "yes" : "no")
                << '\n';

  write_file(std::filesystem::path(resolve_out(out)) / "sweep.csv",
             report.body.str());
  std::cout << report.body.str();
  return 0;
}

int cmd_decompose_demo(const std::string& kind, int n, double eps, int tau,
                       std::uint64_t seed, const std::string& out) {
  ptlab::Rng rng(seed);
  ptlab::Graph g;
  if (kind == "path") {
    std::vector<std::pair<int, int>> edges;
    for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
    g = ptlab::Graph::from_edges(n, 3, edges);
  } else if (kind == "random-tree") {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> open = {0};  // vertices with spare degree (bound 3)
    std::vector<int> load(n, 0);
    for (int v = 1; v < n; ++v) {
      std::size_t pick = rng.below(open.size());
      int parent = open[pick];
      edges.emplace_back(parent, v);
      if (++load[parent] >= (parent == 0 ? 3 : 2))
        open.erase(open.begin() + pick);
      open.push_back(v);
    }
    g = ptlab::Graph::from_edges(n, 3, edges);
  } else {
    std::cerr << "decompose-demo: unknown graph kind '" << kind << "'\n";
    return 2;
  }

  auto result = ptlab::decompose(g, eps, tau);
  std::string why;
  bool valid = ptlab::validate_partition(g, result.partition, &why);
  std::size_t max_block = 0;
  for (const auto& b : result.partition.blocks)
    max_block = std::max(max_block, b.size());

  Report report("decompose-demo", {{"graph", kind},
                                   {"n", std::to_string(n)},
                                   {"eps", fmt(eps)},
                                   {"tau", std::to_string(tau)},
                                   {"seed", std::to_string(seed)}});
  report.body << "blocks: " << result.partition.blocks.size() << '\n'
              << "max_block: " << max_block << '\n'
              << "block_bound: " << result.partition.k << '\n'
              << "removed_edges: " << result.removed_edges << '\n'
              << "edge_budget: " << fmt(eps * g.degree_bound() * n) << '\n'
              << "cut_edges: " << result.partition.cut_edges << '\n'
              << "recursion_leaves: " << result.recursion_leaves << '\n'
              << "leaf_budget: " << fmt(eps * n / (2.0 * tau)) << '\n'
              << "valid: " << (valid ? "yes" : why) << '\n';

  std::filesystem::path dir = resolve_out(out);
  write_file(dir / "partition.txt",
             ptlab::partition_to_text(result.partition));
  write_file(dir / "decompose.txt", report.body.str());
  std::cout << report.body.str();

  bool within = valid &&
                static_cast<double>(result.removed_edges) <=
                    eps * g.degree_bound() * n &&
                static_cast<double>(max_block) <= 6.0 * tau / eps;
  return within ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - hard-instance families, partition oracles and the "
               "count-vector property tester.\n"
               "CSV columns: experiment,s,F,n,q,success_rate,ci_low,"
               "ci_high,seed.\n"
               "Default output directory: $PTLAB_OUT, else the current "
               "directory."};
  app.require_subcommand(1);

  int s = 12, radius = 0, m = 10, trials = 200, tau = 1, n = 10000,
      jobs = 1, tree_size = 8;
  long sample_pool = 0, qfixed = 0;
  double eps = 0.25, farness_divisor = 32.0;
  std::uint64_t seed = 1;
  std::string out, family_dir, graph_kind = "random-tree";
  bool gadgetless = false, check_3conn = false, assert_rates = false;
  std::vector<int> s_list = {3, 4, 5};

  auto* fb = app.add_subcommand("family-build",
                                "Carve a pairwise-far diagonal-grid family "
                                "and certify it");
  fb->add_option("--s", s, "grid side length")->capture_default_str();
  fb->add_option("--radius", radius, "Hamming carving radius (0 = 0.16 s^2)");
  fb->add_flag("--gadgetless", gadgetless, "plain grid, no corner gadgets");
  fb->add_option("--sample-pool", sample_pool,
                 "sample this many codes instead of enumerating all");
  fb->add_option("--eps", eps, "suitability proximity parameter")
      ->capture_default_str();
  fb->add_option("--seed", seed, "rng seed")->capture_default_str();
  fb->add_option("--out", out, "output directory");
  fb->add_flag("--check-3conn", check_3conn,
               "certify base-graph 3-connectivity and corner signatures");
  bool certify_edits = false;
  fb->add_flag("--certify-edits", certify_edits,
               "exact minimum pairwise edit distance (t <= 16; slow)");

  auto* tf = app.add_subcommand("tree-family",
                                "Enumerate bounded-degree unrooted trees "
                                "with orbit certificates");
  tf->add_option("--s", tree_size, "tree size")->capture_default_str();
  tf->add_option("--out", out, "output directory");

  auto* vs = app.add_subcommand("verify-suitable",
                                "Re-check a stored family against the "
                                "suitability definition");
  vs->add_option("--family", family_dir, "family archive directory")
      ->required();
  vs->add_option("--eps", eps, "proximity parameter")->capture_default_str();
  vs->add_option("--out", out, "output directory");

  auto* tr = app.add_subcommand("test-run",
                                "Run the two-phase tester on YES/NO "
                                "instances of a stored family");
  tr->add_option("--family", family_dir, "family archive directory")
      ->required();
  tr->add_option("--eps", eps, "proximity parameter")->capture_default_str();
  tr->add_option("--m", m, "copies per member")->capture_default_str();
  tr->add_option("--trials", trials, "trials per instance kind")
      ->capture_default_str();
  tr->add_option("--seed", seed, "rng seed")->capture_default_str();
  tr->add_option("--farness-divisor", farness_divisor,
                 "tester farness parameter = eps / divisor")
      ->capture_default_str();
  tr->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  tr->add_flag("--assert", assert_rates,
               "exit 1 unless rates reach 2/3 and the certified farness "
               "covers the tester parameter");
  tr->add_option("--out", out, "output directory");

  auto* ds = app.add_subcommand("distinguish-sweep",
                                "Collision-distinguisher sample complexity "
                                "over gadgetless family sizes");
  ds->add_option("--s-list", s_list, "grid sides to sweep")
      ->capture_default_str();
  ds->add_option("--radius", radius, "carving radius (0 = 0.16 s^2)");
  ds->add_option("--trials", trials, "trials per cell")
      ->capture_default_str();
  ds->add_option("--qfixed", qfixed, "evaluate one fixed q, no search");
  ds->add_option("--seed", seed, "rng seed")->capture_default_str();
  ds->add_option("--out", out, "output directory");

  auto* dd = app.add_subcommand("decompose-demo",
                                "Recursive separator decomposition on a "
                                "generated graph");
  dd->add_option("--graph", graph_kind, "path | random-tree")
      ->capture_default_str();
  dd->add_option("--n", n, "vertex count")->capture_default_str();
  dd->add_option("--eps", eps, "edge budget parameter")
      ->capture_default_str();
  dd->add_option("--tau", tau, "separator size bound")
      ->capture_default_str();
  dd->add_option("--seed", seed, "rng seed")->capture_default_str();
  dd->add_option("--out", out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fb->parsed())
      return cmd_family_build(s, radius, gadgetless, sample_pool, eps, seed,
                              out, check_3conn, certify_edits);
    if (tf->parsed()) return cmd_tree_family(tree_size, out);
    if (vs->parsed()) return cmd_verify_suitable(family_dir, eps, out);
    if (tr->parsed())
      return cmd_test_run(family_dir, eps, m, trials, seed, farness_divisor,
                          jobs, assert_rates, out);
    if (ds->parsed())
      return cmd_distinguish_sweep(s_list, radius, trials, qfixed, seed, out);
    if (dd->parsed())
      return cmd_decompose_demo(graph_kind, n, eps, tau, seed, out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
