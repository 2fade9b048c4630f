#include "ptlab/tester.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace ptlab {

double l1_distance(const CountVector& a, const CountVector& b) {
  double sum = 0.0;
  for (const auto& [form, value] : a.counts) {
    auto it = b.counts.find(form);
    sum += std::abs(value - (it == b.counts.end() ? 0.0 : it->second));
  }
  for (const auto& [form, value] : b.counts)
    if (!a.counts.count(form)) sum += value;
  return sum;
}

CountVector exact_count_vector(const Graph& g) {
  CountVector cv;
  cv.total_vertices = g.vertex_count();
  if (g.vertex_count() == 0) return cv;
  const double unit = 1.0 / g.vertex_count();
  for (const auto& comp : connected_components(g))
    cv.counts[canonical_form(g, comp)] += unit;
  return cv;
}

long count_vector_samples(double accuracy, long coordinate_bound,
                          double sample_range) {
  if (accuracy <= 0 || coordinate_bound < 1 || sample_range <= 0)
    throw std::invalid_argument("count_vector_samples: bad arguments");
  double b = static_cast<double>(coordinate_bound);
  double per_coordinate = accuracy / b;
  return static_cast<long>(
      std::ceil(sample_range * sample_range * std::log(2.0 * b * b) /
                (2.0 * per_coordinate * per_coordinate)));
}

std::optional<CountVector> estimate_count_vector(const Graph& g,
                                                 PartitionOracle& oracle,
                                                 QueryLedger& ledger,
                                                 long samples, Rng& rng) {
  CountVector cv;
  cv.total_vertices = g.vertex_count();
  if (g.vertex_count() == 0 || samples <= 0) return cv;
  std::unordered_map<int, std::pair<CanonicalForm, int>> block_cache;
  for (long i = 0; i < samples; ++i) {
    int v = static_cast<int>(rng.below(g.vertex_count()));
    auto id = oracle.block_id(v, ledger);
    if (!id) return std::nullopt;
    auto it = block_cache.find(*id);
    if (it == block_cache.end()) {
      const auto& members = oracle.block_members(*id);
      it = block_cache
               .emplace(*id, std::make_pair(canonical_form(g, members),
                                            static_cast<int>(members.size())))
               .first;
    }
    cv.counts[it->second.first] += 1.0 / it->second.second;
  }
  for (auto& [form, value] : cv.counts) value /= static_cast<double>(samples);
  return cv;
}

TesterVerdict run_property_tester(const Graph& g, const CountVector& target,
                                  const TesterParams& params,
                                  std::uint64_t seed) {
  if (params.eps <= 0 || params.k < 1 || params.d < 1)
    throw std::invalid_argument("run_property_tester: bad params");
  const long kd = static_cast<long>(params.k) * params.d;
  const double accept_radius = params.eps / (2.0 * kd);
  const double accuracy = params.eps / (4.0 * kd);
  long phase1 = params.phase1_trials > 0
                    ? params.phase1_trials
                    : static_cast<long>(std::ceil(48.0 / params.eps));
  long phase2 = params.phase2_samples;
  if (phase2 <= 0) {
    long bound =
        std::max<long>(2, static_cast<long>(target.counts.size()) + 1);
    int t_min = params.k;
    for (const auto& [form, value] : target.counts)
      t_min = std::min(t_min, std::max(1, form.n_vertices));
    phase2 = count_vector_samples(accuracy, bound, 1.0 / t_min);
  }

  Rng root(seed);
  TesterVerdict verdict;
  for (int attempt = 0; attempt < params.seed_retries; ++attempt) {
    Rng rng = root.fork(attempt);
    QueryLedger ledger;
    TrivialPartitionOracle oracle(g, params.k);

    auto cut = cut_edge_estimate(g, oracle, ledger, params.eps, phase1, rng);
    if (!cut) continue;  // oracle refused; a component exceeds k
    verdict.cut_fraction = cut->fraction;
    if (!cut->accept) {
      verdict.phase = 1;
      verdict.accept = false;
      verdict.queries_used = ledger.neighbor_queries;
      return verdict;
    }

    auto estimate = estimate_count_vector(g, oracle, ledger, phase2, rng);
    if (!estimate) continue;
    verdict.phase = 2;
    verdict.count_distance = l1_distance(*estimate, target);
    verdict.accept = verdict.count_distance <= accept_radius;
    verdict.queries_used = ledger.neighbor_queries;
    return verdict;
  }
  // Every attempt hit an oversized component: the promised partition does
  // not exist, reject.
  verdict.phase = 1;
  verdict.accept = false;
  return verdict;
}

std::optional<CanonicalForm> ComponentSampler::sample(Rng& rng,
                                                      QueryLedger& ledger,
                                                      bool ignore_isolated) {
  if (g_.vertex_count() == 0) return std::nullopt;
  const long attempts = 10L * g_.vertex_count();
  for (long i = 0; i < attempts; ++i) {
    int v = static_cast<int>(rng.below(g_.vertex_count()));
    if (ignore_isolated && g_.degree(v) == 0) continue;
    auto it = form_of_vertex_.find(v);
    if (it == form_of_vertex_.end()) {
      auto view = explore_component(g_, ledger, v, cap_);
      if (!view) return std::nullopt;
      int idx = static_cast<int>(forms_.size());
      forms_.push_back(canonical_form(g_, view->vertices));
      int size = static_cast<int>(view->vertices.size());
      form_sizes_.push_back(size);
      if (size > 1) {
        if (uniform_size_ == 0)
          uniform_size_ = size;
        else if (uniform_size_ != size)
          sizes_uniform_ = false;
      }
      for (int u : view->vertices) form_of_vertex_[u] = idx;
      it = form_of_vertex_.find(v);
    }
    return forms_[it->second];
  }
  return std::nullopt;
}

namespace {

template <typename Key, typename Hash>
CollisionDecision decide_collisions(
    const std::unordered_map<Key, long, Hash>& tallies, long q,
    std::size_t family_size) {
  CollisionDecision d;
  d.samples = q;
  for (const auto& [key, c] : tallies) d.collisions += c * (c - 1) / 2;
  double pairs = static_cast<double>(q) * (q - 1) / 2.0;
  d.threshold = 1.5 * pairs / static_cast<double>(family_size);
  d.says_doubled = static_cast<double>(d.collisions) > d.threshold;
  return d;
}

}  // namespace

CollisionDecision collision_distinguish(
    const std::vector<std::uint64_t>& sample_ids, std::size_t family_size) {
  std::unordered_map<std::uint64_t, long, std::hash<std::uint64_t>> tallies;
  for (auto id : sample_ids) ++tallies[id];
  return decide_collisions(tallies, static_cast<long>(sample_ids.size()),
                           family_size);
}

CollisionDecision collision_distinguish(
    const std::vector<CanonicalForm>& samples, std::size_t family_size) {
  std::unordered_map<CanonicalForm, long, CanonicalFormHash> tallies;
  for (const auto& f : samples) ++tallies[f];
  return decide_collisions(tallies, static_cast<long>(samples.size()),
                           family_size);
}

namespace {

double wilson_lower(int successes, int trials) {
  if (trials == 0) return 0.0;
  const double z = 1.959963984540054;
  double p = static_cast<double>(successes) / trials;
  double z2 = z * z;
  double denom = 1.0 + z2 / trials;
  double center = p + z2 / (2.0 * trials);
  double margin =
      z * std::sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials));
  return (center - margin) / denom;
}

ComplexityCell run_cell(std::size_t family_size, long q, int trials,
                        const Rng& root) {
  ComplexityCell cell;
  cell.q = q;
  cell.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng = root.fork(static_cast<std::uint64_t>(q) * 1000003ULL + t);
    bool doubled_world = rng.coin();
    std::vector<std::uint64_t> draws;
    draws.reserve(q);
    if (doubled_world) {
      std::vector<std::uint64_t> ids(family_size);
      std::iota(ids.begin(), ids.end(), 0ULL);
      rng.shuffle(ids);
      std::size_t half = family_size / 2;
      for (long i = 0; i < q; ++i)
        draws.push_back(ids[rng.below(half)]);
    } else {
      for (long i = 0; i < q; ++i)
        draws.push_back(rng.below(family_size));
    }
    auto decision = collision_distinguish(draws, family_size);
    if (decision.says_doubled == doubled_world) ++cell.successes;
  }
  cell.rate = static_cast<double>(cell.successes) / trials;
  cell.wilson_low = wilson_lower(cell.successes, trials);
  return cell;
}

}  // namespace

ComplexityPoint empirical_sample_complexity(std::size_t family_size,
                                            int trials, std::uint64_t seed,
                                            long q_cap, double target_rate) {
  if (family_size < 2 || family_size % 2 != 0)
    throw std::invalid_argument(
        "empirical_sample_complexity: family size must be even and >= 2");
  ComplexityPoint point;
  point.family_size = family_size;
  Rng root(seed);
  std::map<long, ComplexityCell> cells;
  auto eval = [&](long q) -> const ComplexityCell& {
    auto it = cells.find(q);
    if (it == cells.end())
      it = cells.emplace(q, run_cell(family_size, q, trials, root)).first;
    return it->second;
  };

  // Doubling ladder to find a passing q, then bisect down to the least one.
  long lo = 1, hi = -1;
  for (long q = 2; q <= q_cap; q *= 2) {
    const auto& cell = eval(q);
    if (cell.rate >= target_rate) {
      hi = q;
      break;
    }
    lo = q;
  }
  if (hi > 0) {
    while (hi - lo > 1) {
      long mid = lo + (hi - lo) / 2;
      if (eval(mid).rate >= target_rate)
        hi = mid;
      else
        lo = mid;
    }
    point.q_star = hi;
  }

  double best_below = 0.0;
  for (const auto& [q, cell] : cells) {
    point.cells.push_back(cell);
    if (cell.rate + 0.1 < best_below) point.monotone = false;
    best_below = std::max(best_below, cell.rate);
  }
  return point;
}

EqualizeResult equalize_count_vectors(const Graph& a, const Graph& b) {
  if (a.vertex_count() != b.vertex_count())
    throw std::invalid_argument(
        "equalize_count_vectors: vertex counts differ");
  struct Side {
    std::unordered_map<CanonicalForm, std::vector<std::vector<int>>,
                       CanonicalFormHash>
        comps;
  };
  auto gather = [](const Graph& g) {
    Side s;
    for (auto& comp : connected_components(g))
      s.comps[canonical_form(g, comp)].push_back(std::move(comp));
    return s;
  };
  Side sa = gather(a), sb = gather(b);

  EqualizeResult result{a, b, 0};
  auto strip = [&result](Graph& g, const Side& own, const Side& other) {
    std::vector<std::pair<int, int>> keep;
    long removed = 0;
    std::unordered_set<int> doomed;
    for (const auto& [form, list] : own.comps) {
      auto it = other.comps.find(form);
      std::size_t allowed = it == other.comps.end() ? 0 : it->second.size();
      for (std::size_t i = allowed; i < list.size(); ++i)
        doomed.insert(list[i].begin(), list[i].end());
    }
    for (auto [u, v] : g.edges()) {
      if (doomed.count(u)) {
        ++removed;
      } else {
        keep.emplace_back(u, v);
      }
    }
    g = Graph::from_edges(g.vertex_count(), g.degree_bound(), keep);
    result.edits += removed;
  };
  strip(result.a, sa, sb);
  strip(result.b, sb, sa);
  return result;
}

}  // namespace ptlab
