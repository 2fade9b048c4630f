#include "ptlab/family.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ptlab/edit_distance.hpp"
#include "ptlab/partition.hpp"

namespace fs = std::filesystem;

namespace ptlab {

namespace {

constexpr int kDiagonalDegreeBound = 8;

int grid_id(int s, int i, int j) { return i * s + j; }

void add_grid_edges(Graph& g, int s) {
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      if (i + 1 < s) g.add_edge(grid_id(s, i, j), grid_id(s, i + 1, j));
      if (j + 1 < s) g.add_edge(grid_id(s, i, j), grid_id(s, i, j + 1));
    }
}

}  // namespace

std::string DiagonalCode::to_string() const {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out += b ? '1' : '0';
  return out;
}

DiagonalCode DiagonalCode::from_string(const std::string& s) {
  DiagonalCode c;
  c.bits.reserve(s.size());
  for (char ch : s) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("DiagonalCode: bad character");
    c.bits.push_back(ch == '1' ? 1 : 0);
  }
  return c;
}

DiagonalCode DiagonalCode::from_index(std::uint64_t index, int length) {
  DiagonalCode c;
  c.bits.resize(length);
  for (int i = 0; i < length; ++i) c.bits[i] = (index >> i) & 1;
  return c;
}

int hamming(const DiagonalCode& a, const DiagonalCode& b) {
  if (a.bits.size() != b.bits.size())
    throw std::invalid_argument("hamming: code lengths differ");
  int h = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i)
    if (a.bits[i] != b.bits[i]) ++h;
  return h;
}

Graph build_plain_grid(int s) {
  if (s < 2) throw std::invalid_argument("build_plain_grid: s < 2");
  Graph g(s * s, kDiagonalDegreeBound);
  add_grid_edges(g, s);
  return g;
}

Graph build_base_graph(GridParams p) {
  const int s = p.s;
  if (s < 12)
    throw std::invalid_argument(
        "build_base_graph: s < 12, corner gadgets would overlap");
  Graph g(s * s, kDiagonalDegreeBound);
  add_grid_edges(g, s);
  // Corner gadgets: each corner connects to the two boundary vertices
  // exactly 2 / 3 / 4 / 5 hops away along its two boundary lines.
  g.add_edge(grid_id(s, 0, 0), grid_id(s, 0, 2));
  g.add_edge(grid_id(s, 0, 0), grid_id(s, 2, 0));
  g.add_edge(grid_id(s, 0, s - 1), grid_id(s, 0, s - 4));
  g.add_edge(grid_id(s, 0, s - 1), grid_id(s, 3, s - 1));
  g.add_edge(grid_id(s, s - 1, s - 1), grid_id(s, s - 1, s - 5));
  g.add_edge(grid_id(s, s - 1, s - 1), grid_id(s, s - 5, s - 1));
  g.add_edge(grid_id(s, s - 1, 0), grid_id(s, s - 1, 5));
  g.add_edge(grid_id(s, s - 1, 0), grid_id(s, s - 6, 0));
  return g;
}

Graph build_diagonal_graph(GridParams p, const DiagonalCode& code,
                           bool gadgetless) {
  const int s = p.s;
  const int cells = (s - 1) * (s - 1);
  if (code.length() != cells)
    throw std::invalid_argument("build_diagonal_graph: code length mismatch");
  Graph g = gadgetless ? build_plain_grid(s) : build_base_graph(p);
  for (int i = 0; i < s - 1; ++i)
    for (int j = 0; j < s - 1; ++j) {
      if (code.bits[i * (s - 1) + j] == 0)
        g.add_edge(grid_id(s, i, j), grid_id(s, i + 1, j + 1));
      else
        g.add_edge(grid_id(s, i, j + 1), grid_id(s, i + 1, j));
    }
  return g;
}

std::vector<DiagonalCode> enumerate_codes(int s) {
  const int len = (s - 1) * (s - 1);
  if (len > 20)
    throw std::invalid_argument("enumerate_codes: 2^L exceeds budget");
  std::vector<DiagonalCode> out;
  out.reserve(1u << len);
  for (std::uint64_t i = 0; i < (1u << len); ++i)
    out.push_back(DiagonalCode::from_index(i, len));
  return out;
}

std::vector<DiagonalCode> sample_codes(int s, std::size_t count, Rng& rng) {
  const int len = (s - 1) * (s - 1);
  std::vector<DiagonalCode> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DiagonalCode c;
    c.bits.resize(len);
    for (int b = 0; b < len; ++b) c.bits[b] = rng.coin() ? 1 : 0;
    out.push_back(std::move(c));
  }
  return out;
}

SuitableFamily take_scoops(GridParams p, const std::vector<DiagonalCode>& pool,
                           int radius, bool gadgetless, bool pool_exhaustive,
                           std::uint64_t seed) {
  if (pool.empty()) throw std::invalid_argument("take_scoops: empty pool");
  if (radius < 1) throw std::invalid_argument("take_scoops: radius < 1");

  std::vector<DiagonalCode> picked;
  for (const auto& code : pool) {
    bool far_enough = true;
    for (const auto& kept : picked)
      if (hamming(code, kept) <= radius) {
        far_enough = false;
        break;
      }
    if (far_enough) picked.push_back(code);
  }

  SuitableFamily f;
  f.kind = "grid";
  f.s = p.s;
  f.t = p.s * p.s;
  f.degree_bound = kDiagonalDegreeBound;
  f.epsilon = 1.0 / p.s;
  f.radius = radius;
  f.gadgetless = gadgetless;
  f.pool_exhaustive = pool_exhaustive;
  f.seed = seed;

  for (const auto& code : picked) {
    Graph g = build_diagonal_graph(p, code, gadgetless);
    CanonicalForm form = canonical_form(g);
    bool duplicate = false;
    for (const auto& existing : f.forms)
      if (existing == form) {
        duplicate = true;
        break;
      }
    if (duplicate) {
      ++f.dropped_isomorphic;
      continue;
    }
    f.members.push_back(std::move(g));
    f.forms.push_back(std::move(form));
    f.codes.push_back(code);
  }

  // Certify the pairwise Hamming floor on the surviving members.
  f.min_pairwise_hamming = f.codes.size() > 1 ? code_min_hamming(f) : -1;
  return f;
}

int code_min_hamming(const SuitableFamily& f) {
  int best = -1;
  for (std::size_t i = 0; i < f.codes.size(); ++i)
    for (std::size_t j = i + 1; j < f.codes.size(); ++j) {
      int h = hamming(f.codes[i], f.codes[j]);
      if (best < 0 || h < best) best = h;
    }
  return best;
}

int certify_min_pairwise_edits(SuitableFamily& f) {
  if (f.members.size() < 2) return f.min_pairwise_edits;

  // Visit pairs in ascending code-Hamming order so cheap pairs shrink the
  // cap early; a pair whose distance reaches the cap cannot lower the
  // minimum, so its search may stop there.
  std::vector<std::pair<long, std::pair<int, int>>> pairs;
  for (std::size_t i = 0; i < f.members.size(); ++i)
    for (std::size_t j = i + 1; j < f.members.size(); ++j) {
      long key = f.codes.empty()
                     ? 0
                     : hamming(f.codes[i], f.codes[j]);
      pairs.push_back({key, {static_cast<int>(i), static_cast<int>(j)}});
    }
  std::sort(pairs.begin(), pairs.end());

  long best = -1;
  for (const auto& [key, idx] : pairs) {
    // Members share the construction labeling, so the identity mapping
    // already costs at most 2 * hamming; the search only improves on it.
    long cap = best < 0 ? std::numeric_limits<long>::max() - 1 : best - 1;
    long dist = edit_distance_exact_bounded(f.members[idx.first],
                                            f.members[idx.second], cap);
    if (best < 0 || dist < best) best = dist;
    if (best <= 1) break;  // distinct forms guarantee >= 1
  }
  f.min_pairwise_edits = static_cast<int>(best);
  return f.min_pairwise_edits;
}

SuitabilityReport check_suitable(const SuitableFamily& f, double eps, int d,
                                 double separator_constant,
                                 std::uint64_t separator_budget) {
  SuitabilityReport r;
  const int t = f.t;

  r.forms_distinct = true;
  for (std::size_t i = 0; i < f.forms.size() && r.forms_distinct; ++i)
    for (std::size_t j = i + 1; j < f.forms.size(); ++j)
      if (f.forms[i] == f.forms[j]) {
        r.forms_distinct = false;
        break;
      }

  // Pairwise distance lower bound, normalized by d*t.
  double min_dist = f.members.size() > 1 ? 1.0 : 0.0;
  if (f.members.size() > 1) {
    if (f.kind == "grid" && !f.gadgetless) {
      // Corner gadgets pin every vertex of the grid, so differing cells
      // cannot be mapped away and the Hamming distance bounds the edits.
      min_dist = static_cast<double>(code_min_hamming(f)) / (d * t);
    } else if (f.kind == "grid") {
      // Gadgetless grids keep their symmetries; distinct codes can be a
      // couple of edits apart, so only a certified edit count or the
      // distinct-forms floor of one edit is sound.
      long lb = f.min_pairwise_edits > 0 ? f.min_pairwise_edits : 1;
      min_dist = static_cast<double>(lb) / (d * t);
    } else if (t <= 10) {
      for (std::size_t i = 0; i < f.members.size(); ++i)
        for (std::size_t j = i + 1; j < f.members.size(); ++j) {
          auto res = edit_distance(f.members[i], f.members[j],
                                   EditDistanceMode::kExactTiny);
          min_dist = std::min(min_dist, res.edits / double(d * t));
        }
    } else {
      // Distinct forms guarantee one edit per pair.
      min_dist = r.forms_distinct ? 1.0 / (d * t) : 0.0;
    }
  }
  r.min_pairwise_distance_lb = min_dist;
  r.pairwise_distance_required = t > 2.0 / eps;
  r.pairwise_ok = !r.pairwise_distance_required || min_dist >= 0.02;

  r.separator_threshold = separator_constant * eps * t;
  r.separators_ok = true;
  for (const auto& m : f.members) {
    SeparatorCheck check;
    auto third = min_balanced_separator(m, 2.0 / 3.0, separator_budget);
    auto extreme =
        min_balanced_separator(m, 1.0 - 0.01 / d, separator_budget);
    check.third_balanced = static_cast<int>(third.vertices.size());
    check.extreme_balanced = static_cast<int>(extreme.vertices.size());
    check.exact = third.exact && extreme.exact;
    if (check.third_balanced < r.separator_threshold) r.separators_ok = false;
    r.separators.push_back(check);
  }
  return r;
}

std::string SuitabilityReport::to_text() const {
  std::ostringstream os;
  os << "forms_distinct: " << (forms_distinct ? "yes" : "no") << '\n';
  os << "min_pairwise_distance_lb: " << min_pairwise_distance_lb << '\n';
  os << "pairwise_distance_required: "
     << (pairwise_distance_required ? "yes" : "no") << '\n';
  os << "pairwise_ok: " << (pairwise_ok ? "yes" : "no") << '\n';
  os << "separator_threshold: " << separator_threshold << '\n';
  for (std::size_t i = 0; i < separators.size(); ++i)
    os << "separator " << i << ": third=" << separators[i].third_balanced
       << " extreme=" << separators[i].extreme_balanced
       << (separators[i].exact ? " (exact)" : " (heuristic)") << '\n';
  os << "separators_ok: " << (separators_ok ? "yes" : "no") << '\n';
  return os.str();
}

Graph build_yes_instance(const SuitableFamily& f, int copies, Rng& rng,
                         int pad_to) {
  if (copies < 1) throw std::invalid_argument("build_yes_instance: copies < 1");
  std::vector<std::pair<const Graph*, int>> parts;
  for (const auto& m : f.members) parts.emplace_back(&m, copies);
  Graph base = disjoint_union(parts);
  if (pad_to > base.vertex_count()) {
    Graph padded(pad_to, base.degree_bound());
    for (auto [u, v] : base.edges()) padded.add_edge(u, v);
    base = std::move(padded);
  }
  return random_relabel(base, rng);
}

HardInstancePair build_no_instance(const SuitableFamily& f, int copies,
                                   Rng& rng) {
  if (copies < 1) throw std::invalid_argument("build_no_instance: copies < 1");
  if (f.members.size() % 2 != 0)
    throw std::invalid_argument("build_no_instance: |F| must be even");
  HardInstancePair pair;
  pair.seed = rng.seed();

  std::vector<int> idx(f.members.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  rng.shuffle(idx);
  idx.resize(idx.size() / 2);
  std::sort(idx.begin(), idx.end());
  pair.half_set = idx;

  std::vector<std::pair<const Graph*, int>> parts;
  for (int i : idx) parts.emplace_back(&f.members[i], 2 * copies);
  pair.no_graph = random_relabel(disjoint_union(parts), rng);
  pair.yes_graph = build_yes_instance(f, copies, rng);
  return pair;
}

double certified_pair_farness(const SuitableFamily& f,
                              const HardInstancePair& pair) {
  const int n = pair.yes_graph.vertex_count();
  const int d = f.degree_bound;
  if (n == 0) return 0.0;

  // Count components per member index via canonical forms.
  std::map<CanonicalForm, int> member_of;
  for (std::size_t i = 0; i < f.forms.size(); ++i)
    member_of[f.forms[i]] = static_cast<int>(i);

  auto histogram = [&](const Graph& g) {
    std::vector<long> counts(f.members.size(), 0);
    for (const auto& comp : connected_components(g)) {
      if (comp.size() == 1) continue;  // padding
      auto it = member_of.find(canonical_form(g, comp));
      if (it == member_of.end())
        throw std::invalid_argument("certified_pair_farness: alien component");
      ++counts[it->second];
    }
    return counts;
  };
  auto yes_counts = histogram(pair.yes_graph);
  auto no_counts = histogram(pair.no_graph);

  // Excess no-components must turn into deficit members; charge each the
  // cheapest pairwise lower bound available.
  std::vector<int> deficit;
  for (std::size_t i = 0; i < yes_counts.size(); ++i)
    if (yes_counts[i] > no_counts[i]) deficit.push_back(static_cast<int>(i));

  long total = 0;
  for (std::size_t i = 0; i < no_counts.size(); ++i) {
    long excess = no_counts[i] - yes_counts[i];
    if (excess <= 0) continue;
    long cheapest = -1;
    for (int j : deficit) {
      long lb;
      if (f.kind == "grid" && !f.gadgetless)
        lb = hamming(f.codes[i], f.codes[j]);
      else if (f.min_pairwise_edits > 0)
        lb = f.min_pairwise_edits;
      else
        lb = 1;  // distinct forms: at least one edit
      if (cheapest < 0 || lb < cheapest) cheapest = lb;
    }
    if (cheapest > 0) total += excess * cheapest;
  }
  return static_cast<double>(total) / (static_cast<double>(d) * n);
}

void save_family(const SuitableFamily& f, const std::string& dir) {
  fs::create_directories(dir);
  std::ostringstream os;
  os << "ptlab-family v1\n";
  os << "kind: " << f.kind << '\n';
  os << "s: " << f.s << '\n';
  os << "t: " << f.t << '\n';
  os << "degree_bound: " << f.degree_bound << '\n';
  os << "epsilon: " << f.epsilon << '\n';
  os << "radius: " << f.radius << '\n';
  os << "seed: " << f.seed << '\n';
  os << "pool: " << (f.pool_exhaustive ? "exhaustive" : "sampled") << '\n';
  os << "members: " << f.members.size() << '\n';
  os << "min_pairwise_hamming: " << f.min_pairwise_hamming << '\n';
  os << "min_pairwise_edits: " << f.min_pairwise_edits << '\n';
  os << "dropped_isomorphic: " << f.dropped_isomorphic << '\n';
  os << "gadgetless: " << (f.gadgetless ? "yes" : "no") << '\n';
  if (!f.codes.empty()) {
    os << "codes:";
    for (const auto& c : f.codes) os << ' ' << c.to_string();
    os << '\n';
  }
  std::ofstream(fs::path(dir) / "manifest.txt") << os.str();
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "member_%03zu.graph", i);
    std::ofstream(fs::path(dir) / name) << f.members[i].to_text();
  }
}

SuitableFamily load_family(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.txt");
  if (!in) throw std::invalid_argument("load_family: no manifest in " + dir);
  SuitableFamily f;
  std::string line;
  std::getline(in, line);
  if (line != "ptlab-family v1")
    throw std::invalid_argument("load_family: bad manifest header");
  std::size_t member_count = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key == "kind:") ls >> f.kind;
    else if (key == "s:") ls >> f.s;
    else if (key == "t:") ls >> f.t;
    else if (key == "degree_bound:") ls >> f.degree_bound;
    else if (key == "epsilon:") ls >> f.epsilon;
    else if (key == "radius:") ls >> f.radius;
    else if (key == "seed:") ls >> f.seed;
    else if (key == "pool:") {
      std::string mode;
      ls >> mode;
      f.pool_exhaustive = mode == "exhaustive";
    } else if (key == "members:") ls >> member_count;
    else if (key == "min_pairwise_hamming:") ls >> f.min_pairwise_hamming;
    else if (key == "min_pairwise_edits:") ls >> f.min_pairwise_edits;
    else if (key == "dropped_isomorphic:") ls >> f.dropped_isomorphic;
    else if (key == "gadgetless:") {
      std::string flag;
      ls >> flag;
      f.gadgetless = flag == "yes";
    }
    else if (key == "codes:") {
      std::string tok;
      while (ls >> tok) f.codes.push_back(DiagonalCode::from_string(tok));
    }
  }
  for (std::size_t i = 0; i < member_count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "member_%03zu.graph", i);
    std::ifstream mf(fs::path(dir) / name);
    if (!mf) throw std::invalid_argument("load_family: missing member file");
    std::ostringstream content;
    content << mf.rdbuf();
    f.members.push_back(Graph::from_text(content.str()));
    f.forms.push_back(canonical_form(f.members.back()));
  }
  return f;
}

}  // namespace ptlab
