#include "ptlab/canonical.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace ptlab {

namespace {

// ── AHU tree codes ──────────────────────────────────────────────────

std::string ahu_code(const Graph& g, int v, int parent) {
  std::vector<std::string> child_codes;
  for (int u : g.neighbors(v))
    if (u != parent) child_codes.push_back(ahu_code(g, u, v));
  std::sort(child_codes.begin(), child_codes.end());
  std::string out = "(";
  for (const auto& c : child_codes) out += c;
  out += ")";
  return out;
}

std::vector<int> tree_centers(const Graph& g) {
  const int n = g.vertex_count();
  if (n == 1) return {0};
  std::vector<int> deg(n);
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    if (deg[v] <= 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer)
      for (int u : g.neighbors(v))
        if (--deg[u] == 1) next.push_back(u);
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

// Connected tree, any size.
std::string tree_code(const Graph& g) {
  auto centers = tree_centers(g);
  if (centers.size() == 1) return "F" + ahu_code(g, centers[0], -1);
  std::string a = ahu_code(g, centers[0], centers[1]);
  std::string b = ahu_code(g, centers[1], centers[0]);
  if (b < a) std::swap(a, b);
  return "F<" + a + b + ">";
}

// ── Individualization-refinement for general connected graphs ───────

struct CanonSearch {
  const Graph& g;
  int n;
  std::string best;
  bool have_best = false;

  explicit CanonSearch(const Graph& graph)
      : g(graph), n(graph.vertex_count()) {}

  // Refine colors until stable: a vertex signature is its color plus the
  // sorted multiset of neighbor colors; new colors are signature ranks.
  void refine(std::vector<int>& color) const {
    int cells = 1 + *std::max_element(color.begin(), color.end());
    for (;;) {
      std::vector<std::pair<std::vector<int>, int>> sig(n);
      for (int v = 0; v < n; ++v) {
        std::vector<int> s;
        s.push_back(color[v]);
        for (int u : g.neighbors(v)) s.push_back(color[u]);
        std::sort(s.begin() + 1, s.end());
        sig[v] = {std::move(s), v};
      }
      std::vector<int> order(n);
      for (int v = 0; v < n; ++v) order[v] = v;
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return sig[a].first < sig[b].first;
      });
      std::vector<int> next(n);
      int c = 0;
      for (int i = 0; i < n; ++i) {
        if (i > 0 && sig[order[i]].first != sig[order[i - 1]].first) ++c;
        next[order[i]] = c;
      }
      if (c + 1 == cells) {
        color = std::move(next);
        return;
      }
      cells = c + 1;
      color = std::move(next);
    }
  }

  std::string encode(const std::vector<int>& color) const {
    // color is discrete: vertex with color i goes to position i.
    std::vector<int> at(n);
    for (int v = 0; v < n; ++v) at[color[v]] = v;
    std::string bits((static_cast<std::size_t>(n) * (n - 1) / 2 + 7) / 8,
                     '\0');
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++idx)
        if (g.has_edge(at[i], at[j]))
          bits[idx / 8] |= static_cast<char>(1 << (idx % 8));
    return bits;
  }

  void search(std::vector<int> color) {
    refine(color);
    // First non-singleton cell, by color value.
    std::vector<int> cell_size(n, 0);
    for (int v = 0; v < n; ++v) ++cell_size[color[v]];
    int target = -1;
    for (int c = 0; c < n; ++c)
      if (cell_size[c] > 1) {
        target = c;
        break;
      }
    if (target < 0) {
      std::string code = encode(color);
      if (!have_best || code < best) {
        best = std::move(code);
        have_best = true;
      }
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (color[v] != target) continue;
      std::vector<int> branched = color;
      for (int u = 0; u < n; ++u)
        if (branched[u] >= target && u != v) ++branched[u];
      search(std::move(branched));
    }
  }
};

std::string general_code(const Graph& g) {
  CanonSearch s(g);
  s.search(std::vector<int>(g.vertex_count(), 0));
  return "G" + std::to_string(g.vertex_count()) + ":" + s.best;
}

std::string connected_code(const Graph& g) {
  const int n = g.vertex_count();
  if (n == 0) return "E";
  if (g.edge_count() == n - 1) return tree_code(g);
  return general_code(g);
}

}  // namespace

std::string CanonicalForm::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(code.size() * 2);
  for (unsigned char b : code) {
    out += digits[b >> 4];
    out += digits[b & 0xf];
  }
  return out;
}

CanonicalForm CanonicalForm::from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0)
    throw std::invalid_argument("CanonicalForm: odd hex length");
  auto nib = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("CanonicalForm: bad hex digit");
  };
  CanonicalForm f;
  f.code.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2)
    f.code += static_cast<char>(nib(hex[i]) << 4 | nib(hex[i + 1]));
  // Vertex count is recoverable from the code but callers of from_hex only
  // compare forms, so it is left at 0.
  return f;
}

CanonicalForm canonical_form(const Graph& g) {
  auto comps = connected_components(g);
  if (comps.empty()) return {"E", 0};
  if (comps.size() == 1)
    return {connected_code(induced_subgraph(g, comps[0])), g.vertex_count()};
  std::vector<std::string> codes;
  codes.reserve(comps.size());
  for (const auto& c : comps)
    codes.push_back(connected_code(induced_subgraph(g, c)));
  std::sort(codes.begin(), codes.end());
  std::string out = "U" + std::to_string(comps.size()) + ":";
  for (const auto& c : codes) {
    out += std::to_string(c.size());
    out += ';';
    out += c;
  }
  return {std::move(out), g.vertex_count()};
}

CanonicalForm canonical_form(const Graph& g,
                             const std::vector<int>& component) {
  Graph sub = induced_subgraph(g, component);
  if (!is_connected(sub))
    throw std::invalid_argument("canonical_form: component not connected");
  return {connected_code(sub), sub.vertex_count()};
}

std::string ahu_rooted_code(const std::vector<std::vector<int>>& children,
                            int root) {
  std::vector<std::string> codes;
  for (int c : children[root]) codes.push_back(ahu_rooted_code(children, c));
  std::sort(codes.begin(), codes.end());
  std::string out = "(";
  for (const auto& c : codes) out += c;
  out += ")";
  return out;
}

}  // namespace ptlab
