#include "bpxor/ecgraph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "bpxor/errors.hpp"

namespace bpxor::graph {

namespace {

constexpr std::uint64_t kDefaultColorSubsetGuard = 1'000'000;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
  }

  std::size_t sets() const noexcept { return sets_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

// Builds a graph from a table given with 1-based node names, one column per color.
EdgeColoredGraph from_table(std::size_t nodes,
                            std::initializer_list<std::initializer_list<std::pair<int, int>>> columns) {
  std::vector<Edge> edges;
  std::size_t color = 0;
  for (const auto& column : columns) {
    for (auto [a, b] : column) {
      edges.push_back({static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1), color});
    }
    ++color;
  }
  return EdgeColoredGraph(nodes, columns.size(), std::move(edges));
}

// Copies `part` into `edges`, renaming its node 0 to the shared node 0 and
// its other nodes to offset, offset+1, ...
void glue_at_first_node(const EdgeColoredGraph& part, std::size_t offset, std::vector<Edge>& edges) {
  auto rename = [offset](std::size_t node) { return node == 0 ? 0 : offset + node - 1; };
  for (const auto& e : part.edges()) edges.push_back({rename(e.u), rename(e.v), e.color});
}

std::size_t mod_node(std::size_t value, std::size_t p) {
  const std::size_t x = value % p;
  return (x == 0 ? p : x) - 1;
}

}  // namespace

EdgeColoredGraph::EdgeColoredGraph(std::size_t node_count, std::size_t color_count, std::vector<Edge> edges)
    : node_count_(node_count), color_count_(color_count), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    if (e.u >= node_count_ || e.v >= node_count_) throw std::invalid_argument("edge endpoint out of range");
    if (e.u == e.v) throw std::invalid_argument("loops are not allowed");
    if (e.color >= color_count_) throw std::invalid_argument("edge color out of range");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& f = edges_[j];
      const bool same_pair = (f.u == e.u && f.v == e.v) || (f.u == e.v && f.v == e.u);
      if (same_pair && f.color == e.color) {
        throw std::invalid_argument("parallel edges must carry distinct colors");
      }
    }
  }
}

ColorTable color_table(const EdgeColoredGraph& g) {
  ColorTable table{std::vector<std::vector<Edge>>(g.color_count())};
  for (const auto& e : g.edges()) table.columns[e.color].push_back(e);
  return table;
}

std::size_t component_count(const EdgeColoredGraph& g, std::span<const std::size_t> removed_colors) {
  std::vector<bool> removed(g.color_count(), false);
  for (std::size_t c : removed_colors) removed.at(c) = true;
  DisjointSets sets(g.node_count());
  for (const auto& e : g.edges()) {
    if (!removed[e.color]) sets.unite(e.u, e.v);
  }
  return sets.sets();
}

std::optional<std::vector<std::size_t>> disconnecting_colors(const EdgeColoredGraph& g, std::size_t t_plus_1,
                                                             const EnumerationOptions& options) {
  if (t_plus_1 < 1) throw std::invalid_argument("color connectivity level must be at least 1");
  const std::size_t t = t_plus_1 - 1;
  if (t > g.color_count()) throw std::invalid_argument("cannot remove more colors than the graph has");
  const std::uint64_t subsets = binomial(g.color_count(), t);
  if (subsets > options.limit_or(kDefaultColorSubsetGuard)) {
    throw GuardExceeded(std::to_string(subsets) + " color subsets exceeds the guard");
  }
  auto hit = find_first_combination(g.color_count(), t, options.jobs,
                                    [&](std::uint64_t, std::span<const std::size_t> colors) {
                                      return component_count(g, colors) > 1;
                                    });
  if (!hit) return std::nullopt;
  return hit->items;
}

bool is_color_connected(const EdgeColoredGraph& g, std::size_t t_plus_1, const EnumerationOptions& options) {
  return !disconnecting_colors(g, t_plus_1, options).has_value();
}

EdgeColoredGraph g41() {
  return from_table(5, {
                           {{1, 2}, {3, 4}},
                           {{2, 3}, {1, 5}},
                           {{4, 5}, {1, 3}},
                           {{2, 5}, {1, 4}},
                       });
}

EdgeColoredGraph g42() {
  return from_table(7, {
                           {{1, 2}, {3, 6}, {4, 7}},
                           {{2, 3}, {1, 5}, {3, 7}},
                           {{4, 5}, {6, 7}, {1, 3}},
                           {{2, 5}, {1, 4}, {4, 6}},
                       });
}

EdgeColoredGraph construct_3cc(std::size_t k) {
  if (k < 5) throw std::invalid_argument("3-color connected construction needs k >= 5");
  const std::size_t residue = k % 4;
  // k = 4r+2 and k = 4r+4 extend the k-1 node graph by one degree-3 node.
  const std::size_t base = (residue == 1 || residue == 3) ? k : k - 1;

  std::vector<Edge> edges;
  const auto small = g41();
  const std::size_t small_copies = base % 4 == 1 ? (base - 1) / 4 : (base - 3) / 4 - 1;
  std::size_t offset = 1;
  for (std::size_t c = 0; c < small_copies; ++c) {
    glue_at_first_node(small, offset, edges);
    offset += small.node_count() - 1;
  }
  if (base % 4 == 3) {
    const auto large = g42();
    glue_at_first_node(large, offset, edges);
    offset += large.node_count() - 1;
  }
  if (base != k) {
    const std::size_t extra = base;
    for (std::size_t c = 0; c < 3; ++c) edges.push_back({extra, c + 1, c});
  }

  EdgeColoredGraph g(k, 4, std::move(edges));
  if (!is_color_connected(g, 3)) throw Error("3-color connected construction failed verification");
  return g;
}

bool is_odd_prime(std::size_t p) {
  if (p < 3 || p % 2 == 0) return false;
  for (std::size_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

EdgeColoredGraph p1f_graph(std::size_t p, std::size_t num_colors) {
  if (!is_odd_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not an odd prime");
  if (num_colors < 2 || num_colors > p) throw std::invalid_argument("num_colors must lie in [2, p]");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < num_colors; ++i) {
    for (std::size_t j = 1; j <= (p - 1) / 2; ++j) {
      edges.push_back({mod_node(j + i, p), mod_node(p - j + i, p), i});
    }
  }
  EdgeColoredGraph g(p, num_colors, std::move(edges));
  if (!is_color_connected(g, num_colors - 1)) {
    throw Error("one-factorization graph failed color connectivity verification");
  }
  return g;
}

std::vector<Edge> p1f_one_factor(std::size_t p, std::size_t i) {
  if (!is_odd_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not an odd prime");
  if (i >= p) throw std::invalid_argument("factor index must be below p");
  std::vector<Edge> factor;
  for (std::size_t j = 1; j <= (p - 1) / 2; ++j) factor.push_back({mod_node(j + i, p), mod_node(p - j + i, p), i});
  factor.push_back({p, mod_node(i, p), i});
  return factor;
}

nlohmann::json to_json(const EdgeColoredGraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1, e.color + 1});
  return {{"nodes", g.node_count()}, {"colors", g.color_count()}, {"edges", edges}};
}

EdgeColoredGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto nodes = j.at("nodes").get<std::size_t>();
    std::vector<Edge> edges;
    std::size_t colors = 0;
    for (const auto& e : j.at("edges")) {
      const auto u = e.at(0).get<std::size_t>();
      const auto v = e.at(1).get<std::size_t>();
      const auto c = e.at(2).get<std::size_t>();
      if (u == 0 || v == 0 || c == 0) throw FormatError("graph JSON uses 1-based nodes and colors");
      edges.push_back({u - 1, v - 1, c - 1});
      colors = std::max(colors, c);
    }
    if (j.contains("colors")) colors = j.at("colors").get<std::size_t>();
    return EdgeColoredGraph(nodes, colors, std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed graph JSON: ") + e.what());
  }
}

std::string to_dot(const EdgeColoredGraph& g) {
  static constexpr const char* kPalette[] = {"red",   "blue",   "darkgreen", "orange", "purple",
                                             "brown", "magenta", "cyan4",    "gold3",  "gray40"};
  std::ostringstream out;
  out << "graph G {\n";
  for (std::size_t v = 0; v < g.node_count(); ++v) out << "  v" << v + 1 << ";\n";
  for (const auto& e : g.edges()) {
    out << "  v" << e.u + 1 << " -- v" << e.v + 1 << " [color=\"" << kPalette[e.color % std::size(kPalette)]
        << "\", label=\"c" << e.color + 1 << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace bpxor::graph
