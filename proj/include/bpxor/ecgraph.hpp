#pragma once

// Edge-colored graphs where adjacent edges may share a color, and their
// color connectivity: a graph is (t+1)-color connected when deleting every
// edge of any t colors leaves all nodes connected.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bpxor/parallel.hpp"

namespace bpxor::graph {

// Nodes and colors are 0-based; node v_i and color c_i of the textbook
// numbering are node i-1 and color i-1. JSON and DOT output is 1-based.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::size_t color = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class EdgeColoredGraph {
 public:
  EdgeColoredGraph() = default;
  // Rejects loops, out-of-range endpoints or colors, and parallel edges that
  // share a color.
  EdgeColoredGraph(std::size_t node_count, std::size_t color_count, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t color_count() const noexcept { return color_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  std::size_t node_count_ = 0;
  std::size_t color_count_ = 0;
  std::vector<Edge> edges_;
};

// One column per color, each listing that color's edges in edge-list order.
struct ColorTable {
  std::vector<std::vector<Edge>> columns;
};

ColorTable color_table(const EdgeColoredGraph& g);

// Lexicographically first set of t = t_plus_1 - 1 colors whose removal
// disconnects the graph, or nullopt when the graph is t_plus_1-color
// connected. Default guard: 10^6 color subsets.
std::optional<std::vector<std::size_t>> disconnecting_colors(const EdgeColoredGraph& g,
                                                             std::size_t t_plus_1,
                                                             const EnumerationOptions& options = {});
bool is_color_connected(const EdgeColoredGraph& g, std::size_t t_plus_1,
                        const EnumerationOptions& options = {});

// Number of connected components after dropping the listed colors.
std::size_t component_count(const EdgeColoredGraph& g, std::span<const std::size_t> removed_colors);

EdgeColoredGraph g41();
EdgeColoredGraph g42();

// 3-color connected graph on k >= 5 nodes, glued from copies of g41/g42.
EdgeColoredGraph construct_3cc(std::size_t k);

bool is_odd_prime(std::size_t p);

// Graph on p nodes whose color i (0 <= i < num_colors) holds the edges
// <v_{j+i}, v_{p-j+i}> for j = 1..(p-1)/2, indices mod p with 0 read as p.
EdgeColoredGraph p1f_graph(std::size_t p, std::size_t num_colors);

// Full one-factor i of K_{p+1}: color class i of p1f_graph plus the edge from
// node p (the extra vertex v_{p+1}) to the one node that class leaves uncovered.
std::vector<Edge> p1f_one_factor(std::size_t p, std::size_t i);

// {"nodes": N, "colors": C, "edges": [[u, v, color], ...]}, all 1-based.
nlohmann::json to_json(const EdgeColoredGraph& g);
EdgeColoredGraph graph_from_json(const nlohmann::json& j);
std::string to_dot(const EdgeColoredGraph& g);

}  // namespace bpxor::graph
