#pragma once

// Array XOR codes: an m x n grid of encoding symbols over k fragments, where a
// whole column is the unit of erasure and decoding is peeling over the cells
// of the surviving columns.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bpxor/ecgraph.hpp"
#include "bpxor/gf2.hpp"
#include "bpxor/parallel.hpp"

namespace bpxor::array {

// Where the fragments of a graph-derived code came from: fragment i is graph
// node fragment_nodes[i]; `hub` is the node whose edges became degree-one cells.
struct NodeMap {
  std::size_t hub = 0;
  std::vector<std::size_t> fragment_nodes;

  friend bool operator==(const NodeMap&, const NodeMap&) = default;
};

using Cell = std::optional<SymbolComposition>;

class ArrayCode {
 public:
  ArrayCode() = default;
  // `cells` is row-major, m * n entries. Every present cell must be nonempty
  // with width k, and every fragment must appear somewhere.
  ArrayCode(std::size_t m, std::size_t n, std::size_t k, std::vector<Cell> cells);

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  const Cell& cell(std::size_t row, std::size_t col) const { return cells_.at(row * n_ + col); }
  const std::vector<Cell>& cells() const noexcept { return cells_; }

  // Present cells of the listed columns, column by column and top to bottom
  // within a column. This order fixes the peeling tie-break.
  std::vector<SymbolComposition> symbols(std::span<const std::size_t> columns) const;
  std::size_t present_cells() const;

  ArrayCode first_columns(std::size_t count) const;

  const std::optional<NodeMap>& node_map() const noexcept { return node_map_; }
  void set_node_map(NodeMap map) { node_map_ = std::move(map); }

  friend bool operator==(const ArrayCode&, const ArrayCode&) = default;

 private:
  std::size_t m_ = 0;
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<Cell> cells_;
  std::optional<NodeMap> node_map_;
};

struct ToleranceCertificate {
  std::size_t t = 0;
  std::uint64_t patterns_checked = 0;
  // Digest of the peeling schedule for each erasure pattern, in
  // lexicographic pattern order.
  std::vector<std::uint64_t> schedule_digests;
};

struct ToleranceResult {
  std::optional<ToleranceCertificate> certificate;
  std::vector<std::size_t> counterexample;   // erased columns, 0-based
  std::vector<std::size_t> stalled_resolved; // fragments peeled before the stall

  bool certified() const noexcept { return certificate.has_value(); }
};

// Default guard: 10^6 erasure patterns.
ToleranceResult verify_tolerance(const ArrayCode& code, std::size_t t, const EnumerationOptions& options = {});

// Code whose column j holds one cell per color-j edge <u,w> of g, composed of
// {u, w}; edges at the hub become the single fragment {w}. The hub is dropped
// and the remaining nodes are numbered in order as fragments 0..k-1.
ArrayCode from_graph(const graph::EdgeColoredGraph& g, std::size_t hub);

// The same table before hub substitution: k = node count, all cells degree 2.
ArrayCode edge_code(const graph::EdgeColoredGraph& g);

// Inverse of from_graph for codes with cells of degree 1 or 2: node k is the
// hub and column j becomes color j.
graph::EdgeColoredGraph to_graph(const ArrayCode& code);

std::size_t smallest_odd_prime_at_least(std::size_t n);

// ((p-1)/2) x n code over p-1 fragments, p the smallest odd prime >= n, that
// decodes from any two columns. Verified before it is returned.
ArrayCode construct_two_survivor(std::size_t n);

// floor(((n0-1)/(n0-2)) * (n0 - 2/((n0-2)m + 1))): the largest column count
// of a degree-<=2 code with k = n0*m fragments recoverable from any n0 columns.
std::uint64_t max_n_bound(std::uint64_t n0, std::uint64_t m);

// Number of present cells of each degree.
std::map<std::size_t, std::size_t> degree_profile(const ArrayCode& code);

struct ArraySearchOutcome {
  std::optional<ArrayCode> code;
  std::uint64_t candidates_examined = 0;
};

// Exhaustive search over m x n grids with every cell a nonempty composition of
// degree <= max_degree, returning the first grid tolerating t erasures.
// Default guard: 10^7 grids.
ArraySearchOutcome search_low_degree_codes(std::size_t m, std::size_t n, std::size_t k, std::size_t t,
                                           std::size_t max_degree = 2, const EnumerationOptions& options = {});

}  // namespace bpxor::array
