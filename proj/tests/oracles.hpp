#pragma once
// Brute-force reference implementations used only by the tests. They share no
// code with the library: bit sets are plain uint64_t masks and every loop is
// the most direct one available.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "bpxor/arraycodes.hpp"
#include "bpxor/ecgraph.hpp"
#include "bpxor/flat.hpp"

namespace oracle {

using Mask = std::uint64_t;

inline Mask mask_of(const bpxor::BitVector& v) {
  Mask m = 0;
  for (std::size_t i = 0; i < v.width(); ++i) {
    if (v.test(i)) m |= Mask{1} << i;
  }
  return m;
}

inline std::size_t rank(std::vector<Mask> rows) {
  std::size_t r = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const Mask b = Mask{1} << bit;
    auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(r), rows.end(), [&](Mask x) { return x & b; });
    if (it == rows.end()) continue;
    std::swap(*it, rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != r && (rows[i] & b)) rows[i] ^= rows[r];
    }
    ++r;
  }
  return r;
}

// Repeatedly scan for a symbol with exactly one unknown member.
inline bool peels(const std::vector<Mask>& symbols, std::size_t k) {
  const Mask all = k == 64 ? ~Mask{0} : (Mask{1} << k) - 1;
  Mask known = 0;
  bool progress = true;
  while (progress && known != all) {
    progress = false;
    for (Mask s : symbols) {
      const Mask unknown = s & ~known;
      if (std::popcount(unknown) == 1) {
        known |= unknown;
        progress = true;
      }
    }
  }
  return known == all;
}

// Generator rows as masks over the n columns.
inline std::size_t min_distance(const bpxor::flat::FlatCode& code) {
  std::vector<Mask> rows;
  for (const auto& r : code.generator.row_vectors()) rows.push_back(mask_of(r));
  std::size_t best = code.n();
  for (Mask msg = 1; msg < (Mask{1} << code.k()); ++msg) {
    Mask word = 0;
    for (std::size_t i = 0; i < code.k(); ++i) {
      if (msg >> i & 1) word ^= rows[i];
    }
    best = std::min<std::size_t>(best, std::popcount(word));
  }
  return best;
}

inline std::vector<Mask> flat_columns(const bpxor::flat::FlatCode& code) {
  std::vector<Mask> cols;
  for (const auto& c : code.columns()) cols.push_back(mask_of(c));
  return cols;
}

// Whether peeling succeeds for every erasure of exactly t of the columns.
// `cells[j]` lists the compositions stored in column j.
inline bool tolerates(const std::vector<std::vector<Mask>>& cells, std::size_t k, std::size_t t) {
  const std::size_t n = cells.size();
  for (Mask erased = 0; erased < (Mask{1} << n); ++erased) {
    if (static_cast<std::size_t>(std::popcount(erased)) != t) continue;
    std::vector<Mask> survivors;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(erased >> j & 1)) survivors.insert(survivors.end(), cells[j].begin(), cells[j].end());
    }
    if (!peels(survivors, k)) return false;
  }
  return true;
}

inline bool flat_tolerates(const bpxor::flat::FlatCode& code, std::size_t t) {
  std::vector<std::vector<Mask>> cells;
  for (Mask c : flat_columns(code)) cells.push_back({c});
  return tolerates(cells, code.k(), t);
}

inline bool flat_gauss_tolerates(const bpxor::flat::FlatCode& code, std::size_t t) {
  const auto cols = flat_columns(code);
  const std::size_t n = cols.size();
  for (Mask erased = 0; erased < (Mask{1} << n); ++erased) {
    if (static_cast<std::size_t>(std::popcount(erased)) != t) continue;
    std::vector<Mask> survivors;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(erased >> j & 1)) survivors.push_back(cols[j]);
    }
    if (rank(survivors) < code.k()) return false;
  }
  return true;
}

inline std::vector<std::vector<Mask>> array_cells(const bpxor::array::ArrayCode& code) {
  std::vector<std::vector<Mask>> cells(code.n());
  for (std::size_t j = 0; j < code.n(); ++j) {
    for (std::size_t r = 0; r < code.m(); ++r) {
      if (const auto& c = code.cell(r, j)) cells[j].push_back(mask_of(*c));
    }
  }
  return cells;
}

// Breadth-first search after dropping every edge whose color is in `removed`.
inline bool connected_without(const bpxor::graph::EdgeColoredGraph& g, Mask removed) {
  const std::size_t n = g.node_count();
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges()) {
    if (removed >> e.color & 1) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop();
    for (auto v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        q.push(v);
      }
    }
  }
  return count == n;
}

inline bool color_connected(const bpxor::graph::EdgeColoredGraph& g, std::size_t t_plus_1) {
  const std::size_t t = t_plus_1 - 1;
  const std::size_t c = g.color_count();
  if (t > c) return false;
  for (Mask removed = 0; removed < (Mask{1} << c); ++removed) {
    if (static_cast<std::size_t>(std::popcount(removed)) == t && !connected_without(g, removed)) return false;
  }
  return true;
}

// Whether the edge set is a single cycle through all `nodes` vertices: every
// vertex has degree 2 and a walk from vertex 0 returns after `nodes` steps.
inline bool is_hamiltonian_cycle(std::size_t nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  if (edges.size() != nodes) return false;
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (const auto& a : adj) {
    if (a.size() != 2) return false;
  }
  std::size_t prev = nodes;
  std::size_t cur = 0;
  std::size_t steps = 0;
  do {
    const std::size_t next = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
    prev = cur;
    cur = next;
    ++steps;
  } while (cur != 0 && steps <= nodes);
  return cur == 0 && steps == nodes;
}

inline std::uint64_t count_weight_at_least(std::size_t r, int w) {
  std::uint64_t n = 0;
  for (Mask b = 0; b < (Mask{1} << r); ++b) n += std::popcount(b) >= w;
  return n;
}

inline std::uint64_t count_odd_weight_at_least_3(std::size_t r) {
  std::uint64_t n = 0;
  for (Mask b = 0; b < (Mask{1} << r); ++b) {
    const int w = std::popcount(b);
    n += w >= 3 && w % 2 == 1;
  }
  return n;
}

// Multisets of size n from an alphabet of size a, by Pascal accumulation.
inline std::uint64_t multisets(std::uint64_t a, std::uint64_t n) {
  std::vector<std::uint64_t> ways(n + 1, 0);
  ways[0] = 1;
  for (std::uint64_t s = 0; s < a; ++s) {
    for (std::uint64_t j = 1; j <= n; ++j) ways[j] += ways[j - 1];
  }
  return ways[n];
}

}  // namespace oracle
