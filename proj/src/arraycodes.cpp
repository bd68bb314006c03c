#include "bpxor/arraycodes.hpp"

#include <algorithm>
#include <stdexcept>

#include "bpxor/errors.hpp"

namespace bpxor::array {

namespace {

constexpr std::uint64_t kDefaultPatternGuard = 1'000'000;
constexpr std::uint64_t kDefaultGridGuard = 10'000'000;

std::vector<std::size_t> complement(std::span<const std::size_t> erased, std::size_t n) {
  std::vector<std::size_t> keep;
  keep.reserve(n - erased.size());
  std::size_t e = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (e < erased.size() && erased[e] == j) {
      ++e;
    } else {
      keep.push_back(j);
    }
  }
  return keep;
}

}  // namespace

ArrayCode::ArrayCode(std::size_t m, std::size_t n, std::size_t k, std::vector<Cell> cells)
    : m_(m), n_(n), k_(k), cells_(std::move(cells)) {
  if (cells_.size() != m_ * n_) throw std::invalid_argument("array code needs exactly m * n cells");
  std::vector<bool> seen(k_, false);
  for (const auto& c : cells_) {
    if (!c) continue;
    if (c->width() != k_) throw std::invalid_argument("cell composition width must equal k");
    if (c->none()) throw std::invalid_argument("present cells must have degree >= 1");
    for (std::size_t f : c->indices()) seen[f] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw std::invalid_argument("every fragment must appear in at least one cell");
  }
}

std::vector<SymbolComposition> ArrayCode::symbols(std::span<const std::size_t> columns) const {
  std::vector<SymbolComposition> out;
  for (std::size_t col : columns) {
    if (col >= n_) throw std::out_of_range("column index out of range");
    for (std::size_t row = 0; row < m_; ++row) {
      if (const auto& c = cell(row, col)) out.push_back(*c);
    }
  }
  return out;
}

std::size_t ArrayCode::present_cells() const {
  return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return c.has_value(); }));
}

ArrayCode ArrayCode::first_columns(std::size_t count) const {
  if (count > n_) throw std::invalid_argument("cannot keep more columns than the code has");
  std::vector<Cell> kept;
  kept.reserve(m_ * count);
  for (std::size_t row = 0; row < m_; ++row) {
    for (std::size_t col = 0; col < count; ++col) kept.push_back(cell(row, col));
  }
  ArrayCode out(m_, count, k_, std::move(kept));
  out.node_map_ = node_map_;
  return out;
}

ToleranceResult verify_tolerance(const ArrayCode& code, std::size_t t, const EnumerationOptions& options) {
  const std::size_t n = code.n();
  if (t > n) throw std::invalid_argument("erasure count exceeds column count");
  const std::uint64_t patterns = binomial(n, t);
  if (patterns > options.limit_or(kDefaultPatternGuard)) {
    throw GuardExceeded("C(" + std::to_string(n) + "," + std::to_string(t) + ") = " + std::to_string(patterns) +
                        " erasure patterns exceeds the guard");
  }

  std::vector<std::uint64_t> digests(patterns);
  auto hit = find_first_combination(n, t, options.jobs, [&](std::uint64_t rank, std::span<const std::size_t> erased) {
    const auto schedule = bp_schedule(code.symbols(complement(erased, n)), code.k());
    digests[rank] = schedule_digest(schedule);
    return !schedule.complete();
  });

  ToleranceResult result;
  if (hit) {
    result.counterexample = hit->items;
    result.stalled_resolved = bp_schedule(code.symbols(complement(hit->items, n)), code.k()).resolved();
    return result;
  }
  result.certificate = ToleranceCertificate{t, patterns, std::move(digests)};
  return result;
}

ArrayCode from_graph(const graph::EdgeColoredGraph& g, std::size_t hub) {
  if (hub >= g.node_count()) throw std::invalid_argument("hub is not a node of the graph");
  const std::size_t k = g.node_count() - 1;
  auto fragment = [hub](std::size_t node) { return node < hub ? node : node - 1; };

  const auto table = graph::color_table(g);
  std::size_t m = 0;
  for (const auto& column : table.columns) m = std::max(m, column.size());

  const std::size_t n = g.color_count();
  std::vector<Cell> cells(m * n);
  for (std::size_t col = 0; col < n; ++col) {
    const auto& column = table.columns[col];
    for (std::size_t row = 0; row < column.size(); ++row) {
      const auto& e = column[row];
      SymbolComposition c(k);
      if (e.u != hub) c.set(fragment(e.u));
      if (e.v != hub) c.set(fragment(e.v));
      cells[row * n + col] = std::move(c);
    }
  }

  NodeMap map{hub, {}};
  for (std::size_t node = 0; node < g.node_count(); ++node) {
    if (node != hub) map.fragment_nodes.push_back(node);
  }
  ArrayCode code(m, n, k, std::move(cells));
  code.set_node_map(std::move(map));
  return code;
}

ArrayCode edge_code(const graph::EdgeColoredGraph& g) {
  const std::size_t k = g.node_count();
  const auto table = graph::color_table(g);
  std::size_t m = 0;
  for (const auto& column : table.columns) m = std::max(m, column.size());
  const std::size_t n = g.color_count();
  std::vector<Cell> cells(m * n);
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t row = 0; row < table.columns[col].size(); ++row) {
      const auto& e = table.columns[col][row];
      cells[row * n + col] = SymbolComposition::from_indices(k, {e.u, e.v});
    }
  }
  return ArrayCode(m, n, k, std::move(cells));
}

graph::EdgeColoredGraph to_graph(const ArrayCode& code) {
  const std::size_t hub = code.k();
  std::vector<graph::Edge> edges;
  for (std::size_t col = 0; col < code.n(); ++col) {
    for (std::size_t row = 0; row < code.m(); ++row) {
      const auto& c = code.cell(row, col);
      if (!c) continue;
      const auto members = c->indices();
      if (members.size() == 1) {
        edges.push_back({hub, members[0], col});
      } else if (members.size() == 2) {
        edges.push_back({members[0], members[1], col});
      } else {
        throw std::invalid_argument("not an edge-representable code: cell of degree " +
                                    std::to_string(members.size()));
      }
    }
  }
  try {
    return graph::EdgeColoredGraph(code.k() + 1, code.n(), std::move(edges));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not an edge-representable code: repeated cell within a column");
  }
}

std::size_t smallest_odd_prime_at_least(std::size_t n) {
  std::size_t p = std::max<std::size_t>(n, 3);
  while (!graph::is_odd_prime(p)) ++p;
  return p;
}

ArrayCode construct_two_survivor(std::size_t n) {
  if (n < 3) throw std::invalid_argument("two-survivor construction needs n >= 3");
  const std::size_t p = smallest_odd_prime_at_least(n);
  auto code = from_graph(graph::p1f_graph(p, p), p - 1).first_columns(n);
  if (!verify_tolerance(code, n - 2).certified()) {
    throw Error("two-survivor construction failed tolerance verification");
  }
  return code;
}

std::uint64_t max_n_bound(std::uint64_t n0, std::uint64_t m) {
  if (n0 < 3) throw std::invalid_argument("the bound needs n0 >= 3");
  if (m < 1) throw std::invalid_argument("the bound needs m >= 1");
  using u128 = unsigned __int128;
  const u128 rows_term = static_cast<u128>(n0 - 2) * m + 1;
  const u128 num = static_cast<u128>(n0 - 1) * (static_cast<u128>(n0) * rows_term - 2);
  const u128 den = static_cast<u128>(n0 - 2) * rows_term;
  return static_cast<std::uint64_t>(num / den);
}

std::map<std::size_t, std::size_t> degree_profile(const ArrayCode& code) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& c : code.cells()) {
    if (c) ++hist[c->count()];
  }
  return hist;
}

ArraySearchOutcome search_low_degree_codes(std::size_t m, std::size_t n, std::size_t k, std::size_t t,
                                           std::size_t max_degree, const EnumerationOptions& options) {
  if (k < 1 || k > 64) throw std::invalid_argument("search needs 1 <= k <= 64");
  if (t > n) throw std::invalid_argument("erasure count exceeds column count");
  if (max_degree < 1) throw std::invalid_argument("max_degree must be at least 1");

  // Choices ordered by degree, then lexicographically by members.
  std::vector<std::uint64_t> choices;
  for (std::size_t d = 1; d <= std::min(max_degree, k); ++d) {
    std::vector<std::size_t> combo(d);
    for (std::size_t i = 0; i < d; ++i) combo[i] = i;
    do {
      std::uint64_t mask = 0;
      for (std::size_t f : combo) mask |= 1ULL << f;
      choices.push_back(mask);
    } while (next_combination(combo, k));
  }

  const std::size_t cells = m * n;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    if (total > options.limit_or(kDefaultGridGuard) / choices.size() + 1) {
      throw GuardExceeded("grid search space exceeds the guard");
    }
    total *= choices.size();
  }
  if (total > options.limit_or(kDefaultGridGuard)) throw GuardExceeded("grid search space exceeds the guard");

  const std::uint64_t full = k == 64 ? ~0ULL : ((1ULL << k) - 1);
  // Cell index c = row * n + col; digit c is the most significant first.
  auto decode_grid = [&](std::uint64_t index) {
    std::vector<std::uint64_t> grid(cells);
    for (std::size_t c = cells; c-- > 0;) {
      grid[c] = choices[index % choices.size()];
      index /= choices.size();
    }
    return grid;
  };

  auto hit = find_first_index(total, options.jobs, [&](std::uint64_t index) {
    const auto grid = decode_grid(index);
    std::uint64_t coverage = 0;
    for (auto g : grid) coverage |= g;
    if (coverage != full) return false;
    std::vector<std::size_t> erased(t);
    for (std::size_t i = 0; i < t; ++i) erased[i] = i;
    std::vector<std::uint64_t> survivors;
    do {
      survivors.clear();
      for (std::size_t col : complement(erased, n)) {
        for (std::size_t row = 0; row < m; ++row) survivors.push_back(grid[row * n + col]);
      }
      if (!bp_peels(survivors, k)) return false;
    } while (next_combination(erased, n));
    return true;
  });

  if (!hit) return {std::nullopt, total};
  const auto grid = decode_grid(*hit);
  std::vector<Cell> out;
  out.reserve(cells);
  for (auto g : grid) out.emplace_back(BitVector::from_u64(k, g));
  return {ArrayCode(m, n, k, std::move(out)), *hit + 1};
}

}  // namespace bpxor::array
