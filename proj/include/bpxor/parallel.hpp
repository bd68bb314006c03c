#pragma once

// Combination enumeration and a worker pool that finds the lexicographically
// first combination satisfying a predicate, independent of worker count.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace bpxor {

// C(n, t); saturates at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t t) noexcept;

// The rank-th t-subset of {0..n-1} in lexicographic order.
std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n, std::size_t t);
bool next_combination(std::span<std::size_t> combo, std::size_t n);

// Worker count: BPXOR_JOBS if set and positive, else 1.
unsigned default_jobs();

struct CombinationHit {
  std::uint64_t rank = 0;
  std::vector<std::size_t> items;
};

// Calls `probe(rank, combo)` over all t-subsets of {0..n-1} and returns the
// lowest-ranked combination for which it returned true. Ranks above a known
// hit may be skipped. `probe` must be safe to call concurrently.
using CombinationProbe = std::function<bool(std::uint64_t, std::span<const std::size_t>)>;
std::optional<CombinationHit> find_first_combination(std::size_t n, std::size_t t, unsigned jobs,
                                                     const CombinationProbe& probe);

}  // namespace bpxor

namespace bpxor {

struct EnumerationOptions {
  unsigned jobs = default_jobs();
  // Upper bound on enumerated patterns or candidates; 0 means "use the
  // operation's documented default".
  std::uint64_t max_patterns = 0;

  std::uint64_t limit_or(std::uint64_t fallback) const noexcept {
    return max_patterns == 0 ? fallback : max_patterns;
  }
};

}  // namespace bpxor

namespace bpxor {

// Lowest index in [0, total) for which `probe` returns true.
std::optional<std::uint64_t> find_first_index(std::uint64_t total, unsigned jobs,
                                              const std::function<bool(std::uint64_t)>& probe);

}  // namespace bpxor
