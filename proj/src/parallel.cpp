#include "bpxor/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace bpxor {

std::uint64_t binomial(std::uint64_t n, std::uint64_t t) noexcept {
  if (t > n) return 0;
  t = std::min(t, n - t);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= t; ++i) {
    acc = acc * (n - t + i) / i;
    if (acc > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::size_t> unrank_combination(std::uint64_t rank, std::size_t n, std::size_t t) {
  if (rank >= binomial(n, t)) throw std::out_of_range("combination rank out of range");
  std::vector<std::size_t> combo;
  combo.reserve(t);
  std::size_t next = 0;
  for (std::size_t slot = 0; slot < t; ++slot) {
    // Skip first elements whose block of completions lies wholly below rank.
    for (;; ++next) {
      const std::uint64_t block = binomial(n - next - 1, t - slot - 1);
      if (rank < block) break;
      rank -= block;
    }
    combo.push_back(next++);
  }
  return combo;
}

bool next_combination(std::span<std::size_t> combo, std::size_t n) {
  const std::size_t t = combo.size();
  for (std::size_t i = t; i-- > 0;) {
    if (combo[i] < n - t + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < t; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

unsigned default_jobs() {
  if (const char* env = std::getenv("BPXOR_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

std::optional<CombinationHit> find_first_combination(std::size_t n, std::size_t t, unsigned jobs,
                                                     const CombinationProbe& probe) {
  const std::uint64_t total = binomial(n, t);
  if (total == 0) return std::nullopt;
  constexpr std::uint64_t kChunk = 512;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  jobs = std::max(1U, static_cast<unsigned>(std::min<std::uint64_t>(jobs, chunks)));

  constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  std::atomic<std::uint64_t> next_chunk{0};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      const std::uint64_t begin = c * kChunk;
      if (begin >= best.load()) return;  // chunks are handed out in order
      const std::uint64_t end = std::min(total, begin + kChunk);
      auto combo = unrank_combination(begin, n, t);
      for (std::uint64_t r = begin; r < end; ++r) {
        if (probe(r, combo)) {
          std::uint64_t cur = best.load();
          while (r < cur && !best.compare_exchange_weak(cur, r)) {
          }
          break;
        }
        if (r + 1 < end) next_combination(combo, n);
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  const std::uint64_t hit = best.load();
  if (hit == kNone) return std::nullopt;
  return CombinationHit{hit, unrank_combination(hit, n, t)};
}

std::optional<std::uint64_t> find_first_index(std::uint64_t total, unsigned jobs,
                                              const std::function<bool(std::uint64_t)>& probe) {
  if (total == 0) return std::nullopt;
  constexpr std::uint64_t kChunk = 1024;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  jobs = std::max(1U, static_cast<unsigned>(std::min<std::uint64_t>(jobs, chunks)));

  constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
  std::atomic<std::uint64_t> best{kNone};
  std::atomic<std::uint64_t> next_chunk{0};

  auto worker = [&] {
    for (;;) {
      const std::uint64_t c = next_chunk.fetch_add(1);
      if (c >= chunks) return;
      const std::uint64_t begin = c * kChunk;
      if (begin >= best.load()) return;
      const std::uint64_t end = std::min(total, begin + kChunk);
      for (std::uint64_t i = begin; i < end; ++i) {
        if (probe(i)) {
          std::uint64_t cur = best.load();
          while (i < cur && !best.compare_exchange_weak(cur, i)) {
          }
          break;
        }
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  const std::uint64_t hit = best.load();
  if (hit == kNone) return std::nullopt;
  return hit;
}

}  // namespace bpxor
