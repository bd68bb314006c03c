#include "bpxor/lt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace bpxor::lt {

double ideal_soliton(std::size_t k, std::size_t i) {
  if (i == 1) return 1.0 / static_cast<double>(k);
  const double d = static_cast<double>(i);
  return 1.0 / (d * (d - 1.0));
}

std::vector<double> robust_soliton(const RobustSolitonParams& p) {
  if (p.k == 0) throw std::invalid_argument("robust soliton needs k >= 1");
  if (!(p.c > 0.0)) throw std::invalid_argument("robust soliton needs c > 0");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("robust soliton needs 0 < delta < 1");
  const double k = static_cast<double>(p.k);
  std::vector<double> mu(p.k);
  for (std::size_t i = 1; i <= p.k; ++i) mu[i - 1] = ideal_soliton(p.k, i);
  if (p.k > 1) {
    const double r = p.c * std::log(k / p.delta) * std::sqrt(k);
    if (r >= k) throw Error("parameters degenerate");
    const auto pivot = static_cast<std::size_t>(std::ceil(k / r));
    for (std::size_t i = 1; i < pivot && i <= p.k; ++i) mu[i - 1] += r / (static_cast<double>(i) * k);
    if (pivot <= p.k) mu[pivot - 1] += r * std::log(r / p.delta) / k;
  }
  const double total = std::accumulate(mu.begin(), mu.end(), 0.0);
  for (double& x : mu) x /= total;
  return mu;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial) { return splitmix64(splitmix64(seed) ^ trial); }

double Sampler::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Sampler::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x < limit) return x % bound;
  }
}

namespace {

class SymbolSource {
 public:
  SymbolSource(const RobustSolitonParams& p, std::uint64_t seed) : k_(p.k), sampler_(seed), pool_(p.k) {
    const auto mu = robust_soliton(p);
    cdf_.resize(mu.size());
    std::partial_sum(mu.begin(), mu.end(), cdf_.begin());
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
  }

  SymbolComposition next() {
    const double u = sampler_.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t degree = static_cast<std::size_t>(it - cdf_.begin()) + 1;
    degree = std::min(degree, k_);
    // Partial Fisher-Yates over a pool that is reset each time.
    std::iota(pool_.begin(), pool_.end(), std::size_t{0});
    SymbolComposition c(k_);
    for (std::size_t j = 0; j < degree; ++j) {
      const std::size_t pick = j + static_cast<std::size_t>(sampler_.below(k_ - j));
      std::swap(pool_[j], pool_[pick]);
      c.set(pool_[j]);
    }
    return c;
  }

 private:
  std::size_t k_;
  Sampler sampler_;
  std::vector<double> cdf_;
  std::vector<std::size_t> pool_;
};

// Online peeling: feed symbols one at a time and report how many were needed
// to resolve every fragment.
class OnlinePeeler {
 public:
  explicit OnlinePeeler(std::size_t k) : k_(k), resolved_(k, false), touching_(k) {}

  bool complete() const noexcept { return resolved_count_ == k_; }

  void add(SymbolComposition c) {
    for (std::size_t f : c.indices()) {
      if (resolved_[f]) c.flip(f);
    }
    const std::size_t id = pending_.size();
    pending_.push_back(c);
    for (std::size_t f : c.indices()) touching_[f].push_back(id);
    if (c.count() == 1) ripple_.push_back(id);
    drain();
  }

 private:
  void drain() {
    while (!ripple_.empty()) {
      const std::size_t id = ripple_.back();
      ripple_.pop_back();
      if (pending_[id].count() != 1) continue;
      const std::size_t f = *pending_[id].lowest();
      resolved_[f] = true;
      ++resolved_count_;
      for (std::size_t other : touching_[f]) {
        if (!pending_[other].test(f)) continue;
        pending_[other].flip(f);
        if (pending_[other].count() == 1) ripple_.push_back(other);
      }
      touching_[f].clear();
    }
  }

  std::size_t k_;
  std::size_t resolved_count_ = 0;
  std::vector<bool> resolved_;
  std::vector<std::vector<std::size_t>> touching_;
  std::vector<SymbolComposition> pending_;
  std::vector<std::size_t> ripple_;
};

// Shortest peeling prefix among the first `limit` symbols, or 0 if none.
std::size_t shortest_prefix(const RobustSolitonParams& p, std::size_t limit, std::uint64_t seed) {
  SymbolSource source(p, seed);
  OnlinePeeler peeler(p.k);
  for (std::size_t s = 1; s <= limit; ++s) {
    peeler.add(source.next());
    if (peeler.complete()) return s;
  }
  return 0;
}

}  // namespace

std::vector<SymbolComposition> lt_symbols(const RobustSolitonParams& params, std::size_t count, std::uint64_t seed) {
  SymbolSource source(params, seed);
  std::vector<SymbolComposition> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(source.next());
  return out;
}

LtTrialResult lt_trial(const RobustSolitonParams& params, std::size_t symbol_count, std::uint64_t seed) {
  if (symbol_count == 0) throw std::invalid_argument("lt_trial needs at least one symbol");
  const std::size_t prefix = shortest_prefix(params, symbol_count, seed);
  if (prefix == 0) return {false, symbol_count};
  return {true, prefix};
}

std::vector<double> lt_success_rates(const RobustSolitonParams& params, std::span<const std::size_t> symbol_counts,
                                     std::size_t trials, std::uint64_t seed) {
  std::vector<double> rates(symbol_counts.size(), 0.0);
  if (symbol_counts.empty() || trials == 0) return rates;
  const std::size_t limit = *std::max_element(symbol_counts.begin(), symbol_counts.end());
  std::vector<std::size_t> wins(symbol_counts.size(), 0);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t prefix = shortest_prefix(params, limit, stream_seed(seed, t));
    if (prefix == 0) continue;
    for (std::size_t j = 0; j < symbol_counts.size(); ++j) {
      if (prefix <= symbol_counts[j]) ++wins[j];
    }
  }
  for (std::size_t j = 0; j < rates.size(); ++j) {
    rates[j] = static_cast<double>(wins[j]) / static_cast<double>(trials);
  }
  return rates;
}

double lt_success_rate(const RobustSolitonParams& params, std::size_t symbol_count, std::size_t trials,
                       std::uint64_t seed) {
  const std::size_t counts[] = {symbol_count};
  return lt_success_rates(params, counts, trials, seed).front();
}

}  // namespace bpxor::lt
