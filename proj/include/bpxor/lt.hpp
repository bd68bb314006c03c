#pragma once
// Robust-soliton LT codes as a probabilistic baseline.
//
// Randomness: every trial owns a std::mt19937_64 seeded with
// stream_seed(seed, trial), a splitmix64 mix of the two values. Uniform reals
// and bounded integers are derived from the raw 64-bit output by hand, so
// results reproduce across standard libraries and platforms.
//
// Symbols of a trial are drawn one after another from the same stream, so the
// first s symbols of a longer draw are exactly the s-symbol draw. Success is
// therefore monotone in the symbol count for every trial.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bpxor/gf2.hpp"

namespace bpxor::lt {

struct RobustSolitonParams {
  std::size_t k = 1;
  double c = 0.1;
  double delta = 0.5;
};

// mu[i-1] is the probability of degree i, i = 1..k. Throws Error
// "parameters degenerate" when R = c ln(k/delta) sqrt(k) >= k.
std::vector<double> robust_soliton(const RobustSolitonParams& params);

// The ideal soliton part before normalization: 1/k for i = 1, 1/(i(i-1)) after.
double ideal_soliton(std::size_t k, std::size_t i);

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t trial);

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform in [0, bound), by rejection.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Draws `count` symbols: degree from mu, members uniform without replacement.
std::vector<SymbolComposition> lt_symbols(const RobustSolitonParams& params, std::size_t count, std::uint64_t seed);

struct LtTrialResult {
  bool success = false;
  // Length of the shortest prefix that peels completely; on failure, all
  // symbols drawn.
  std::size_t symbols_consumed = 0;
};

LtTrialResult lt_trial(const RobustSolitonParams& params, std::size_t symbol_count, std::uint64_t seed);

// Success rate of `trials` trials (trial i seeded with stream_seed(seed, i))
// for each symbol count in `symbol_counts`.
std::vector<double> lt_success_rates(const RobustSolitonParams& params, std::span<const std::size_t> symbol_counts,
                                     std::size_t trials, std::uint64_t seed);
double lt_success_rate(const RobustSolitonParams& params, std::size_t symbol_count, std::size_t trials,
                       std::uint64_t seed);

}  // namespace bpxor::lt
