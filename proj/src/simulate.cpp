#include "bpxor/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "bpxor/lt.hpp"
#include "bpxor/parallel.hpp"
#include "bpxor/shard.hpp"

namespace bpxor::storage {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Full: return "full";
    case Outcome::Partial: return "partial";
    case Outcome::Fail: return "fail";
  }
  return "fail";
}

std::size_t SimReport::full() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const TrialRecord& r) { return r.outcome == Outcome::Full; }));
}

namespace {

constexpr std::uint64_t kDefaultPatternGuard = 1'000'000;

TrialRecord run_pattern(const std::vector<ShardFile>& shards, const Bytes& original, std::vector<std::size_t> erased,
                        std::size_t k, const DecodeOptions& decode_options) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord r;
  std::vector<ShardFile> survivors;
  for (const auto& s : shards) {
    if (std::find(erased.begin(), erased.end(), s.column_index - 1) != erased.end()) continue;
    for (const auto& c : s.cells) r.symbols_consumed += c.none() ? 0 : 1;
    survivors.push_back(s);
  }
  try {
    const Bytes decoded = decode_file(survivors, decode_options);
    r.recovered = k;
    r.outcome = decoded == original ? Outcome::Full : Outcome::Fail;
  } catch (const InsufficientShards& e) {
    r.recovered = e.resolved();
    r.outcome = e.resolved() == 0 ? Outcome::Fail : Outcome::Partial;
  } catch (const DecodeError&) {
    r.outcome = Outcome::Fail;
  }
  for (auto& c : erased) ++c;
  r.erased = std::move(erased);
  r.wall_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start).count());
  return r;
}

}  // namespace

SimReport simulate(const CodeDescriptor& code, const ErasureMode& mode, const SimulateOptions& options) {
  const std::size_t n = code.n();
  const std::size_t k = code.k();
  const std::size_t len = options.payload_len ? options.payload_len : 8 * k;

  Bytes original(len);
  {
    lt::Sampler rng(options.payload_seed);
    for (auto& b : original) b = static_cast<std::uint8_t>(rng.below(256));
  }
  const auto shards = encode_unchecked(original, code);
  const DecodeOptions decode_options{code.gauss_decoding()};

  SimReport report;
  if (const auto* all = std::get_if<AllPatterns>(&mode)) {
    if (all->t > n) throw std::invalid_argument("cannot erase more columns than the code has");
    const std::uint64_t total = binomial(n, all->t);
    const std::uint64_t guard = options.max_patterns ? options.max_patterns : kDefaultPatternGuard;
    if (total > guard) {
      throw GuardExceeded("C(" + std::to_string(n) + "," + std::to_string(all->t) + ") = " + std::to_string(total) +
                          " patterns exceeds the guard of " + std::to_string(guard) + "; raise --max-patterns");
    }
    std::vector<std::size_t> combo(all->t);
    std::iota(combo.begin(), combo.end(), std::size_t{0});
    std::size_t trial = 0;
    do {
      auto rec = run_pattern(shards, original, combo, k, decode_options);
      rec.trial = trial++;
      report.trials.push_back(std::move(rec));
    } while (next_combination(combo, n));
  } else {
    const auto& rnd = std::get<RandomPatterns>(mode);
    if (rnd.t > n) throw std::invalid_argument("cannot erase more columns than the code has");
    std::vector<std::size_t> pool(n);
    for (std::size_t trial = 0; trial < rnd.trials; ++trial) {
      lt::Sampler rng(lt::stream_seed(rnd.seed, trial));
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t j = 0; j < rnd.t; ++j) {
        std::swap(pool[j], pool[j + rng.below(n - j)]);
      }
      std::vector<std::size_t> erased(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(rnd.t));
      std::sort(erased.begin(), erased.end());
      auto rec = run_pattern(shards, original, std::move(erased), k, decode_options);
      rec.trial = trial;
      report.trials.push_back(std::move(rec));
    }
  }
  return report;
}

nlohmann::json to_json(const TrialRecord& r) {
  return {{"trial", r.trial},
          {"erased", r.erased},
          {"outcome", to_string(r.outcome)},
          {"recovered", r.recovered},
          {"symbols_consumed", r.symbols_consumed},
          {"wall_ns", r.wall_ns}};
}

std::string to_json_lines(const SimReport& report) {
  std::string out;
  for (const auto& r : report.trials) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

}  // namespace bpxor::storage
