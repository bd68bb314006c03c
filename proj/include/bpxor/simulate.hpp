#pragma once
// Erasure simulation: encode a synthetic payload, erase whole columns, and try
// to decode from what survives.

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bpxor/descriptor.hpp"

namespace bpxor::storage {

struct AllPatterns {
  std::size_t t = 0;
};
// Each trial erases t distinct columns chosen with stream_seed(seed, trial).
struct RandomPatterns {
  std::size_t t = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
};
using ErasureMode = std::variant<AllPatterns, RandomPatterns>;

enum class Outcome { Full, Partial, Fail };
std::string to_string(Outcome o);

struct TrialRecord {
  std::size_t trial = 0;
  std::vector<std::size_t> erased;  // 1-based columns
  Outcome outcome = Outcome::Fail;
  std::size_t recovered = 0;        // fragments recovered
  std::size_t symbols_consumed = 0; // present cells in the surviving shards
  std::uint64_t wall_ns = 0;
};

struct SimReport {
  std::vector<TrialRecord> trials;
  std::size_t full() const;
};

struct SimulateOptions {
  // Synthetic payload length in bytes; 0 picks 8 bytes per fragment.
  std::size_t payload_len = 0;
  std::uint64_t payload_seed = 1;
  // Guard on the number of patterns in all-patterns mode (0: 10^6).
  std::uint64_t max_patterns = 0;
};

SimReport simulate(const CodeDescriptor& code, const ErasureMode& mode, const SimulateOptions& options = {});

nlohmann::json to_json(const TrialRecord& r);
// One JSON object per line, one line per trial.
std::string to_json_lines(const SimReport& report);

}  // namespace bpxor::storage
