#pragma once

// Shard files: one storage server's column of encoded payloads.
//
// Layout (integers little-endian):
//   offset  size             field
//   0       4                magic "BPXR"
//   4       1                version = 1
//   5       32               code digest (SHA-256 of the canonical descriptor)
//   37      4                k
//   41      4                m
//   45      4                n
//   49      4                column index, 1-based
//   53      8                fragment length l in bytes
//   61      m * ceil(k/8)    cell compositions, one row per cell; bit i (byte
//                            i/8, bit i%8) set when fragment i+1 is a member;
//                            an all-zero row is an empty cell
//   ...     m * l            cell payloads in row order; empty cells are zeros

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bpxor/descriptor.hpp"
#include "bpxor/errors.hpp"
#include "bpxor/gf2.hpp"

namespace bpxor::storage {

inline constexpr std::uint8_t kShardVersion = 1;
inline constexpr std::size_t kShardFixedHeader = 61;

struct ShardFile {
  Digest code_digest{};
  std::uint32_t k = 0;
  std::uint32_t m = 0;
  std::uint32_t n = 0;
  std::uint32_t column_index = 0;  // 1-based
  std::uint64_t fragment_len = 0;
  std::vector<SymbolComposition> cells;  // m entries; none() marks an empty cell
  Bytes body;                            // m * fragment_len bytes

  std::span<const std::uint8_t> payload(std::size_t row) const;

  friend bool operator==(const ShardFile&, const ShardFile&) = default;
};

class InsufficientShards : public DecodeError {
 public:
  InsufficientShards(std::size_t resolved, std::size_t k);
  std::size_t resolved() const noexcept { return resolved_; }
  std::size_t k() const noexcept { return k_; }

 private:
  std::size_t resolved_;
  std::size_t k_;
};

Bytes serialize_shard(const ShardFile& shard);
// Throws FormatError on any inconsistency.
ShardFile parse_shard(std::span<const std::uint8_t> bytes);

// Appends 0x80 and zero-fills to a positive multiple of k.
Bytes pad_payload(std::span<const std::uint8_t> data, std::size_t k);
Bytes strip_padding(Bytes padded);

// Refuses descriptors without a tolerance certificate.
std::vector<ShardFile> encode_file(std::span<const std::uint8_t> data, const CodeDescriptor& code);
// Encodes without the certificate check; for simulation of arbitrary grids.
std::vector<ShardFile> encode_unchecked(std::span<const std::uint8_t> data, const CodeDescriptor& code);

struct DecodeOptions {
  // Solve by elimination when peeling stalls (for flat codes outside the BP class).
  bool gauss_fallback = false;
};

// Recovers the fragments from whatever shards are given.
std::vector<Bytes> decode_fragments(std::span<const ShardFile> shards, const DecodeOptions& options = {});
Bytes decode_file(std::span<const ShardFile> shards, const DecodeOptions& options = {});

// Rebuilds shard `column` (1-based) of `code` from surviving shards.
ShardFile repair_shard(const CodeDescriptor& code, std::size_t column, std::span<const ShardFile> shards,
                       const DecodeOptions& options = {});

}  // namespace bpxor::storage
