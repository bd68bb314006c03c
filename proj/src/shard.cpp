#include "bpxor/shard.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>

namespace bpxor::storage {

namespace {

constexpr std::uint8_t kMagic[4] = {'B', 'P', 'X', 'R'};

std::size_t row_bytes(std::size_t k) { return (k + 7) / 8; }

template <typename T>
void put_le(Bytes& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(in[offset + i]) << (8 * i);
  return value;
}

std::vector<ShardFile> encode_impl(std::span<const std::uint8_t> data, const CodeDescriptor& code) {
  const std::size_t k = code.k();
  const std::size_t m = code.m();
  const std::size_t n = code.n();
  const Bytes padded = pad_payload(data, k);
  const std::size_t l = padded.size() / k;
  const Digest digest = code_digest(code);

  std::vector<ShardFile> shards;
  shards.reserve(n);
  for (std::size_t col = 0; col < n; ++col) {
    ShardFile s;
    s.code_digest = digest;
    s.k = static_cast<std::uint32_t>(k);
    s.m = static_cast<std::uint32_t>(m);
    s.n = static_cast<std::uint32_t>(n);
    s.column_index = static_cast<std::uint32_t>(col + 1);
    s.fragment_len = l;
    s.body.assign(m * l, 0);
    for (std::size_t row = 0; row < m; ++row) {
      const auto& cell = code.layout.cell(row, col);
      s.cells.push_back(cell ? *cell : SymbolComposition(k));
      if (!cell) continue;
      std::span<std::uint8_t> out(s.body.data() + row * l, l);
      for (std::size_t f : cell->indices()) xor_into(out, std::span(padded.data() + f * l, l));
    }
    shards.push_back(std::move(s));
  }
  return shards;
}

}  // namespace

InsufficientShards::InsufficientShards(std::size_t resolved, std::size_t k)
    : DecodeError("insufficient shards: peeling stalled after " + std::to_string(resolved) + " of " +
                  std::to_string(k) + " fragments"),
      resolved_(resolved),
      k_(k) {}

std::span<const std::uint8_t> ShardFile::payload(std::size_t row) const {
  if (row >= m) throw std::out_of_range("shard row out of range");
  return std::span(body.data() + row * fragment_len, fragment_len);
}

Bytes serialize_shard(const ShardFile& s) {
  if (s.cells.size() != s.m || s.body.size() != s.m * s.fragment_len) {
    throw std::invalid_argument("shard cells or body disagree with m and l");
  }
  Bytes out;
  out.reserve(kShardFixedHeader + s.m * row_bytes(s.k) + s.body.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kShardVersion);
  out.insert(out.end(), s.code_digest.begin(), s.code_digest.end());
  put_le<std::uint32_t>(out, s.k);
  put_le<std::uint32_t>(out, s.m);
  put_le<std::uint32_t>(out, s.n);
  put_le<std::uint32_t>(out, s.column_index);
  put_le<std::uint64_t>(out, s.fragment_len);
  for (const auto& c : s.cells) {
    if (c.width() != s.k) throw std::invalid_argument("cell composition width must equal k");
    Bytes row(row_bytes(s.k), 0);
    for (std::size_t f : c.indices()) row[f / 8] |= static_cast<std::uint8_t>(1U << (f % 8));
    out.insert(out.end(), row.begin(), row.end());
  }
  out.insert(out.end(), s.body.begin(), s.body.end());
  return out;
}

ShardFile parse_shard(std::span<const std::uint8_t> in) {
  if (in.size() < kShardFixedHeader) throw FormatError("corrupted shard header: file too short");
  if (std::memcmp(in.data(), kMagic, 4) != 0) throw FormatError("corrupted shard header: bad magic");
  if (in[4] != kShardVersion) throw FormatError("unsupported shard version " + std::to_string(in[4]));

  ShardFile s;
  std::copy_n(in.begin() + 5, 32, s.code_digest.begin());
  s.k = get_le<std::uint32_t>(in, 37);
  s.m = get_le<std::uint32_t>(in, 41);
  s.n = get_le<std::uint32_t>(in, 45);
  s.column_index = get_le<std::uint32_t>(in, 49);
  s.fragment_len = get_le<std::uint64_t>(in, 53);
  if (s.k == 0 || s.n == 0) throw FormatError("corrupted shard header: zero k or n");
  if (s.column_index < 1 || s.column_index > s.n) throw FormatError("corrupted shard header: column index out of range");

  const std::size_t rb = row_bytes(s.k);
  const unsigned __int128 expected =
      static_cast<unsigned __int128>(kShardFixedHeader) + static_cast<unsigned __int128>(s.m) * rb +
      static_cast<unsigned __int128>(s.m) * s.fragment_len;
  if (expected != in.size()) throw FormatError("corrupted shard: length disagrees with header");

  std::size_t offset = kShardFixedHeader;
  for (std::uint32_t row = 0; row < s.m; ++row) {
    SymbolComposition c(s.k);
    for (std::size_t b = 0; b < rb; ++b) {
      const std::uint8_t byte = in[offset + b];
      for (std::size_t bit = 0; bit < 8; ++bit) {
        if (((byte >> bit) & 1U) == 0) continue;
        const std::size_t f = b * 8 + bit;
        if (f >= s.k) throw FormatError("corrupted shard header: composition bit beyond k");
        c.set(f);
      }
    }
    s.cells.push_back(std::move(c));
    offset += rb;
  }
  s.body.assign(in.begin() + static_cast<std::ptrdiff_t>(offset), in.end());
  for (std::uint32_t row = 0; row < s.m; ++row) {
    if (!s.cells[row].none()) continue;
    const auto p = s.payload(row);
    if (std::any_of(p.begin(), p.end(), [](auto b) { return b != 0; })) {
      throw FormatError("corrupted shard: empty cell with nonzero payload");
    }
  }
  return s;
}

Bytes pad_payload(std::span<const std::uint8_t> data, std::size_t k) {
  if (k == 0) throw std::invalid_argument("padding needs k >= 1");
  Bytes out(data.begin(), data.end());
  out.push_back(0x80);
  const std::size_t rem = out.size() % k;
  if (rem != 0) out.resize(out.size() + (k - rem), 0);
  return out;
}

Bytes strip_padding(Bytes padded) {
  while (!padded.empty() && padded.back() == 0) padded.pop_back();
  if (padded.empty() || padded.back() != 0x80) throw FormatError("invalid padding in decoded content");
  padded.pop_back();
  return padded;
}

std::vector<ShardFile> encode_unchecked(std::span<const std::uint8_t> data, const CodeDescriptor& code) {
  return encode_impl(data, code);
}

std::vector<ShardFile> encode_file(std::span<const std::uint8_t> data, const CodeDescriptor& code) {
  if (!code.certificate) throw Error("refusing to encode with an uncertified code");
  if (code.certificate->t != code.t) throw Error("certificate tolerance does not match the descriptor");
  return encode_impl(data, code);
}

std::vector<Bytes> decode_fragments(std::span<const ShardFile> shards, const DecodeOptions& options) {
  if (shards.empty()) throw InsufficientShards(0, 0);
  const auto& first = shards.front();
  std::map<std::uint32_t, const ShardFile*> by_column;
  for (const auto& s : shards) {
    if (s.code_digest != first.code_digest) throw DecodeError("shards belong to different codes (digest mismatch)");
    if (s.k != first.k || s.m != first.m || s.n != first.n || s.fragment_len != first.fragment_len) {
      throw DecodeError("shards disagree on k, m, n or fragment length");
    }
    if (!by_column.emplace(s.column_index, &s).second) {
      throw DecodeError("duplicate shard for column " + std::to_string(s.column_index));
    }
  }

  std::vector<EncodingSymbol> symbols;
  for (const auto& [column, shard] : by_column) {
    for (std::size_t row = 0; row < shard->m; ++row) {
      if (shard->cells[row].none()) continue;
      const auto p = shard->payload(row);
      symbols.push_back({shard->cells[row], Bytes(p.begin(), p.end())});
    }
  }

  auto bp = bp_decode(symbols, first.k);
  if (bp.complete()) {
    std::vector<Bytes> out;
    out.reserve(first.k);
    for (auto& f : bp.fragments) out.push_back(std::move(*f));
    return out;
  }
  if (options.gauss_fallback) {
    try {
      return gauss_decode(symbols, first.k);
    } catch (const UnderdeterminedError&) {
    }
  }
  throw InsufficientShards(bp.schedule.steps.size(), first.k);
}

Bytes decode_file(std::span<const ShardFile> shards, const DecodeOptions& options) {
  const auto fragments = decode_fragments(shards, options);
  Bytes joined;
  for (const auto& f : fragments) joined.insert(joined.end(), f.begin(), f.end());
  return strip_padding(std::move(joined));
}

ShardFile repair_shard(const CodeDescriptor& code, std::size_t column, std::span<const ShardFile> shards,
                       const DecodeOptions& options) {
  if (column < 1 || column > code.n()) throw std::invalid_argument("repair column out of range");
  const Digest digest = code_digest(code);
  for (const auto& s : shards) {
    if (s.code_digest != digest) throw DecodeError("shard does not belong to the given code (digest mismatch)");
  }
  for (const auto& s : shards) {
    if (s.column_index == column) return s;
  }
  auto fragments = decode_fragments(shards, options);
  const std::size_t l = fragments.front().size();

  ShardFile s;
  s.code_digest = digest;
  s.k = static_cast<std::uint32_t>(code.k());
  s.m = static_cast<std::uint32_t>(code.m());
  s.n = static_cast<std::uint32_t>(code.n());
  s.column_index = static_cast<std::uint32_t>(column);
  s.fragment_len = l;
  s.body.assign(code.m() * l, 0);
  for (std::size_t row = 0; row < code.m(); ++row) {
    const auto& cell = code.layout.cell(row, column - 1);
    s.cells.push_back(cell ? *cell : SymbolComposition(code.k()));
    if (!cell) continue;
    std::span<std::uint8_t> out(s.body.data() + row * l, l);
    for (std::size_t f : cell->indices()) xor_into(out, fragments[f]);
  }
  return s;
}

}  // namespace bpxor::storage
