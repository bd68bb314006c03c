#pragma once

// GF(2) vectors and matrices, XOR payload arithmetic and erasure decoding.
//
// Fragments are indexed from 0 in this API; fragment i is v_{i+1} in the
// usual textbook numbering. Descriptor and shard formats use the 1-based
// numbering and convert at their boundary.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bpxor/errors.hpp"

namespace bpxor {

using Bytes = std::vector<std::uint8_t>;

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t width);

  static BitVector from_indices(std::size_t width, std::span<const std::size_t> indices);
  static BitVector from_indices(std::size_t width, std::initializer_list<std::size_t> indices);
  // Leftmost character is bit 0.
  static BitVector from_string(std::string_view bits);
  static BitVector from_u64(std::size_t width, std::uint64_t value);

  std::size_t width() const noexcept { return width_; }
  bool test(std::size_t i) const;
  void set(std::size_t i, bool value = true);
  void flip(std::size_t i);

  std::size_t count() const noexcept;
  bool none() const noexcept;
  std::vector<std::size_t> indices() const;
  std::optional<std::size_t> lowest() const noexcept;

  // Requires width() <= 64.
  std::uint64_t to_u64() const;
  std::string to_string() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  friend bool operator==(const BitVector&, const BitVector&) = default;
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b);

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

// Which fragments an encoding symbol XORs together.
using SymbolComposition = BitVector;

class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);
  explicit BitMatrix(std::vector<BitVector> rows);

  static BitMatrix identity(std::size_t n);
  static BitMatrix from_strings(std::initializer_list<std::string_view> rows);

  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }

  bool test(std::size_t r, std::size_t c) const { return rows_.at(r).test(c); }
  void set(std::size_t r, std::size_t c, bool value = true) { rows_.at(r).set(c, value); }

  const BitVector& row(std::size_t r) const { return rows_.at(r); }
  BitVector column(std::size_t c) const;
  const std::vector<BitVector>& row_vectors() const noexcept { return rows_; }

  BitMatrix transpose() const;
  // Horizontal concatenation [this | other].
  BitMatrix concat(const BitMatrix& other) const;
  BitMatrix select_columns(std::span<const std::size_t> columns) const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

std::size_t rank_gf2(const BitMatrix& m);
std::size_t rank_gf2(std::span<const BitVector> vectors);

// Throws std::invalid_argument("unequal payload lengths").
Bytes xor_bytes(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src);

struct EncodingSymbol {
  SymbolComposition composition;
  Bytes payload;
};

struct DecodeStep {
  std::size_t fragment = 0;          // fragment resolved at this step
  std::size_t symbol = 0;            // index into the symbol list
  std::vector<std::size_t> uses;     // already-resolved fragments XORed out

  friend bool operator==(const DecodeStep&, const DecodeStep&) = default;
};

struct DecodeSchedule {
  std::size_t k = 0;
  std::vector<DecodeStep> steps;

  bool complete() const noexcept { return steps.size() == k; }
  // Sorted fragment indices resolved by the schedule.
  std::vector<std::size_t> resolved() const;

  friend bool operator==(const DecodeSchedule&, const DecodeSchedule&) = default;
};

// Peeling decoder over symbol compositions. Among all symbols with exactly one
// unresolved member, the one with the lowest list index is consumed next, so
// callers control tie-breaking through the order of `symbols`. An incomplete
// schedule is a stall; its steps are the fragments recovered before stalling.
DecodeSchedule bp_schedule(std::span<const SymbolComposition> symbols, std::size_t k);

// Whether peeling recovers all k fragments; each mask holds one composition
// (bit i = fragment i). Requires k <= 64.
bool bp_peels(std::span<const std::uint64_t> masks, std::size_t k);

// 64-bit FNV-1a over the step sequence.
std::uint64_t schedule_digest(const DecodeSchedule& schedule);

struct BpDecodeResult {
  DecodeSchedule schedule;
  std::vector<std::optional<Bytes>> fragments;

  bool complete() const noexcept { return schedule.complete(); }
};

BpDecodeResult bp_decode(std::span<const EncodingSymbol> symbols, std::size_t k);

// Gaussian elimination over GF(2); throws UnderdeterminedError when the
// composition matrix has rank < k.
std::vector<Bytes> gauss_decode(std::span<const EncodingSymbol> symbols, std::size_t k);

}  // namespace bpxor
