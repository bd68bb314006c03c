#pragma once

// Flat XOR codes: every encoded symbol is one column of a k x n generator
// matrix and the erasure unit is a single symbol.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bpxor/gf2.hpp"
#include "bpxor/parallel.hpp"

namespace bpxor::flat {

enum class DecoderClass { BP, Gauss };

std::string to_string(DecoderClass c);
DecoderClass decoder_class_from_string(std::string_view s);

struct FlatCode {
  BitMatrix generator;  // k x n
  std::size_t claimed_distance = 0;
  DecoderClass decoder = DecoderClass::BP;

  std::size_t k() const noexcept { return generator.rows(); }
  std::size_t n() const noexcept { return generator.cols(); }
  // Column j lists the fragments XORed into encoded symbol j.
  std::vector<SymbolComposition> columns() const;
};

// Checks k >= 1, n >= k, no zero column, claimed distance within Singleton.
FlatCode make_flat_code(BitMatrix generator, std::size_t claimed_distance, DecoderClass decoder);

// Systematic generator [I_k | A^T]; parity_rows[i] is the parity part of row i.
FlatCode systematic_code(const std::vector<BitVector>& parity_rows, std::size_t claimed_distance,
                         DecoderClass decoder);

// Parity part of a vector whose first component is the most significant bit of
// `value`, matching the usual left-to-right way of writing the matrices.
BitVector msb_first(std::size_t width, std::uint64_t value);

FlatCode construct_parity(std::size_t k);
// The [5,2,3], [6,3,3] and [7,4,3] codes with three redundancy columns.
std::vector<FlatCode> canonical_d3_small();

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

struct BoundQuery {
  std::size_t redundancy = 0;  // r = n - k
  std::size_t distance = 0;    // d in {2, 3, 4, 5}
};

// Largest k admitted by the existence bounds for distance d and redundancy r.
// d = 2 is unbounded (kUnbounded). d = 5 counts the sets produced by the
// displayed subset families, which is a sufficient bound only.
std::uint64_t max_k(BoundQuery query);

FlatCode construct_d3(std::size_t n, std::size_t k);
FlatCode construct_d4(std::size_t n, std::size_t k);
FlatCode construct_d5(std::size_t n, std::size_t k);

// Parity columns of the distance-5 construction, as characteristic vectors of
// four-element subsets of {a_1..a_r}, in family order.
std::vector<BitVector> d5_subset_family(std::size_t r);

struct DistanceOptions {
  std::size_t max_k = 24;
};

// Exact minimum weight over the 2^k - 1 nonzero messages.
std::size_t verify_distance(const FlatCode& code, const DistanceOptions& options = {});

// First t-subset of erased columns (lexicographic, 0-based) after which
// peeling fails, or nullopt when every pattern decodes. Default guard 10^7.
std::optional<std::vector<std::size_t>> verify_bp(const FlatCode& code, std::size_t t,
                                                  const EnumerationOptions& options = {});
// Same, for Gaussian elimination: surviving columns must have rank k.
std::optional<std::vector<std::size_t>> verify_gauss(const FlatCode& code, std::size_t t,
                                                     const EnumerationOptions& options = {});

struct SearchOutcome {
  std::optional<FlatCode> code;
  std::uint64_t candidates_examined = 0;

  bool exhausted() const noexcept { return !code.has_value(); }
};

// Enumerates generator matrices as sorted multisets of nonzero columns in
// {0,1}^k and returns the first that tolerates every t-erasure under the given
// decoder. The default guard admits the k = 4, n = 8 space.
SearchOutcome exhaustive_search(std::size_t n, std::size_t k, std::size_t t, DecoderClass decoder,
                                const EnumerationOptions& options = {});

}  // namespace bpxor::flat
