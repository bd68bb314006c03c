#include "bpxor/flat.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "bpxor/errors.hpp"

namespace bpxor::flat {

namespace {

constexpr std::uint64_t kDefaultPatternGuard = 10'000'000;
// Number of sorted 8-column multisets over the 15 nonzero vectors of {0,1}^4.
constexpr std::uint64_t kDefaultSearchGuard = 319'770;

std::vector<std::uint64_t> column_masks(const FlatCode& code) {
  std::vector<std::uint64_t> masks;
  masks.reserve(code.n());
  for (const auto& c : code.columns()) masks.push_back(c.to_u64());
  return masks;
}

std::size_t mask_rank(std::span<const std::uint64_t> vectors) {
  std::uint64_t basis[64] = {};
  std::size_t rank = 0;
  for (std::uint64_t v : vectors) {
    for (int bit = 63; bit >= 0 && v != 0; --bit) {
      if (((v >> bit) & 1U) == 0) continue;
      if (basis[bit] == 0) {
        basis[bit] = v;
        ++rank;
        v = 0;
      } else {
        v ^= basis[bit];
      }
    }
  }
  return rank;
}

// Survivors of erasing `erased` (sorted) from columns 0..n-1.
template <typename T>
void collect_survivors(std::span<const T> all, std::span<const std::size_t> erased, std::vector<T>& out) {
  out.clear();
  std::size_t e = 0;
  for (std::size_t j = 0; j < all.size(); ++j) {
    if (e < erased.size() && erased[e] == j) {
      ++e;
    } else {
      out.push_back(all[j]);
    }
  }
}

bool survivors_decode(std::span<const std::uint64_t> survivors, std::size_t k, DecoderClass decoder) {
  return decoder == DecoderClass::BP ? bp_peels(survivors, k) : mask_rank(survivors) == k;
}

std::optional<std::vector<std::size_t>> verify_erasures(const FlatCode& code, std::size_t t,
                                                        DecoderClass decoder,
                                                        const EnumerationOptions& options) {
  const std::size_t n = code.n();
  const std::size_t k = code.k();
  if (t > n) throw std::invalid_argument("erasure count exceeds code length");
  const std::uint64_t patterns = binomial(n, t);
  if (patterns > options.limit_or(kDefaultPatternGuard)) {
    throw GuardExceeded("C(" + std::to_string(n) + "," + std::to_string(t) + ") = " +
                        std::to_string(patterns) + " erasure patterns exceeds the guard");
  }

  std::optional<CombinationHit> hit;
  if (k <= 64) {
    const auto masks = column_masks(code);
    hit = find_first_combination(n, t, options.jobs, [&](std::uint64_t, std::span<const std::size_t> erased) {
      std::vector<std::uint64_t> survivors;
      collect_survivors<std::uint64_t>(masks, erased, survivors);
      return !survivors_decode(survivors, k, decoder);
    });
  } else {
    const auto columns = code.columns();
    hit = find_first_combination(n, t, options.jobs, [&](std::uint64_t, std::span<const std::size_t> erased) {
      std::vector<SymbolComposition> survivors;
      collect_survivors<SymbolComposition>(columns, erased, survivors);
      if (decoder == DecoderClass::BP) return !bp_schedule(survivors, k).complete();
      return rank_gf2(survivors) < k;
    });
  }
  if (!hit) return std::nullopt;
  return hit->items;
}

}  // namespace

std::string to_string(DecoderClass c) { return c == DecoderClass::BP ? "bp" : "gauss"; }

DecoderClass decoder_class_from_string(std::string_view s) {
  if (s == "bp") return DecoderClass::BP;
  if (s == "gauss") return DecoderClass::Gauss;
  throw std::invalid_argument("unknown decoder class '" + std::string(s) + "'");
}

std::vector<SymbolComposition> FlatCode::columns() const {
  std::vector<SymbolComposition> cols;
  cols.reserve(n());
  for (std::size_t j = 0; j < n(); ++j) cols.push_back(generator.column(j));
  return cols;
}

FlatCode make_flat_code(BitMatrix generator, std::size_t claimed_distance, DecoderClass decoder) {
  const std::size_t k = generator.rows();
  const std::size_t n = generator.cols();
  if (k < 1) throw std::invalid_argument("flat code needs k >= 1");
  if (n < k) throw std::invalid_argument("flat code needs n >= k");
  if (claimed_distance > n - k + 1) throw std::invalid_argument("claimed distance exceeds n - k + 1");
  for (std::size_t j = 0; j < n; ++j) {
    if (generator.column(j).none()) throw std::invalid_argument("generator has an all-zero column");
  }
  return FlatCode{std::move(generator), claimed_distance, decoder};
}

FlatCode systematic_code(const std::vector<BitVector>& parity_rows, std::size_t claimed_distance,
                         DecoderClass decoder) {
  if (parity_rows.empty()) throw std::invalid_argument("systematic code needs k >= 1");
  return make_flat_code(BitMatrix::identity(parity_rows.size()).concat(BitMatrix(parity_rows)),
                        claimed_distance, decoder);
}

BitVector msb_first(std::size_t width, std::uint64_t value) {
  BitVector v(width);
  for (std::size_t j = 0; j < width; ++j) {
    if ((value >> (width - 1 - j)) & 1U) v.set(j);
  }
  return v;
}

FlatCode construct_parity(std::size_t k) {
  if (k < 1) throw std::invalid_argument("parity code needs k >= 1");
  std::vector<BitVector> parity(k, BitVector::from_string("1"));
  return systematic_code(parity, 2, DecoderClass::BP);
}

std::vector<FlatCode> canonical_d3_small() {
  auto rows = [](std::initializer_list<std::string_view> bits) {
    std::vector<BitVector> v;
    for (auto b : bits) v.push_back(BitVector::from_string(b));
    return v;
  };
  return {
      systematic_code(rows({"101", "011"}), 3, DecoderClass::BP),
      systematic_code(rows({"011", "101", "111"}), 3, DecoderClass::BP),
      systematic_code(rows({"011", "101", "110", "111"}), 3, DecoderClass::BP),
  };
}

namespace {

// floor(x / 2) for possibly negative x.
long floor_half(long x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

long ceil_div(long a, long b) { return (a + b - 1) / b; }

struct D5FamilySizes {
  std::size_t level1 = 0;
  std::size_t level2 = 0;  // each of V^{2,0} and V^{2,1}
  std::size_t level3 = 0;  // each of V^{3,0} and V^{3,1}
};

D5FamilySizes d5_sizes(std::size_t r) {
  const long rr = static_cast<long>(r);
  auto clamp = [](long v) { return static_cast<std::size_t>(std::max(0L, v)); };
  return {clamp(floor_half(rr - 2)), clamp(floor_half(ceil_div(rr, 2) - 2)),
          clamp(floor_half(ceil_div(rr, 4) - 2))};
}

void check_query(const BoundQuery& q) {
  if (q.distance < 2 || q.distance > 5) {
    throw std::invalid_argument("unsupported distance " + std::to_string(q.distance) + " (expected 2..5)");
  }
  if (q.redundancy + 1 < q.distance) throw std::invalid_argument("redundancy must be at least d - 1");
  if (q.redundancy > 62) throw std::invalid_argument("redundancy above 62 is not supported");
}

bool d3_weight(int w) { return w >= 2; }
bool d4_weight(int w) { return w >= 3 && w % 2 == 1; }

// Pad `part` with the lowest bits outside `avoid` (then any bits) until its
// weight is accepted. Returns 0 when no accepted weight fits in r bits.
std::uint64_t pad_to_weight(std::uint64_t part, std::uint64_t avoid, std::size_t r, bool (*accept)(int)) {
  const std::uint64_t all = (1ULL << r) - 1;
  for (std::uint64_t pool : {all & ~avoid, all}) {
    std::uint64_t v = part;
    for (std::size_t b = 0; b < r && !accept(std::popcount(v)); ++b) {
      if ((pool >> b & 1) && !(v >> b & 1)) v |= 1ULL << b;
    }
    if (accept(std::popcount(v))) return v;
  }
  return 0;
}

// Columns of accepted weight, as small as possible in integer order, that
// together touch every one of the r parity rows. The first k accepted values
// are used when they already cover; otherwise the last j are swapped for
// covers of the missing rows, for the smallest j that works.
std::vector<BitVector> ascending_columns(std::size_t r, std::size_t k, bool (*accept)(int weight)) {
  std::vector<std::uint64_t> first;
  for (std::uint64_t v = 1; first.size() < k && v < (1ULL << r); ++v) {
    if (accept(std::popcount(v))) first.push_back(v);
  }
  if (first.size() < k) throw std::invalid_argument("not enough admissible columns");
  const std::uint64_t all = (1ULL << r) - 1;
  std::vector<std::uint64_t> chosen;
  for (std::size_t j = 0; j <= k && chosen.empty(); ++j) {
    std::vector<std::uint64_t> picks(first.begin(), first.end() - static_cast<std::ptrdiff_t>(j));
    std::uint64_t covered = 0;
    for (auto v : picks) covered |= v;
    const std::uint64_t missing = all & ~covered;
    if (j == 0) {
      if (missing == 0) chosen = picks;
      continue;
    }
    const auto need = static_cast<std::size_t>(std::popcount(missing));
    if (need < j) break;
    // Split the missing rows into j runs of near-equal size.
    std::vector<std::uint64_t> parts(j, 0);
    std::size_t idx = 0;
    for (std::size_t b = 0; b < r; ++b) {
      if (missing >> b & 1) parts[idx++ * j / need] |= 1ULL << b;
    }
    bool ok = true;
    for (auto part : parts) {
      const std::uint64_t v = pad_to_weight(part, missing, r, accept);
      if (v == 0 || std::find(picks.begin(), picks.end(), v) != picks.end()) {
        ok = false;
        break;
      }
      picks.push_back(v);
    }
    if (ok) chosen = picks;
  }
  if (chosen.empty()) {
    throw std::invalid_argument("no " + std::to_string(k) + " admissible columns cover all " + std::to_string(r) +
                                " parity rows");
  }
  std::sort(chosen.begin(), chosen.end());
  std::vector<BitVector> out;
  for (auto v : chosen) out.push_back(msb_first(r, v));
  return out;
}

void check_construct_args(std::size_t n, std::size_t k, std::size_t d) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k > n) throw std::invalid_argument("k exceeds n");
  if (n - k + 1 < d) throw std::invalid_argument("redundancy n - k must be at least d - 1");
}

}  // namespace

std::uint64_t max_k(BoundQuery q) {
  check_query(q);
  const std::uint64_t r = q.redundancy;
  switch (q.distance) {
    case 2:
      return kUnbounded;
    case 3:
      return (1ULL << r) - r - 1;
    case 4: {
      const std::uint64_t half = 1ULL << (r - 1);
      const std::uint64_t minus = r % 2 == 0 ? r : r + 1;
      return half > minus ? half - minus : 0;
    }
    default: {
      const auto s = d5_sizes(r);
      return s.level1 + 2 * s.level2 + 2 * s.level3;
    }
  }
}

FlatCode construct_d3(std::size_t n, std::size_t k) {
  check_construct_args(n, k, 3);
  const std::size_t r = n - k;
  if (r > 62 || k > max_k({r, 3})) throw std::invalid_argument("k exceeds 2^r - r - 1");
  return systematic_code(ascending_columns(r, k, d3_weight), 3, DecoderClass::BP);
}

FlatCode construct_d4(std::size_t n, std::size_t k) {
  check_construct_args(n, k, 4);
  const std::size_t r = n - k;
  if (r > 62 || k > max_k({r, 4})) {
    throw std::invalid_argument("k exceeds the bound for distance 4 with r = " + std::to_string(r));
  }
  return systematic_code(ascending_columns(r, k, d4_weight), 4,
                         DecoderClass::Gauss);
}

std::vector<BitVector> d5_subset_family(std::size_t r) {
  if (r < 4) return {};
  const auto s = d5_sizes(r);
  std::vector<BitVector> sets;
  // Elements are a_1..a_r; a_x is bit x-1.
  auto add = [&](std::initializer_list<std::size_t> elems) {
    BitVector v(r);
    for (std::size_t a : elems) v.set(a - 1);
    sets.push_back(std::move(v));
  };
  for (std::size_t i = 1; i <= s.level1; ++i) add({1, 2, 2 * i + 1, 2 * i + 2});
  for (std::size_t i = 1; i <= s.level2; ++i) add({1, 3, 4 * i + 1, 4 * i + 3});
  for (std::size_t i = 1; i <= s.level2; ++i) add({2, 4, 4 * i + 2, 4 * i + 3});
  for (std::size_t i = 1; i <= s.level3; ++i) add({1, 5, 8 * i + 1, 8 * i + 5});
  for (std::size_t i = 1; i <= s.level3; ++i) add({4, 8, 4 * i + 2, 8 * i + 5});
  return sets;
}

FlatCode construct_d5(std::size_t n, std::size_t k) {
  check_construct_args(n, k, 5);
  const std::size_t r = n - k;
  auto sets = d5_subset_family(r);
  if (k > sets.size()) {
    throw std::invalid_argument("subset families for r = " + std::to_string(r) + " yield only " +
                                std::to_string(sets.size()) + " columns, k = " + std::to_string(k) +
                                " requested");
  }
  sets.resize(k);
  // Rows no chosen subset touches would leave all-zero generator columns.
  // Fill them with ones: extra coordinates never lower the distance.
  for (std::size_t row = 0; row < r; ++row) {
    if (std::none_of(sets.begin(), sets.end(), [&](const BitVector& v) { return v.test(row); })) {
      for (auto& v : sets) v.set(row);
    }
  }
  auto code = systematic_code(sets, 5, DecoderClass::Gauss);
  if (verify_distance(code) < 5) {
    throw Error("distance-5 construction failed verification for n=" + std::to_string(n) +
                ", k=" + std::to_string(k));
  }
  return code;
}

std::size_t verify_distance(const FlatCode& code, const DistanceOptions& options) {
  const std::size_t k = code.k();
  if (k > options.max_k) {
    throw GuardExceeded("distance enumeration needs 2^" + std::to_string(k) + " codewords; guard is k <= " +
                        std::to_string(options.max_k));
  }
  if (k > 62) throw GuardExceeded("distance enumeration beyond k = 62 is not supported");
  const auto& rows = code.generator.row_vectors();
  const std::size_t words = rows.front().words().size();
  std::vector<std::uint64_t> word(words, 0);
  std::size_t best = code.n() + 1;
  // Gray-code walk: message g(i) differs from g(i-1) in bit ctz(i).
  for (std::uint64_t i = 1; i < (1ULL << k); ++i) {
    const auto& row = rows[static_cast<std::size_t>(std::countr_zero(i))].words();
    std::size_t weight = 0;
    for (std::size_t w = 0; w < words; ++w) {
      word[w] ^= row[w];
      weight += static_cast<std::size_t>(std::popcount(word[w]));
    }
    best = std::min(best, weight);
  }
  return best;
}

std::optional<std::vector<std::size_t>> verify_bp(const FlatCode& code, std::size_t t,
                                                  const EnumerationOptions& options) {
  return verify_erasures(code, t, DecoderClass::BP, options);
}

std::optional<std::vector<std::size_t>> verify_gauss(const FlatCode& code, std::size_t t,
                                                     const EnumerationOptions& options) {
  return verify_erasures(code, t, DecoderClass::Gauss, options);
}

SearchOutcome exhaustive_search(std::size_t n, std::size_t k, std::size_t t, DecoderClass decoder,
                                const EnumerationOptions& options) {
  if (k < 1 || n < k) throw std::invalid_argument("exhaustive search needs 1 <= k <= n");
  if (t > n) throw std::invalid_argument("erasure count exceeds code length");
  if (k > 20) throw GuardExceeded("exhaustive search alphabet 2^k - 1 is too large");
  const std::size_t alphabet = (std::size_t{1} << k) - 1;
  // Sorted multisets of size n over {1..alphabet} correspond to n-subsets of
  // {0..alphabet+n-2} via value_i = x_i - i + 1, preserving lexicographic order.
  const std::size_t universe = alphabet + n - 1;
  const std::uint64_t candidates = binomial(universe, n);
  if (candidates > options.limit_or(kDefaultSearchGuard)) {
    throw GuardExceeded(std::to_string(candidates) + " candidate column multisets exceeds the guard");
  }

  auto hit = find_first_combination(universe, n, options.jobs, [&](std::uint64_t, std::span<const std::size_t> x) {
    std::vector<std::uint64_t> columns(n);
    std::uint64_t coverage = 0;
    for (std::size_t i = 0; i < n; ++i) {
      columns[i] = x[i] - i + 1;
      coverage |= columns[i];
    }
    if (coverage != alphabet) return false;  // some fragment is never stored
    std::vector<std::size_t> erased(t);
    for (std::size_t i = 0; i < t; ++i) erased[i] = i;
    std::vector<std::uint64_t> survivors;
    do {
      collect_survivors<std::uint64_t>(columns, erased, survivors);
      if (!survivors_decode(survivors, k, decoder)) return false;
    } while (next_combination(erased, n));
    return true;
  });

  if (!hit) return SearchOutcome{std::nullopt, candidates};
  BitMatrix g(k, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::uint64_t column = hit->items[j] - j + 1;
    for (std::size_t i = 0; i < k; ++i) {
      if ((column >> i) & 1U) g.set(i, j);
    }
  }
  const std::size_t claimed = std::min(t + 1, n - k + 1);
  return SearchOutcome{make_flat_code(std::move(g), claimed, decoder), hit->rank + 1};
}

}  // namespace bpxor::flat
