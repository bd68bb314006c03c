#include "bpxor/gf2.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <queue>
#include <stdexcept>

namespace bpxor {

namespace {

constexpr std::size_t kWordBits = 64;

std::size_t word_count(std::size_t width) { return (width + kWordBits - 1) / kWordBits; }

void check_width(const BitVector& v, std::size_t k) {
  if (v.width() != k) {
    throw std::invalid_argument("composition width " + std::to_string(v.width()) +
                                " does not match k=" + std::to_string(k));
  }
}

}  // namespace

BitVector::BitVector(std::size_t width) : width_(width), words_(word_count(width), 0) {}

BitVector BitVector::from_indices(std::size_t width, std::span<const std::size_t> indices) {
  BitVector v(width);
  for (std::size_t i : indices) v.set(i);
  return v;
}

BitVector BitVector::from_indices(std::size_t width, std::initializer_list<std::size_t> indices) {
  return from_indices(width, std::span<const std::size_t>(indices.begin(), indices.size()));
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i);
    } else if (bits[i] != '0') {
      throw std::invalid_argument("bit string may only contain '0' and '1'");
    }
  }
  return v;
}

BitVector BitVector::from_u64(std::size_t width, std::uint64_t value) {
  if (width > kWordBits) throw std::invalid_argument("from_u64 width exceeds 64");
  BitVector v(width);
  if (width == 0) return v;
  const std::uint64_t mask = width == kWordBits ? ~0ULL : ((1ULL << width) - 1);
  v.words_[0] = value & mask;
  return v;
}

bool BitVector::test(std::size_t i) const {
  if (i >= width_) throw std::out_of_range("bit index out of range");
  return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
}

void BitVector::set(std::size_t i, bool value) {
  if (i >= width_) throw std::out_of_range("bit index out of range");
  const std::uint64_t bit = 1ULL << (i % kWordBits);
  if (value) {
    words_[i / kWordBits] |= bit;
  } else {
    words_[i / kWordBits] &= ~bit;
  }
}

void BitVector::flip(std::size_t i) {
  if (i >= width_) throw std::out_of_range("bit index out of range");
  words_[i / kWordBits] ^= 1ULL << (i % kWordBits);
}

std::size_t BitVector::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool BitVector::none() const noexcept {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::vector<std::size_t> BitVector::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      out.push_back(w * kWordBits + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
  return out;
}

std::optional<std::size_t> BitVector::lowest() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return std::nullopt;
}

std::uint64_t BitVector::to_u64() const {
  if (width_ > kWordBits) throw std::invalid_argument("to_u64 requires width <= 64");
  return words_.empty() ? 0 : words_[0];
}

std::string BitVector::to_string() const {
  std::string s(width_, '0');
  for (std::size_t i : indices()) s[i] = '1';
  return s;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.width_ != width_) throw std::invalid_argument("bit vector width mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
  if (auto c = a.width_ <=> b.width_; c != 0) return c;
  // Compare from the highest word down so that 64-bit-or-less vectors order
  // the same way as their integer values.
  for (std::size_t w = a.words_.size(); w-- > 0;) {
    if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

BitMatrix::BitMatrix(std::vector<BitVector> rows) : rows_(std::move(rows)) {
  cols_ = rows_.empty() ? 0 : rows_.front().width();
  for (const auto& r : rows_) {
    if (r.width() != cols_) throw std::invalid_argument("BitMatrix rows must share one width");
  }
}

BitMatrix BitMatrix::identity(std::size_t n) {
  BitMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

BitMatrix BitMatrix::from_strings(std::initializer_list<std::string_view> rows) {
  std::vector<BitVector> v;
  for (auto r : rows) v.push_back(BitVector::from_string(r));
  return BitMatrix(std::move(v));
}

BitVector BitMatrix::column(std::size_t c) const {
  if (c >= cols_) throw std::out_of_range("column index out of range");
  BitVector out(rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].test(c)) out.set(r);
  }
  return out;
}

BitMatrix BitMatrix::transpose() const {
  BitMatrix t(cols_, rows_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (std::size_t c : rows_[r].indices()) t.set(c, r);
  }
  return t;
}

BitMatrix BitMatrix::concat(const BitMatrix& other) const {
  if (other.rows() != rows()) throw std::invalid_argument("concat requires equal row counts");
  BitMatrix out(rows(), cols_ + other.cols_);
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c : rows_[r].indices()) out.set(r, c);
    for (std::size_t c : other.rows_[r].indices()) out.set(r, cols_ + c);
  }
  return out;
}

BitMatrix BitMatrix::select_columns(std::span<const std::size_t> columns) const {
  BitMatrix out(rows(), columns.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (rows_[r].test(columns[j])) out.set(r, j);
    }
  }
  return out;
}

std::size_t rank_gf2(std::span<const BitVector> vectors) {
  std::vector<BitVector> work(vectors.begin(), vectors.end());
  if (work.empty()) return 0;
  const std::size_t width = work.front().width();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < work.size(); ++col) {
    auto pivot = std::find_if(work.begin() + static_cast<std::ptrdiff_t>(rank), work.end(),
                              [col](const BitVector& v) { return v.test(col); });
    if (pivot == work.end()) continue;
    std::iter_swap(work.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
    for (std::size_t r = rank + 1; r < work.size(); ++r) {
      if (work[r].test(col)) work[r] ^= work[rank];
    }
    ++rank;
  }
  return rank;
}

std::size_t rank_gf2(const BitMatrix& m) { return rank_gf2(m.row_vectors()); }

Bytes xor_bytes(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("unequal payload lengths");
  Bytes out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= b[i];
  return out;
}

void xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src) {
  if (dst.size() != src.size()) throw std::invalid_argument("unequal payload lengths");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

std::vector<std::size_t> DecodeSchedule::resolved() const {
  std::vector<std::size_t> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.fragment);
  std::sort(out.begin(), out.end());
  return out;
}

DecodeSchedule bp_schedule(std::span<const SymbolComposition> symbols, std::size_t k) {
  DecodeSchedule schedule{k, {}};
  if (k == 0) return schedule;

  std::vector<std::vector<std::size_t>> members(symbols.size());
  std::vector<std::vector<std::size_t>> containing(k);
  std::vector<std::size_t> unresolved(symbols.size());
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;

  for (std::size_t s = 0; s < symbols.size(); ++s) {
    check_width(symbols[s], k);
    members[s] = symbols[s].indices();
    unresolved[s] = members[s].size();
    for (std::size_t f : members[s]) containing[f].push_back(s);
    if (unresolved[s] == 1) ready.push(s);
  }

  std::vector<bool> known(k, false);
  while (!ready.empty() && schedule.steps.size() < k) {
    const std::size_t s = ready.top();
    ready.pop();
    if (unresolved[s] != 1) continue;  // its last member was resolved elsewhere

    DecodeStep step;
    step.symbol = s;
    for (std::size_t f : members[s]) {
      if (known[f]) {
        step.uses.push_back(f);
      } else {
        step.fragment = f;
      }
    }
    known[step.fragment] = true;
    for (std::size_t other : containing[step.fragment]) {
      if (--unresolved[other] == 1) ready.push(other);
    }
    schedule.steps.push_back(std::move(step));
  }
  return schedule;
}

bool bp_peels(std::span<const std::uint64_t> masks, std::size_t k) {
  if (k > 64) throw std::invalid_argument("bp_peels requires k <= 64");
  const std::uint64_t full = k == 64 ? ~0ULL : ((1ULL << k) - 1);
  std::uint64_t known = 0;
  bool progress = true;
  while (known != full && progress) {
    progress = false;
    for (std::uint64_t m : masks) {
      const std::uint64_t rest = m & ~known;
      if (rest != 0 && (rest & (rest - 1)) == 0) {
        known |= rest;
        progress = true;
      }
    }
  }
  return known == full;
}

std::uint64_t schedule_digest(const DecodeSchedule& schedule) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFFU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(schedule.k);
  for (const auto& s : schedule.steps) {
    mix(s.fragment);
    mix(s.symbol);
    mix(s.uses.size());
    for (auto u : s.uses) mix(u);
  }
  return h;
}

namespace {

std::size_t common_payload_length(std::span<const EncodingSymbol> symbols) {
  if (symbols.empty()) return 0;
  const std::size_t l = symbols.front().payload.size();
  for (const auto& s : symbols) {
    if (s.payload.size() != l) throw std::invalid_argument("unequal payload lengths");
  }
  return l;
}

}  // namespace

BpDecodeResult bp_decode(std::span<const EncodingSymbol> symbols, std::size_t k) {
  common_payload_length(symbols);
  std::vector<SymbolComposition> compositions;
  compositions.reserve(symbols.size());
  for (const auto& s : symbols) compositions.push_back(s.composition);

  BpDecodeResult result{bp_schedule(compositions, k), std::vector<std::optional<Bytes>>(k)};
  for (const auto& step : result.schedule.steps) {
    Bytes value = symbols[step.symbol].payload;
    for (std::size_t u : step.uses) xor_into(value, *result.fragments[u]);
    result.fragments[step.fragment] = std::move(value);
  }
  return result;
}

std::vector<Bytes> gauss_decode(std::span<const EncodingSymbol> symbols, std::size_t k) {
  const std::size_t l = common_payload_length(symbols);
  std::vector<BitVector> rows;
  std::vector<Bytes> rhs;
  rows.reserve(symbols.size());
  rhs.reserve(symbols.size());
  for (const auto& s : symbols) {
    check_width(s.composition, k);
    rows.push_back(s.composition);
    rhs.push_back(s.payload);
  }

  std::vector<std::size_t> pivot_row(k);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t p = rank;
    while (p < rows.size() && !rows[p].test(col)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[rank], rows[p]);
    std::swap(rhs[rank], rhs[p]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r != rank && rows[r].test(col)) {
        rows[r] ^= rows[rank];
        xor_into(rhs[r], rhs[rank]);
      }
    }
    pivot_row[col] = rank++;
  }
  if (rank < k) throw UnderdeterminedError(rank);

  std::vector<Bytes> out(k, Bytes(l));
  for (std::size_t f = 0; f < k; ++f) out[f] = rhs[pivot_row[f]];
  return out;
}

}  // namespace bpxor
