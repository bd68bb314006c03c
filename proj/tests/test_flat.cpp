#include <doctest.h>

#include <random>
#include <set>

#include "bpxor/flat.hpp"
#include "oracles.hpp"

using namespace bpxor;
using namespace bpxor::flat;

namespace {

std::vector<std::string> parity_rows(const FlatCode& c) {
  std::vector<std::string> out;
  for (const auto& r : c.generator.row_vectors()) out.push_back(r.to_string().substr(c.k()));
  return out;
}

std::multiset<std::string> parity_columns(const FlatCode& c) {
  std::multiset<std::string> out;
  for (std::size_t j = c.k(); j < c.n(); ++j) out.insert(c.generator.column(j).to_string());
  return out;
}

}  // namespace

TEST_CASE("parity code") {
  const auto c = construct_parity(3);
  CHECK(c.n() == 4);
  CHECK(c.generator == BitMatrix::from_strings({"1001", "0101", "0011"}));
  CHECK(verify_distance(c) == 2);
  CHECK(c.decoder == DecoderClass::BP);
  CHECK(verify_distance(construct_parity(1)) == 2);
  CHECK_FALSE(verify_bp(construct_parity(5), 1).has_value());
  CHECK(verify_bp(construct_parity(5), 2).has_value());
}

TEST_CASE("canonical three-redundancy codes") {
  const auto codes = canonical_d3_small();
  REQUIRE(codes.size() == 3);
  CHECK(parity_rows(codes[0]) == std::vector<std::string>{"101", "011"});
  CHECK(parity_rows(codes[1]) == std::vector<std::string>{"011", "101", "111"});
  CHECK(parity_rows(codes[2]) == std::vector<std::string>{"011", "101", "110", "111"});
  for (const auto& c : codes) {
    CHECK(c.n() == c.k() + 3);
    CHECK_FALSE(verify_bp(c, 2).has_value());
    CHECK(oracle::flat_tolerates(c, 2));
    CHECK(verify_distance(c) == 3);
    CHECK(oracle::min_distance(c) == 3);
  }
}

TEST_CASE("max_k examples and table boundaries") {
  CHECK(max_k({4, 3}) == 11);
  CHECK(max_k({3, 3}) == 4);
  CHECK(max_k({5, 4}) == 10);
  CHECK(max_k({5, 2}) == kUnbounded);
  CHECK_THROWS(max_k({5, 6}));
  CHECK_THROWS(max_k({1, 3}));

  // d = 3: k ranges [2,4], [5,11], [12,26], [27,57] for r = 3..6.
  const std::pair<std::uint64_t, std::uint64_t> d3[] = {{2, 4}, {5, 11}, {12, 26}, {27, 57}};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t r = 3 + i;
    CHECK(max_k({r, 3}) == d3[i].second);
    if (i > 0) CHECK(max_k({r - 1, 3}) + 1 == d3[i].first);
  }
  // d = 4: [2,4], [5,10], [11,26], [27,56] for r = 4..7.
  const std::pair<std::uint64_t, std::uint64_t> d4[] = {{2, 4}, {5, 10}, {11, 26}, {27, 56}};
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t r = 4 + i;
    CHECK(max_k({r, 4}) == d4[i].second);
    if (i > 0) CHECK(max_k({r - 1, 4}) + 1 == d4[i].first);
  }
}

TEST_CASE("max_k for distance 3 counts weight >= 2 vectors") {
  for (std::size_t r = 2; r <= 16; ++r) CHECK(max_k({r, 3}) == oracle::count_weight_at_least(r, 2));
}

TEST_CASE("max_k for distance 4 against the odd-weight set") {
  // The odd-weight-at-least-3 set has 2^(r-1) - r members. For odd r the
  // bound is one smaller than that set.
  for (std::size_t r = 3; r <= 16; ++r) {
    const auto x = oracle::count_odd_weight_at_least_3(r);
    if (r % 2 == 0) {
      CHECK(max_k({r, 4}) == x);
    } else {
      CHECK(max_k({r, 4}) + 1 == x);
    }
  }
}

TEST_CASE("max_k for distance 5 counts the subset families") {
  CHECK(max_k({6, 5}) == 2);
  CHECK(max_k({8, 5}) == d5_subset_family(8).size());
  for (std::size_t r = 4; r <= 14; ++r) CHECK(max_k({r, 5}) == d5_subset_family(r).size());
}

TEST_CASE("construct_d3") {
  const auto hamming = construct_d3(7, 4);
  CHECK(hamming.generator == canonical_d3_small()[2].generator);
  CHECK(hamming.claimed_distance == 3);
  CHECK_FALSE(verify_bp(construct_d3(8, 4), 2).has_value());
  CHECK_THROWS_WITH(construct_d3(8, 5), "k exceeds 2^r - r - 1");
  // Parity columns are distinct weight >= 2 vectors in ascending order.
  const auto c = construct_d3(9, 5);
  std::uint64_t prev = 0;
  for (const auto& row : c.generator.row_vectors()) {
    std::uint64_t v = 0;
    for (std::size_t j = 5; j < 9; ++j) v = v << 1 | (row.test(j) ? 1 : 0);
    CHECK(std::popcount(v) >= 2);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("construct_d3 is peelable and has distance 3 through r = 5") {
  for (std::size_t r = 3; r <= 5; ++r) {
    for (std::size_t k = 2; k <= max_k({r, 3}); k += (r == 5 ? 6 : 1)) {
      const auto c = construct_d3(k + r, k);
      CHECK(verify_distance(c, DistanceOptions{k}) >= 3);
      if (k <= 14) CHECK(oracle::min_distance(c) == verify_distance(c));
      CHECK_FALSE(verify_bp(c, 2).has_value());
    }
  }
}

TEST_CASE("construct_d4 on seven columns is not peelable at three erasures") {
  const auto c = construct_d4(7, 3);
  CHECK(c.decoder == DecoderClass::Gauss);
  CHECK(verify_distance(c) == 4);
  CHECK(oracle::min_distance(c) == 4);
  const auto fail = verify_bp(c, 3);
  REQUIRE(fail.has_value());
  CHECK(*fail == std::vector<std::size_t>{0, 1, 2});
  CHECK_FALSE(verify_gauss(c, 3).has_value());

  // Same parity columns as the code with beta = 1110, 0111, 1011.
  const auto shown = systematic_code({BitVector::from_string("1110"), BitVector::from_string("0111"),
                                      BitVector::from_string("1011")},
                                     4, DecoderClass::Gauss);
  CHECK(parity_columns(shown) == parity_columns(c));
  CHECK(verify_distance(shown) == 4);
  CHECK(*verify_bp(shown, 3) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("construct_d4 distance and errors") {
  CHECK(verify_distance(construct_d4(9, 4)) >= 4);
  CHECK_THROWS(construct_d4(10, 11));
  CHECK_THROWS(construct_d4(9, 5));
  for (std::size_t r = 4; r <= 6; ++r) {
    const auto k = static_cast<std::size_t>(max_k({r, 4}));
    const auto c = construct_d4(k + r, k);
    CHECK(verify_distance(c, DistanceOptions{k}) >= 4);
    CHECK_FALSE(verify_gauss(c, 3).has_value());
    CHECK(oracle::flat_gauss_tolerates(c, 3) == !verify_gauss(c, 3).has_value());
  }
}

TEST_CASE("distance-5 subset families and construction") {
  const auto fam = d5_subset_family(6);
  REQUIRE_FALSE(fam.empty());
  CHECK(fam.front().to_string() == "111100");
  for (const auto& v : d5_subset_family(10)) CHECK(v.count() == 4);
  const auto c = construct_d5(8, 2);
  CHECK(verify_distance(c) == 5);
  CHECK(oracle::min_distance(c) == 5);
  CHECK_THROWS(construct_d5(58, 50));
  const auto k8 = static_cast<std::size_t>(max_k({8, 5}));
  CHECK(verify_distance(construct_d5(8 + k8, k8)) >= 5);
  CHECK_THROWS(construct_d5(9 + k8, k8 + 1));
}

TEST_CASE("every constructor honours its claimed distance and decoder class") {
  std::vector<FlatCode> all;
  for (std::size_t k = 1; k <= 6; ++k) all.push_back(construct_parity(k));
  for (std::size_t k = 2; k <= 11; ++k) all.push_back(construct_d3(k + (k <= 4 ? 3 : 4), k));
  for (std::size_t k = 2; k <= 10; ++k) all.push_back(construct_d4(k + (k <= 4 ? 4 : 5), k));
  for (std::size_t r = 6; r <= 9; ++r) {
    for (std::size_t k = 1; k <= max_k({r, 5}); ++k) all.push_back(construct_d5(k + r, k));
  }
  for (const auto& c : all) {
    CHECK(verify_distance(c) >= c.claimed_distance);
    const std::size_t t = c.claimed_distance - 1;
    if (c.decoder == DecoderClass::BP) {
      CHECK_FALSE(verify_bp(c, t).has_value());
    } else {
      CHECK_FALSE(verify_gauss(c, t).has_value());
    }
  }
}

TEST_CASE("verify_bp agrees with the brute-force oracle on random generators") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t k = 2 + rng() % 4;
    const std::size_t n = k + 1 + rng() % 4;
    std::vector<BitVector> rows(k, BitVector(n));
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t col = 0;
      while (col == 0) col = rng() & ((1ULL << k) - 1);
      for (std::size_t i = 0; i < k; ++i) {
        if (col >> i & 1) rows[i].set(j);
      }
    }
    const auto c = make_flat_code(BitMatrix(rows), 1, DecoderClass::BP);
    for (std::size_t t = 0; t <= n - k; ++t) {
      CHECK(verify_bp(c, t).has_value() == !oracle::flat_tolerates(c, t));
      CHECK(verify_gauss(c, t).has_value() == !oracle::flat_gauss_tolerates(c, t));
    }
    CHECK(verify_distance(c) == oracle::min_distance(c));
  }
}

TEST_CASE("verify_bp reports the same counterexample for any worker count") {
  const auto c = construct_d4(8, 4);
  const auto one = verify_bp(c, 3, {1, 0});
  const auto four = verify_bp(c, 3, {4, 0});
  CHECK(one == four);
  CHECK(verify_bp(c, 3, {3, 0}) == one);
}

TEST_CASE("flat code validation") {
  CHECK_THROWS(make_flat_code(BitMatrix::from_strings({"100", "010"}), 2, DecoderClass::BP));  // zero column
  CHECK_THROWS(make_flat_code(BitMatrix::from_strings({"10", "01", "11"}), 1, DecoderClass::BP));  // n < k
  CHECK_THROWS(make_flat_code(BitMatrix::from_strings({"101", "011"}), 3, DecoderClass::BP));  // Singleton
  CHECK(decoder_class_from_string("gauss") == DecoderClass::Gauss);
  CHECK_THROWS(decoder_class_from_string("ldpc"));
}

TEST_CASE("guards are explicit") {
  CHECK_THROWS_AS(verify_distance(construct_d3(31, 26)), GuardExceeded);
  CHECK(verify_distance(construct_d3(31, 26), {26}) == 3);
  CHECK_THROWS_AS(verify_bp(construct_parity(40), 10, {1, 1000}), GuardExceeded);
}

TEST_CASE("exhaustive search") {
  const auto none = exhaustive_search(5, 3, 2, DecoderClass::BP);
  CHECK(none.exhausted());
  CHECK(none.candidates_examined == 462);
  CHECK(oracle::multisets(7, 5) == 462);
  CHECK(exhaustive_search(7, 3, 3, DecoderClass::BP).exhausted());

  const auto found = exhaustive_search(5, 2, 2, DecoderClass::BP);
  REQUIRE_FALSE(found.exhausted());
  CHECK(found.code->n() == 5);
  CHECK(oracle::flat_tolerates(*found.code, 2));
  CHECK(oracle::min_distance(*found.code) == 3);
}

TEST_CASE("exhaustive search finds no MDS code beyond one redundancy column") {
  for (std::size_t k = 2; k <= 4; ++k) {
    for (std::size_t n = k + 2; n <= 8; ++n) {
      CHECK(exhaustive_search(n, k, n - k, DecoderClass::BP).exhausted());
      CHECK(exhaustive_search(n, k, n - k, DecoderClass::Gauss).exhausted());
    }
  }
}

TEST_CASE("distance-3 existence matches across search, bound and construction") {
  for (std::size_t k = 3; k <= 4; ++k) {
    for (std::size_t n = k + 2; n <= 8; ++n) {
      const bool bound = k <= max_k({n - k, 3});
      const bool gauss = !exhaustive_search(n, k, 2, DecoderClass::Gauss).exhausted();
      const bool bp = !exhaustive_search(n, k, 2, DecoderClass::BP).exhausted();
      CHECK(gauss == bound);
      CHECK(bp == bound);
      if (bound) CHECK_FALSE(verify_bp(construct_d3(n, k), 2).has_value());
    }
  }
}

TEST_CASE("exhaustive search does not depend on worker count") {
  const auto a = exhaustive_search(6, 3, 2, DecoderClass::BP, {1, 0});
  const auto b = exhaustive_search(6, 3, 2, DecoderClass::BP, {3, 0});
  REQUIRE(a.code.has_value());
  REQUIRE(b.code.has_value());
  CHECK(a.code->generator == b.code->generator);
  CHECK(a.candidates_examined == b.candidates_examined);
  CHECK_THROWS_AS(exhaustive_search(8, 4, 4, DecoderClass::BP, {1, 1000}), GuardExceeded);
}

TEST_CASE("constructed codes touch every parity row") {
  auto rows_touched = [](const FlatCode& c) {
    const auto cols = oracle::flat_columns(c);
    return std::none_of(cols.begin(), cols.end(), [](oracle::Mask m) { return m == 0; });
  };
  for (std::size_t r = 3; r <= 9; ++r) {
    for (std::size_t k = 1; k <= 8 && k <= max_k({r, 3}); ++k) {
      const auto c = construct_d3(k + r, k);
      CHECK(rows_touched(c));
      CHECK(oracle::min_distance(c) >= 3);
      CHECK(oracle::flat_tolerates(c, 2));
    }
    for (std::size_t k = 2; k <= 8 && k <= max_k({r, 4}); ++k) {
      const auto c = construct_d4(k + r, k);
      CHECK(rows_touched(c));
      CHECK(oracle::min_distance(c) >= 4);
    }
  }
  // Four weight-2 columns cannot come from {3, 5, 6, 7} alone with r = 4.
  const auto c = construct_d3(8, 4);
  CHECK(c.generator.row_vectors()[3].to_string() == "00011001");
}
