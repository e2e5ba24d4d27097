#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rmlab/combinatorics.hpp"
#include "rmlab/error.hpp"

using namespace rmlab;
using Blocks = std::vector<std::pair<int, int>>;

namespace {

// Visit every vector of {-m..m}^len.
template <class F>
void for_each_box_vector(int m, int len, F&& f) {
  std::vector<int> d(static_cast<std::size_t>(len), -m);
  while (true) {
    f(d);
    int k = len - 1;
    while (k >= 0 && d[static_cast<std::size_t>(k)] == m) d[static_cast<std::size_t>(k--)] = -m;
    if (k < 0) return;
    ++d[static_cast<std::size_t>(k)];
  }
}

BigInt power(long base, int e) {
  BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

TEST_CASE("pair partitions for p = 1 and 2", "[combinatorics]") {
  const auto one = enumerate_pair_partitions(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == PairPartition(Blocks{{1, 2}}));

  const auto two = enumerate_pair_partitions(2);
  REQUIRE(two.size() == 3);
  CHECK(two[0] == PairPartition(Blocks{{1, 2}, {3, 4}}));
  CHECK(two[1] == PairPartition(Blocks{{1, 3}, {2, 4}}));
  CHECK(two[2] == PairPartition(Blocks{{1, 4}, {2, 3}}));
}

TEST_CASE("pair partition counts are (2p-1)!!", "[combinatorics]") {
  for (int p = 1; p <= 6; ++p) {
    CAPTURE(p);
    const auto all = enumerate_pair_partitions(p);
    CHECK(BigInt(all.size()) == double_factorial_odd(p));
    std::set<std::vector<std::pair<int, int>>> distinct;
    for (const auto& pi : all) {
      CHECK(pi.half_size() == p);
      std::vector<int> seen(static_cast<std::size_t>(2 * p + 1), 0);
      int prev_leader = 0;
      for (const auto& [r, s] : pi.blocks()) {
        CHECK(r < s);
        CHECK(r > prev_leader);
        prev_leader = r;
        ++seen[static_cast<std::size_t>(r)];
        ++seen[static_cast<std::size_t>(s)];
      }
      CHECK(std::count(seen.begin() + 1, seen.end(), 1) == 2 * p);
      distinct.emplace(pi.blocks().begin(), pi.blocks().end());
    }
    CHECK(distinct.size() == all.size());
  }
  CHECK(enumerate_pair_partitions(5).size() == 945);
}

TEST_CASE("odd-even partitions", "[combinatorics]") {
  const auto two = enumerate_oe_pair_partitions(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == PairPartition(Blocks{{1, 2}, {3, 4}}));
  CHECK(two[1] == PairPartition(Blocks{{1, 4}, {2, 3}}));
  CHECK(enumerate_oe_pair_partitions(1).size() == 1);
  CHECK(enumerate_oe_pair_partitions(3).size() == 6);

  for (int p = 1; p <= 6; ++p) {
    CAPTURE(p);
    const auto oe = enumerate_oe_pair_partitions(p);
    CHECK(BigInt(oe.size()) == factorial(p));
    const auto all = enumerate_pair_partitions(p);
    std::size_t filtered = 0;
    for (const auto& pi : all) filtered += pi.is_odd_even() ? 1 : 0;
    CHECK(filtered == oe.size());
    for (const auto& pi : oe) {
      CHECK(pi.is_odd_even());
      CHECK(std::find(all.begin(), all.end(), pi) != all.end());
    }
    if (p >= 2) CHECK(oe.size() < all.size());
  }
}

TEST_CASE("enumeration rejects p < 1", "[combinatorics]") {
  CHECK_THROWS_AS(enumerate_pair_partitions(0), InvalidArgumentError);
  CHECK_THROWS_AS(enumerate_oe_pair_partitions(-1), InvalidArgumentError);
}

TEST_CASE("partition construction normalizes and validates", "[combinatorics]") {
  CHECK(PairPartition(Blocks{{4, 2}, {3, 1}}) == PairPartition(Blocks{{1, 3}, {2, 4}}));
  CHECK_THROWS_AS(PairPartition(Blocks{{1, 2}, {2, 3}}), InvalidArgumentError);
  CHECK_THROWS_AS(PairPartition(Blocks{{1, 3}}), InvalidArgumentError);
  CHECK_THROWS_AS(PairPartition(Blocks{{1, 1}}), InvalidArgumentError);
  CHECK_THROWS_AS(PairPartition(Blocks{}), InvalidArgumentError);
}

TEST_CASE("epsilon and projection", "[combinatorics]") {
  const PairPartition cross(Blocks{{1, 3}, {2, 4}});
  CHECK(cross.epsilon(1) == 1);
  CHECK(cross.epsilon(3) == -1);
  CHECK(cross.epsilon(2) == 1);
  CHECK(cross.epsilon(4) == -1);
  CHECK(cross.project(3) == 1);
  CHECK(cross.project(4) == 2);
  CHECK(cross.block_of(4) == 1);

  const PairPartition single(Blocks{{1, 2}});
  CHECK(single.project(2) == 1);

  for (const auto& pi : enumerate_pair_partitions(4))
    for (const auto& [r, s] : pi.blocks()) {
      CHECK(pi.epsilon(r) == 1);
      CHECK(pi.epsilon(s) == -1);
      CHECK(pi.project(s) == r);
    }

  CHECK_THROWS_AS(cross.epsilon(0), InvalidArgumentError);
  CHECK_THROWS_AS(cross.project(5), InvalidArgumentError);
}

TEST_CASE("plus-minus pair matching", "[combinatorics]") {
  const auto pm = [](std::vector<long> v) { return is_pm_pair_matched(v); };
  CHECK_FALSE(pm({3, 5, 8, -5}));
  CHECK_FALSE(pm({3, 5, 8, 5}));
  CHECK(pm({5, -5, 7, -7}));
  CHECK(pm({-2, 9, 2, -9}));
  CHECK_FALSE(pm({5, -5, 5, -5}));  // |5| four times
  CHECK_FALSE(pm({0, 0}));
  CHECK_FALSE(pm({1, -1, 2}));
  CHECK_FALSE(pm({}));
}

TEST_CASE("odd-even pair matching", "[combinatorics]") {
  const auto oe = [](std::vector<long> v) { return is_oe_pair_matched(v); };
  CHECK(oe({5, -5, 8, 8, -5, 5}));
  CHECK_FALSE(oe({5, -5, 8, 8, 5, -5}));
  CHECK(oe({3, 3, -6, -6}));
  CHECK_FALSE(oe({3, -3}));
  CHECK_FALSE(oe({4, 1, 4, 1}));  // both 4s at odd positions
  CHECK_FALSE(oe({2, 2, 2, 2}));
  CHECK_FALSE(oe({7, 7, 1}));
}

TEST_CASE("matching predicates imply their invariants", "[combinatorics]") {
  for (int len : {2, 4}) {
    for_each_box_vector(2, len, [&](const std::vector<int>& d) {
      std::vector<long> v(d.begin(), d.end());
      if (is_oe_pair_matched(v)) {
        std::map<long, int> count;
        for (long x : v) ++count[x];
        for (const auto& [x, c] : count) CHECK(c % 2 == 0);
      }
      if (is_pm_pair_matched(v)) {
        long sum = 0;
        for (long x : v) sum += x;
        CHECK(sum == 0);
      }
    });
  }
}

TEST_CASE("offset vectors", "[combinatorics]") {
  const OffsetVector d(2, {1, -2, 2, 0});
  CHECK(d.sum() == 1);
  CHECK(d.alternating_sum() == -1 - 2 - 2 + 0);
  CHECK(negate_odd_positions(d) == OffsetVector(2, {-1, -2, -2, 0}));
  CHECK_THROWS_AS(OffsetVector(1, {2}), InvalidArgumentError);
  CHECK_THROWS_AS(OffsetVector(-1, {}), InvalidArgumentError);
}

TEST_CASE("sign flip maps plain-sum zero onto alternating-sum zero", "[combinatorics]") {
  for (int m = 0; m <= 2; ++m)
    for (int len : {2, 4}) {
      std::size_t plain = 0, alternating = 0, agree = 0;
      for_each_box_vector(m, len, [&](const std::vector<int>& v) {
        const OffsetVector d(m, v);
        plain += d.sum() == 0 ? 1 : 0;
        alternating += d.alternating_sum() == 0 ? 1 : 0;
        agree += (d.sum() == 0) == (negate_odd_positions(d).alternating_sum() == 0) ? 1 : 0;
      });
      CHECK(plain == alternating);
      CHECK(agree == static_cast<std::size_t>(std::pow(2 * m + 1, len)));
    }
}

TEST_CASE("binomial convention", "[combinatorics]") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(1, 3) == 0);
  CHECK(binomial(-1, 0) == 0);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(60, 30) == BigInt("118264581564861424"));
}

TEST_CASE("closed-form cardinalities", "[combinatorics]") {
  for (int p = 1; p <= 8; ++p) {
    CHECK(card_G_T(p, 0) == 1);
    CHECK(card_G_H(p, 0) == 1);
  }
  CHECK(card_G_T(1, 1) == 3);
  CHECK(card_G_T(2, 1) == 19);
  CHECK(card_G_H(2, 1) == 19);
  for (int m = 0; m <= 5; ++m) CHECK(card_G_T(1, m) == 2 * m + 1);
  CHECK_THROWS_AS(card_G_T(0, 1), InvalidArgumentError);
  CHECK_THROWS_AS(card_G_T(1, -1), InvalidArgumentError);
  CHECK_THROWS_AS(card_G_H(-2, 0), InvalidArgumentError);
}

TEST_CASE("closed form is bounded by the box size", "[combinatorics]") {
  for (int p = 1; p <= 10; ++p)
    for (int m = 0; m <= 6; ++m) CHECK(card_G_T(p, m) <= power(2 * m + 1, 2 * p));
}

TEST_CASE("large cardinalities exceed 64 bits without overflow", "[combinatorics]") {
  const BigInt big = card_G_T(20, 10);
  CHECK(big > BigInt("18446744073709551616"));
  CHECK(big < power(21, 40));
}

TEST_CASE("brute force by hand", "[combinatorics]") {
  CHECK(card_G_bruteforce(1, 1, false) == 3);
  CHECK(card_G_bruteforce(1, 1, true) == 3);
  CHECK(card_G_bruteforce(2, 2, false) == card_G_bruteforce(2, 2, true));
  CHECK(card_G_H(3, 2) == card_G_bruteforce(3, 2, true));
}

TEST_CASE("closed form matches brute force on the grid", "[combinatorics]") {
  for (int m = 0; m <= 3; ++m)
    for (int p = 1; p <= 4; ++p) {
      CAPTURE(p, m);
      const BigInt plain = card_G_bruteforce(p, m, false);
      const BigInt alternating = card_G_bruteforce(p, m, true);
      CHECK(card_G_T(p, m) == plain);
      CHECK(card_G_H(p, m) == alternating);
      CHECK(plain == alternating);
    }
}

TEST_CASE("brute force agrees with an unpruned count", "[combinatorics]") {
  for (int m = 0; m <= 2; ++m)
    for (int p = 1; p <= 2; ++p) {
      BigInt plain = 0, alternating = 0;
      for_each_box_vector(m, 2 * p, [&](const std::vector<int>& d) {
        long s = 0, a = 0;
        for (std::size_t r = 0; r < d.size(); ++r) {
          s += d[r];
          a += (r % 2 == 1 ? 1 : -1) * d[r];
        }
        plain += s == 0 ? 1 : 0;
        alternating += a == 0 ? 1 : 0;
      });
      CHECK(card_G_bruteforce(p, m, false) == plain);
      CHECK(card_G_bruteforce(p, m, true) == alternating);
    }
}

TEST_CASE("brute force respects its budget", "[combinatorics]") {
  CHECK_THROWS_AS(card_G_bruteforce(4, 3, false, 1000), ResourceLimitError);
  CHECK_THROWS_AS(card_G_bruteforce(10, 5, true), ResourceLimitError);
  CHECK_NOTHROW(card_G_bruteforce(2, 1, false, 81));
  CHECK_THROWS_AS(card_G_bruteforce(0, 1, false), InvalidArgumentError);
}

TEST_CASE("factorials", "[combinatorics]") {
  CHECK(double_factorial_odd(1) == 1);
  CHECK(double_factorial_odd(3) == 15);
  CHECK(double_factorial_odd(6) == 10395);
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
}
