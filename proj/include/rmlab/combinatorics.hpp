#pragma once

// Pair partitions of {1..2p}, matched-vector predicates, and the counts of
// offset vectors d in {-m..m}^{2p} with vanishing plain or alternating sum.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rmlab {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

/// A pairing of {1..2p}, stored canonically: r_t < s_t, blocks sorted by r_t.
class PairPartition {
 public:
  /// Normalizes orientation and block order; throws InvalidArgumentError
  /// unless the blocks partition {1..2p}.
  explicit PairPartition(std::vector<std::pair<int, int>> blocks);

  int half_size() const noexcept { return static_cast<int>(blocks_.size()); }
  int size() const noexcept { return 2 * half_size(); }
  std::span<const std::pair<int, int>> blocks() const noexcept { return blocks_; }

  /// +1 if ell leads its block, -1 otherwise (1-based ell).
  int epsilon(int ell) const;
  /// Leader (smaller element) of ell's block.
  int project(int ell) const;
  /// 0-based index of ell's block in canonical order.
  int block_of(int ell) const;
  /// Every block joins one odd and one even position.
  bool is_odd_even() const noexcept;

  friend bool operator==(const PairPartition& a, const PairPartition& b) { return a.blocks_ == b.blocks_; }

 private:
  void check_position(int ell) const;

  std::vector<std::pair<int, int>> blocks_;
  std::vector<int> block_index_;  // position (0-based) -> block
};

/// All of P_2(2p) in canonical lexicographic order; (2p-1)!! of them.
std::vector<PairPartition> enumerate_pair_partitions(int p);

/// P_2^{oe}(2p): every block has one odd and one even element; p! of them.
std::vector<PairPartition> enumerate_oe_pair_partitions(int p);

/// Every entry is matched with an entry of opposite sign whose absolute value
/// occurs exactly twice. Zero has no sign and never matches. Odd length is never matched.
bool is_pm_pair_matched(std::span<const long> v);

/// Every value (sign included) occurs exactly twice, once at an odd and once
/// at an even 1-based position.
bool is_oe_pair_matched(std::span<const long> v);

/// Offset vector d in {-m..m}^h.
class OffsetVector {
 public:
  OffsetVector(int m, std::vector<int> d);

  int m() const noexcept { return m_; }
  int length() const noexcept { return static_cast<int>(d_.size()); }
  std::span<const int> values() const noexcept { return d_; }
  long sum() const noexcept;
  /// sum_{r=1}^{h} (-1)^r d_r
  long alternating_sum() const noexcept;

  friend bool operator==(const OffsetVector&, const OffsetVector&) = default;

 private:
  int m_;
  std::vector<int> d_;
};

/// (d_1, d_2, d_3, ...) -> (-d_1, d_2, -d_3, ...); maps plain-sum-zero vectors
/// onto alternating-sum-zero vectors.
OffsetVector negate_odd_positions(const OffsetVector& d);

/// C(a, b), zero when b < 0, a < 0 or a < b.
BigInt binomial(long a, long b);

/// #{d in {-m..m}^{2p} : sum d = 0}, via the coefficient extraction
///   sum_{l=0}^{floor(2mp/(2m+1))} (-1)^l C(2p, l) C(2p + 2pm - (2m+1) l - 1, 2p - 1).
BigInt card_G_T(int p, int m);

/// #{d : sum (-1)^r d_r = 0}; equal to card_G_T through negate_odd_positions.
BigInt card_G_H(int p, int m);

/// Exhaustive count over {-m..m}^{2p}. Throws ResourceLimitError when
/// (2m+1)^{2p} exceeds budget.
BigInt card_G_bruteforce(int p, int m, bool alternating, std::uint64_t budget = kDefaultEnumerationBudget);

/// (2p-1)!!
BigInt double_factorial_odd(int p);
BigInt factorial(int p);

}  // namespace rmlab
