#include "rmlab/combinatorics.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "rmlab/error.hpp"

namespace rmlab {

PairPartition::PairPartition(std::vector<std::pair<int, int>> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw InvalidArgumentError("pair partition needs at least one block");
  for (auto& [r, s] : blocks_) {
    if (r > s) std::swap(r, s);
  }
  std::sort(blocks_.begin(), blocks_.end());
  const int size = 2 * static_cast<int>(blocks_.size());
  block_index_.assign(static_cast<std::size_t>(size), -1);
  for (std::size_t t = 0; t < blocks_.size(); ++t) {
    const auto [r, s] = blocks_[t];
    if (r < 1 || s > size || r == s) throw InvalidArgumentError("pair partition block out of range");
    for (int ell : {r, s}) {
      auto& slot = block_index_[static_cast<std::size_t>(ell - 1)];
      if (slot != -1) throw InvalidArgumentError("pair partition blocks overlap at " + std::to_string(ell));
      slot = static_cast<int>(t);
    }
  }
}

void PairPartition::check_position(int ell) const {
  if (ell < 1 || ell > size()) {
    throw InvalidArgumentError("position " + std::to_string(ell) + " outside [1, " + std::to_string(size()) + "]");
  }
}

int PairPartition::block_of(int ell) const {
  check_position(ell);
  return block_index_[static_cast<std::size_t>(ell - 1)];
}

int PairPartition::epsilon(int ell) const {
  return blocks_[static_cast<std::size_t>(block_of(ell))].first == ell ? 1 : -1;
}

int PairPartition::project(int ell) const { return blocks_[static_cast<std::size_t>(block_of(ell))].first; }

bool PairPartition::is_odd_even() const noexcept {
  return std::all_of(blocks_.begin(), blocks_.end(), [](const auto& b) { return (b.first + b.second) % 2 == 1; });
}

namespace {

// Pairs the smallest free position with each later free position in turn,
// which emits partitions already in canonical order.
void enumerate_pairings(std::vector<bool>& used, std::vector<std::pair<int, int>>& current, bool odd_even_only,
                        std::vector<PairPartition>& out) {
  const int size = static_cast<int>(used.size());
  int first = 0;
  while (first < size && used[static_cast<std::size_t>(first)]) ++first;
  if (first == size) {
    out.emplace_back(current);
    return;
  }
  used[static_cast<std::size_t>(first)] = true;
  for (int second = first + 1; second < size; ++second) {
    if (used[static_cast<std::size_t>(second)]) continue;
    if (odd_even_only && (second - first) % 2 == 0) continue;
    used[static_cast<std::size_t>(second)] = true;
    current.emplace_back(first + 1, second + 1);
    enumerate_pairings(used, current, odd_even_only, out);
    current.pop_back();
    used[static_cast<std::size_t>(second)] = false;
  }
  used[static_cast<std::size_t>(first)] = false;
}

std::vector<PairPartition> enumerate(int p, bool odd_even_only) {
  if (p < 1) throw InvalidArgumentError("pair partitions need p >= 1");
  std::vector<bool> used(static_cast<std::size_t>(2 * p), false);
  std::vector<std::pair<int, int>> current;
  std::vector<PairPartition> out;
  enumerate_pairings(used, current, odd_even_only, out);
  return out;
}

}  // namespace

std::vector<PairPartition> enumerate_pair_partitions(int p) { return enumerate(p, false); }

std::vector<PairPartition> enumerate_oe_pair_partitions(int p) { return enumerate(p, true); }

bool is_pm_pair_matched(std::span<const long> v) {
  if (v.empty() || v.size() % 2 != 0) return false;
  std::map<long, int> positive, negative;
  for (long x : v) {
    if (x == 0) return false;
    ++(x > 0 ? positive[x] : negative[-x]);
  }
  // Each absolute value must occur exactly twice in |v|, once with each sign.
  if (positive.size() != negative.size()) return false;
  for (const auto& [a, count] : positive) {
    auto it = negative.find(a);
    if (count != 1 || it == negative.end() || it->second != 1) return false;
  }
  return true;
}

bool is_oe_pair_matched(std::span<const long> v) {
  if (v.empty() || v.size() % 2 != 0) return false;
  struct Seen {
    int odd = 0;
    int even = 0;
  };
  std::map<long, Seen> seen;
  for (std::size_t k = 0; k < v.size(); ++k) {
    auto& s = seen[v[k]];
    ((k + 1) % 2 == 1 ? s.odd : s.even) += 1;
  }
  return std::all_of(seen.begin(), seen.end(), [](const auto& kv) { return kv.second.odd == 1 && kv.second.even == 1; });
}

OffsetVector::OffsetVector(int m, std::vector<int> d) : m_(m), d_(std::move(d)) {
  if (m_ < 0) throw InvalidArgumentError("offset vector needs m >= 0");
  for (int x : d_) {
    if (x < -m_ || x > m_) throw InvalidArgumentError("offset coordinate outside [-m, m]");
  }
}

long OffsetVector::sum() const noexcept {
  long s = 0;
  for (int x : d_) s += x;
  return s;
}

long OffsetVector::alternating_sum() const noexcept {
  long s = 0;
  for (std::size_t r = 0; r < d_.size(); ++r) s += ((r + 1) % 2 == 0 ? 1 : -1) * d_[r];
  return s;
}

OffsetVector negate_odd_positions(const OffsetVector& d) {
  std::vector<int> out(d.values().begin(), d.values().end());
  for (std::size_t r = 0; r < out.size(); r += 2) out[r] = -out[r];
  return OffsetVector(d.m(), std::move(out));
}

BigInt binomial(long a, long b) {
  if (b < 0 || a < 0 || a < b) return 0;
  b = std::min(b, a - b);
  BigInt result = 1;
  for (long i = 1; i <= b; ++i) {
    result *= a - b + i;
    result /= i;
  }
  return result;
}

BigInt card_G_T(int p, int m) {
  if (p < 1 || m < 0) throw InvalidArgumentError("card_G_T needs p >= 1 and m >= 0");
  const long two_p = 2L * p;
  const long top = (2L * m * p) / (2L * m + 1);
  BigInt total = 0;
  for (long ell = 0; ell <= top; ++ell) {
    BigInt term = binomial(two_p, ell) * binomial(two_p + two_p * m - (2L * m + 1) * ell - 1, two_p - 1);
    if (ell % 2 == 0) {
      total += term;
    } else {
      total -= term;
    }
  }
  return total;
}

BigInt card_G_H(int p, int m) { return card_G_T(p, m); }

namespace {

std::uint64_t count_zero_sums(int position, int length, int m, long partial, bool alternating) {
  const long remaining = length - position;
  if (partial > remaining * m || partial < -remaining * m) return 0;
  if (remaining == 0) return partial == 0 ? 1 : 0;
  // 1-based position r = position + 1 carries sign (-1)^r in the alternating case.
  const int sign = alternating && (position + 1) % 2 == 1 ? -1 : 1;
  std::uint64_t count = 0;
  for (int d = -m; d <= m; ++d) count += count_zero_sums(position + 1, length, m, partial + sign * d, alternating);
  return count;
}

}  // namespace

BigInt card_G_bruteforce(int p, int m, bool alternating, std::uint64_t budget) {
  if (p < 1 || m < 0) throw InvalidArgumentError("card_G_bruteforce needs p >= 1 and m >= 0");
  BigInt candidates = boost::multiprecision::pow(BigInt(2 * m + 1), static_cast<unsigned>(2 * p));
  if (candidates > budget) {
    throw ResourceLimitError("brute-force enumeration of " + candidates.str() + " vectors exceeds budget " +
                             std::to_string(budget));
  }
  return BigInt(count_zero_sums(0, 2 * p, m, 0, alternating));
}

BigInt double_factorial_odd(int p) {
  BigInt r = 1;
  for (int k = 2 * p - 1; k > 1; k -= 2) r *= k;
  return r;
}

BigInt factorial(int p) {
  BigInt r = 1;
  for (int k = 2; k <= p; ++k) r *= k;
  return r;
}

}  // namespace rmlab
