#pragma once

// Dependent entry model and the two patterned ensembles built from it.
//
// Entries follow a finite two-sided moving average
//   Y_j = sum_{r=-m}^{m} c_r X_{j+r}
// of i.i.d. mean-zero, unit-variance X_k. Indices are two-sided integers.
// Toeplitz matrices read Y_{|i-j|}; Hankel matrices read Y_{n-(i+j)+1}
// (1-based i, j), which ranges over [-(n-1), n-1], and Y_j, Y_{-j} are
// distinct random variables there.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rmlab/rng.hpp"

namespace rmlab {

enum class EntryDistribution { StandardNormal, Rademacher, UniformSym };

std::string_view to_string(EntryDistribution dist);
/// Accepts "normal", "rademacher", "uniform" (and the enum spellings).
EntryDistribution parse_distribution(std::string_view name);

/// Stateful sampler for one base distribution; all three have mean 0 and variance 1.
class EntrySampler {
 public:
  EntrySampler(EntryDistribution dist, std::uint64_t seed);
  double operator()();

 private:
  EntryDistribution dist_;
  Engine engine_;
  std::normal_distribution<double> normal_;
};

/// Real values on the contiguous integer window [lo, hi].
class EntrySequence {
 public:
  EntrySequence(long lo, std::vector<double> values);

  long lo() const noexcept { return lo_; }
  long hi() const noexcept { return lo_ + static_cast<long>(values_.size()) - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  bool covers(long a, long b) const noexcept { return a >= lo() && b <= hi(); }

  /// Throws MissingSupportError outside [lo, hi].
  double at(long j) const;
  double operator[](long j) const noexcept { return values_[static_cast<std::size_t>(j - lo_)]; }
  std::span<const double> values() const noexcept { return values_; }

  friend bool operator==(const EntrySequence&, const EntrySequence&) = default;

 private:
  long lo_;
  std::vector<double> values_;
};

struct MovingAverageProcess {
  int m = 0;
  std::vector<double> weights{1.0};  // c_{-m..m}
  EntryDistribution dist = EntryDistribution::StandardNormal;
  std::uint64_t seed = 0;

  /// Unit weights of length 2m+1.
  static MovingAverageProcess unit(int m, EntryDistribution dist, std::uint64_t seed);

  /// Throws InvalidArgumentError unless m >= 0 and |weights| == 2m+1.
  void validate() const;
  bool has_unit_weights() const;
};

/// i.i.d. draws X_lo..X_hi from process.dist, deterministic in process.seed.
EntrySequence sample_raw(const MovingAverageProcess& process, long lo, long hi);

/// Y_j = sum_r weights[r+m] X_{j+r} for j in [j_lo, j_hi].
EntrySequence moving_average(const EntrySequence& raw, int m, std::span<const double> weights,
                             long j_lo, long j_hi);
/// Widest output window the raw support allows: [raw.lo + m, raw.hi - m].
EntrySequence moving_average(const EntrySequence& raw, int m, std::span<const double> weights);

enum class MatrixKind { Toeplitz, Hankel };

std::string_view to_string(MatrixKind kind);
MatrixKind parse_kind(std::string_view name);

/// Realized n x n symmetric Toeplitz or Hankel matrix, scaled by 1/sqrt(n).
class PatternedMatrix {
 public:
  PatternedMatrix(MatrixKind kind, Eigen::MatrixXd entries,
                  std::shared_ptr<const EntrySequence> source, bool diagonal_zeroed = false);

  MatrixKind kind() const noexcept { return kind_; }
  int n() const noexcept { return static_cast<int>(entries_.rows()); }
  double scale() const noexcept;
  const Eigen::MatrixXd& entries() const noexcept { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }
  const EntrySequence& source() const noexcept { return *source_; }
  std::shared_ptr<const EntrySequence> source_ptr() const noexcept { return source_; }
  /// True for matrices derived by zero_diagonal(); the pattern no longer holds on the diagonal.
  bool diagonal_zeroed() const noexcept { return diagonal_zeroed_; }

 private:
  MatrixKind kind_;
  Eigen::MatrixXd entries_;
  std::shared_ptr<const EntrySequence> source_;
  bool diagonal_zeroed_;
};

/// M[i][j] = Y_{|i-j|} / sqrt(n); needs Y on [0, n-1].
PatternedMatrix build_toeplitz(std::shared_ptr<const EntrySequence> y, int n);
PatternedMatrix build_toeplitz(EntrySequence y, int n);

/// M[i][j] = Y_{n-(i+j)+1} / sqrt(n) with 1-based i, j; needs Y on [-(n-1), n-1].
PatternedMatrix build_hankel(std::shared_ptr<const EntrySequence> y, int n);
PatternedMatrix build_hankel(EntrySequence y, int n);

/// Raw window [-(n-1)-m, (n-1)+m] is the minimal support for both kinds.
EntrySequence sample_entries(const MovingAverageProcess& process, int n);

/// seed -> raw -> moving average -> matrix, in one call.
PatternedMatrix sample_matrix(MatrixKind kind, int n, const MovingAverageProcess& process);

}  // namespace rmlab
