#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rmlab/ensemble.hpp"

namespace rmlab {

inline constexpr int kDefaultHistogramBins = 101;
inline constexpr double kHistogramPadding = 1e-9;

struct Histogram {
  std::vector<double> edges;  // bins + 1 ascending edges
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const noexcept;
};

/// Empirical spectral distribution of one matrix: mass 1/n at each eigenvalue.
struct EsdSummary {
  int n = 0;
  std::vector<double> eigenvalues;        // ascending
  Histogram histogram;
  std::vector<double> empirical_moments;  // index h, with [0] = 1

  /// F(x) = #{k : lambda_k <= x} / n
  double cdf(double x) const;
  /// Fraction of eigenvalues in [lo, hi].
  double mass_within(double lo, double hi) const;
  double moment(int h) const;
};

/// Histogram over [min - eps, max + eps]; throws InvalidArgumentError when bins < 1.
Histogram make_histogram(std::span<const double> values, int bins = kDefaultHistogramBins);

/// Sorts the eigenvalues; moments up to h_max. Throws InvalidArgumentError for
/// empty input or bins < 1.
EsdSummary esd(std::vector<double> eigenvalues, int bins = kDefaultHistogramBins, int h_max = 8);

/// All eigenvalues, ascending. Throws NumericInputError on non-finite entries.
std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& m);
std::vector<double> eigenvalues_symmetric(const PatternedMatrix& m);

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values(k)
};
EigenPairs symmetric_eigenpairs(const Eigen::MatrixXd& m);

enum class MomentPath { EigenPowerSum, DensePowerTrace };

/// (1/n) Tr(M^h). h = 0 returns 1.
double empirical_moment(const PatternedMatrix& m, int h, MomentPath path);
/// (1/n) sum lambda_k^h for an already sorted spectrum.
double power_sum_moment(std::span<const double> eigenvalues, int h);

/// Toeplitz or Hankel operator applied in O(n log n) through a circulant
/// embedding. A Hankel matrix is a Toeplitz matrix acting on the reversed
/// vector. Immutable after construction; apply() is safe to call concurrently.
class StructuredOperator {
 public:
  /// Generating sequence scaled by 1/sqrt(n), as in build_toeplitz/build_hankel.
  static StructuredOperator from_sequence(MatrixKind kind, int n, const EntrySequence& y);
  /// Reads the generating sequence off the dense entries. Rejects a Hankel
  /// matrix whose diagonal was zeroed, since it is no longer Hankel.
  static StructuredOperator from_matrix(const PatternedMatrix& m);

  StructuredOperator(StructuredOperator&&) noexcept;
  StructuredOperator& operator=(StructuredOperator&&) noexcept;
  ~StructuredOperator();

  MatrixKind kind() const noexcept { return kind_; }
  int size() const noexcept { return n_; }
  std::size_t embedding_length() const noexcept { return length_; }

  /// Throws InvalidArgumentError when |v| != n.
  std::vector<double> apply(std::span<const double> v) const;

 private:
  struct Plans;
  // diagonals[d + n - 1] holds t(d) for the Toeplitz form A[i][k] = t(i - k).
  StructuredOperator(MatrixKind kind, int n, std::vector<double> diagonals);

  MatrixKind kind_;
  int n_;
  std::size_t length_;
  std::vector<std::complex<double>> spectrum_;
  std::unique_ptr<Plans> plans_;
};

std::vector<double> fast_matvec(const StructuredOperator& op, std::span<const double> v);

/// Exact (1/n) Tr(M^h) for h = 1..h_max from ceil(h_max/2) operator
/// applications per basis vector: Tr(M^{a+b}) = sum_i <M^a e_i, M^b e_i>.
std::vector<double> structured_moments(const StructuredOperator& op, int h_max);

struct TraceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  int probes = 0;
};

/// Hutchinson estimate of (1/n) Tr(M^h) with Rademacher probes. probes >= 8.
TraceEstimate hutchinson_moment(const StructuredOperator& op, int h, int probes, std::uint64_t seed);

/// 2-Wasserstein distance between two spectra through the quantile coupling.
double w2_distance(const EsdSummary& a, const EsdSummary& b);

/// Copy with the diagonal set to zero, flagged as derived.
PatternedMatrix zero_diagonal(const PatternedMatrix& m);

/// (1/n) Tr((A - B)^2) for A and its zero-diagonal copy: (1/n) sum_i M_ii^2.
double diagonal_energy(const PatternedMatrix& m);

nlohmann::json to_json(const Histogram& h);

}  // namespace rmlab
