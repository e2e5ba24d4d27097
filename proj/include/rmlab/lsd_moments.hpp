#pragma once

// Limiting even moments beta_{2p} = #G_{2p,m} * gamma(p) for the two
// ensembles, where gamma(p) sums, over the relevant pair partitions, the
// volume of
//   { (z_0, z_1..z_p) in [0,1] x [-1,1]^p : z_0 + S_s(z) in [0,1], s = 1..2p }
// and S_s is a signed partial sum of the block variables along the word.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rmlab/combinatorics.hpp"
#include "rmlab/ensemble.hpp"

namespace rmlab {

enum class GammaMethod { MonteCarlo, RiemannGrid };

std::string_view to_string(GammaMethod method);
GammaMethod parse_gamma_method(std::string_view name);

inline constexpr std::uint64_t kMinMonteCarloSamples = 1000;
inline constexpr std::uint64_t kMinGridSide = 8;
inline constexpr int kDefaultMaxHalfOrder = 6;

struct GammaOptions {
  GammaMethod method = GammaMethod::MonteCarlo;
  /// Samples per partition (Monte Carlo) or points per axis (grid); 0 picks default_budget(p).
  std::uint64_t budget = 0;
  std::uint64_t seed = 20240521;
};

/// 10^6 samples per partition for p <= 3, 10^5 for p in {4, 5}, 10^4 beyond;
/// grid sides shrink with dimension so that cost stays at desk scale.
std::uint64_t default_budget(GammaMethod method, int p);

struct GammaEstimate {
  int p = 0;
  MatrixKind kind = MatrixKind::Toeplitz;
  double value = 0.0;
  double std_error = 0.0;   // zero for the grid
  double bias_bound = 0.0;  // grid only: volume of cells cut by a constraint boundary
  GammaMethod method = GammaMethod::MonteCarlo;
  std::uint64_t samples_or_gridsize = 0;
  std::uint64_t partitions = 0;
};

/// Step signs of the partial sums S_1..S_2p for one partition: step[s] adds
/// sign[s] * z_{block[s]}.
struct WalkPattern {
  std::vector<int> block;
  std::vector<int> sign;
};

/// Toeplitz words pair j with -j, so the step sign is epsilon_pi(ell).
/// Hankel words pair equal values at an odd and an even position, so the
/// step sign is the alternating sign alone.
WalkPattern walk_pattern(const PairPartition& pi, MatrixKind kind);

GammaEstimate gamma_toeplitz(int p, const GammaOptions& options = {});
GammaEstimate gamma_hankel(int p, const GammaOptions& options = {});
GammaEstimate gamma_estimate(MatrixKind kind, int p, const GammaOptions& options = {});

/// Crude upper bounds: 2^p (2p-1)!! for Toeplitz, 2^p p! for Hankel.
double gamma_upper_bound(MatrixKind kind, int p);

struct MomentRow {
  int h = 0;
  double beta = 0.0;
  double std_error = 0.0;
  BigInt cardinality = 0;  // #G_{h,m}; zero on odd rows
  std::optional<GammaEstimate> gamma;
};

struct MomentReport {
  MatrixKind kind = MatrixKind::Toeplitz;
  int m = 0;
  std::vector<MomentRow> rows;  // h = 1..h_max

  const MomentRow& at(int h) const;
  int h_max() const noexcept { return static_cast<int>(rows.size()); }
};

/// Throws UnsupportedTheoryError when weights are given and not all ones.
MomentReport beta_sequence(MatrixKind kind, int m, int h_max, const GammaOptions& options = {},
                           std::span<const double> weights = {});

/// Report with caller-supplied even moments (index p-1 holds beta_{2p});
/// used to exercise the diagnostics on reference sequences.
MomentReport report_from_even_moments(MatrixKind kind, int m, std::span<const double> even_moments,
                                      std::span<const double> std_errors = {});

struct GrowthRow {
  int p = 0;
  double riesz_value = 0.0;    // beta_{2p}^{1/(2p)} / p
  double support_value = 0.0;  // beta_{2p}^{1/p}
  double support_std_error = 0.0;
  double riesz_bound = 0.0;    // 2 ((2p)! / (2^p p!))^{1/(2p)} (2m+1) / p
};

/// Needs even moments up to 2 p_max with p_max >= 3; throws InvalidArgumentError
/// if any beta_{2p} <= 0.
std::vector<GrowthRow> growth_diagnostics(const MomentReport& report);

double riesz_bound(int p, int m);

nlohmann::json to_json(const GammaEstimate& estimate);
nlohmann::json to_json(const MomentReport& report);

}  // namespace rmlab
