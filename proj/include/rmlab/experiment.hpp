#pragma once

// Orchestration behind the command-line subcommands. Every command takes a
// resolved ExperimentConfig, returns its result in memory, and writes its data
// files when config.out is set. Data files embed the config and the version
// string; the wall-clock timestamp goes only to run.json.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmlab/ensemble.hpp"
#include "rmlab/lsd_moments.hpp"
#include "rmlab/spectra.hpp"
#include "rmlab/trace_validate.hpp"

namespace rmlab {

std::string_view version_string() noexcept;

enum class SimulationMethod { Dense, Fast };

std::string_view to_string(SimulationMethod method);
SimulationMethod parse_method(std::string_view name);

struct ExperimentConfig {
  MatrixKind kind = MatrixKind::Toeplitz;
  int n = 500;
  std::vector<int> n_list{250, 500, 1000, 2000};
  int m = 0;
  std::optional<std::vector<double>> weights;  // c_{-m..m}; unset means unit weights
  EntryDistribution dist = EntryDistribution::StandardNormal;
  int trials = 50;
  int h_max = 4;
  int h = 0;  // convergence: single moment order, 0 reports every h <= h_max
  std::uint64_t seed = 1;
  std::string out;  // output directory; empty writes nothing
  SimulationMethod method = SimulationMethod::Fast;
  std::uint64_t budget = 0;  // gamma samples/grid side (0: default), or enumeration cap
  GammaMethod gamma_method = GammaMethod::MonteCarlo;
  bool theory = true;  // compare against beta_sequence
  int p_max = 4;
  int m_max = 3;
  bool bruteforce = true;
  bool mutate = false;  // validate: inject the off-by-one indicator
  int seeds = 20;       // validate: random inputs per (kind, n, h)

  /// Throws InvalidArgumentError naming the offending field.
  void validate() const;
  MovingAverageProcess process(std::uint64_t trial_seed) const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Per-trial seed; the n component keeps points of a convergence sweep independent.
std::uint64_t trial_seed(std::uint64_t root, int n, int trial);

struct ConvergenceRow {
  int h = 0;
  int n = 0;
  int trials = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation across trials
  std::optional<double> beta;
  double beta_std_error = 0.0;
  std::optional<double> z;

  double variance() const noexcept { return std * std; }
};

/// (mean - beta) / sqrt(std^2/trials + se^2); empty when the denominator is zero.
std::optional<double> z_score(double mean, double std, int trials, double beta, double beta_std_error);

struct DiagonalCheck {
  double w2_squared = 0.0;
  double bound = 0.0;  // (1/n) sum_i M_ii^2
  bool holds(double slack = 1e-10) const noexcept { return w2_squared <= bound + slack; }
};

struct TrialSample {
  std::vector<double> moments;      // index h, [0] = 1
  std::vector<double> eigenvalues;  // dense path only
  std::optional<DiagonalCheck> diagonal;
};

/// One independent draw at size n, through the configured method.
TrialSample run_trial(const ExperimentConfig& config, int n, int trial, bool with_diagonal_check);

struct SimulationResult {
  int n = 0;
  std::vector<TrialSample> trials;
  std::vector<ConvergenceRow> rows;  // h = 1..h_max
  std::optional<MomentReport> theory;
  std::optional<Histogram> pooled_histogram;  // dense path only
};

/// Aggregates trial moments into rows and attaches theory when given.
std::vector<ConvergenceRow> summarize(const std::vector<TrialSample>& trials, int n, int h_max,
                                      const MomentReport* theory);

SimulationResult cmd_simulate(const ExperimentConfig& config);
MomentReport cmd_moments(const ExperimentConfig& config);

struct CardinalityRow {
  int p = 0;
  int m = 0;
  BigInt closed_t = 0;
  BigInt closed_h = 0;
  std::optional<BigInt> brute_t;
  std::optional<BigInt> brute_h;

  bool match() const;
};
std::vector<CardinalityRow> cmd_cardinality(const ExperimentConfig& config);

struct ValidationReport {
  std::vector<ValidationCase> cases;
  std::size_t failures() const;
  bool pass() const { return failures() == 0; }
};
ValidationReport cmd_validate(const ExperimentConfig& config);

struct ConvergencePoint {
  int n = 0;
  std::vector<ConvergenceRow> rows;
  std::vector<DiagonalCheck> diagonal;  // one per trial, dense path only
};
std::vector<ConvergencePoint> cmd_convergence(const ExperimentConfig& config);

/// run.json: config, version and a UTC timestamp. Kept apart from the data files.
void write_run_record(const ExperimentConfig& config, const std::string& command);

}  // namespace rmlab
