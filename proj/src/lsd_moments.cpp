#include "rmlab/lsd_moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmlab/error.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/rng.hpp"

namespace rmlab {

std::string_view to_string(GammaMethod method) {
  return method == GammaMethod::MonteCarlo ? "MonteCarlo" : "RiemannGrid";
}

GammaMethod parse_gamma_method(std::string_view name) {
  if (name == "mc" || name == "MonteCarlo" || name == "montecarlo") return GammaMethod::MonteCarlo;
  if (name == "grid" || name == "RiemannGrid" || name == "riemann") return GammaMethod::RiemannGrid;
  throw InvalidArgumentError("unknown gamma method '" + std::string(name) + "'");
}

std::uint64_t default_budget(GammaMethod method, int p) {
  if (method == GammaMethod::MonteCarlo) {
    if (p <= 3) return 1'000'000;
    if (p <= 5) return 100'000;
    return 10'000;
  }
  switch (p) {
    case 1: return 4000;
    case 2: return 400;
    case 3: return 100;
    case 4: return 30;
    case 5: return 10;
    default: return kMinGridSide;
  }
}

WalkPattern walk_pattern(const PairPartition& pi, MatrixKind kind) {
  WalkPattern walk;
  const int length = pi.size();
  walk.block.reserve(static_cast<std::size_t>(length));
  walk.sign.reserve(static_cast<std::size_t>(length));
  for (int ell = 1; ell <= length; ++ell) {
    walk.block.push_back(pi.block_of(ell));
    if (kind == MatrixKind::Toeplitz) {
      walk.sign.push_back(pi.epsilon(ell));
    } else {
      // z_0 - sum_{l<=s} (-1)^l z_{pi(l)}
      walk.sign.push_back(ell % 2 == 0 ? -1 : 1);
    }
  }
  return walk;
}

namespace {

std::vector<PairPartition> partitions_for(MatrixKind kind, int p) {
  return kind == MatrixKind::Toeplitz ? enumerate_pair_partitions(p) : enumerate_oe_pair_partitions(p);
}

struct PartitionResult {
  double value = 0.0;
  double variance = 0.0;
  double inside = 0.0;
  double maybe_inside = 0.0;
};

PartitionResult monte_carlo_volume(const WalkPattern& walk, int p, std::uint64_t samples, std::uint64_t seed) {
  Engine engine(seed);
  std::vector<double> z(static_cast<std::size_t>(p));
  std::uint64_t hits = 0;
  for (std::uint64_t k = 0; k < samples; ++k) {
    double level = uniform01(engine);
    for (double& v : z) v = uniform(engine, -1.0, 1.0);
    bool inside = true;
    for (std::size_t s = 0; s < walk.block.size(); ++s) {
      level += walk.sign[s] * z[static_cast<std::size_t>(walk.block[s])];
      if (level < 0.0 || level > 1.0) {
        inside = false;
        break;
      }
    }
    hits += inside ? 1 : 0;
  }
  const double box = std::ldexp(1.0, p);
  const double n = static_cast<double>(samples);
  const double q = static_cast<double>(hits) / n;
  return {box * q, box * box * q * (1.0 - q) / (n - 1.0), 0.0, 0.0};
}

// Midpoint rule on N cells per axis over [0,1] x [-1,1]^p. Scaled by N, every
// z_i midpoint is the odd integer w_i = 2 j_i + 1 - N and z_0 is k + 1/2, so
// each partial sum is an integer T_s and the z_0 midpoints inside
//   0 <= k + 1/2 + T_s <= N  for all s
// are k in [max_s(-T_s), min_s(N - 1 - T_s)]. Cells whose interval image
// crosses a boundary bound the midpoint bias.
PartitionResult grid_volume(const WalkPattern& walk, int p, long side) {
  const std::size_t steps = walk.block.size();
  std::vector<long> j(static_cast<std::size_t>(p), 0);
  std::vector<long> active(steps);
  {
    std::vector<int> open(static_cast<std::size_t>(p), 0);
    for (std::size_t s = 0; s < steps; ++s) {
      open[static_cast<std::size_t>(walk.block[s])] += walk.sign[s];
      long count = 0;
      for (int c : open) count += std::abs(c);
      active[s] = count;
    }
  }
  long long mid_count = 0, inside_count = 0, maybe_count = 0;
  std::size_t total = 1;
  for (int i = 0; i < p; ++i) total *= static_cast<std::size_t>(side);
  for (std::size_t cell = 0; cell < total; ++cell) {
    long mid_lo = 0, mid_hi = side - 1;
    long in_lo = 0, in_hi = side - 1;
    long maybe_lo = 0, maybe_hi = side - 1;
    long t = 0;
    for (std::size_t s = 0; s < steps; ++s) {
      const long w = 2 * j[static_cast<std::size_t>(walk.block[s])] + 1 - side;
      t += walk.sign[s] * w;
      const long a = active[s];
      mid_lo = std::max(mid_lo, -t);
      mid_hi = std::min(mid_hi, side - 1 - t);
      in_lo = std::max(in_lo, a - t);
      in_hi = std::min(in_hi, side - 1 - t - a);
      maybe_lo = std::max(maybe_lo, -1 - a - t);
      maybe_hi = std::min(maybe_hi, side + a - t);
    }
    mid_count += std::max(0L, mid_hi - mid_lo + 1);
    inside_count += std::max(0L, in_hi - in_lo + 1);
    maybe_count += std::max(0L, maybe_hi - maybe_lo + 1);
    for (int i = 0; i < p; ++i) {
      if (++j[static_cast<std::size_t>(i)] < side) break;
      j[static_cast<std::size_t>(i)] = 0;
    }
  }
  const double cell_volume = std::ldexp(1.0, p) / std::pow(static_cast<double>(side), p + 1);
  return {static_cast<double>(mid_count) * cell_volume, 0.0, static_cast<double>(inside_count) * cell_volume,
          static_cast<double>(maybe_count) * cell_volume};
}

}  // namespace

GammaEstimate gamma_estimate(MatrixKind kind, int p, const GammaOptions& options) {
  if (p < 1) throw InvalidArgumentError("gamma needs p >= 1");
  const std::uint64_t budget = options.budget == 0 ? default_budget(options.method, p) : options.budget;
  if (options.method == GammaMethod::MonteCarlo && budget < kMinMonteCarloSamples) {
    throw InvalidArgumentError("Monte Carlo budget below floor of " + std::to_string(kMinMonteCarloSamples));
  }
  if (options.method == GammaMethod::RiemannGrid && budget < kMinGridSide) {
    throw InvalidArgumentError("grid side below floor of " + std::to_string(kMinGridSide));
  }
  const auto partitions = partitions_for(kind, p);
  std::vector<PartitionResult> parts(partitions.size());
  const std::uint64_t stream_root =
      derive_seed(options.seed, static_cast<std::uint64_t>(p) * 2 + (kind == MatrixKind::Hankel ? 1 : 0));
  parallel_for(partitions.size(), [&](std::size_t k) {
    const WalkPattern walk = walk_pattern(partitions[k], kind);
    parts[k] = options.method == GammaMethod::MonteCarlo
                   ? monte_carlo_volume(walk, p, budget, derive_seed(stream_root, k))
                   : grid_volume(walk, p, static_cast<long>(budget));
  });

  GammaEstimate est;
  est.p = p;
  est.kind = kind;
  est.method = options.method;
  est.samples_or_gridsize = budget;
  est.partitions = partitions.size();
  double variance = 0.0, inside = 0.0, maybe = 0.0;
  for (const auto& part : parts) {
    est.value += part.value;
    variance += part.variance;
    inside += part.inside;
    maybe += part.maybe_inside;
  }
  est.std_error = std::sqrt(variance);
  if (options.method == GammaMethod::RiemannGrid) {
    est.bias_bound = std::max(est.value - inside, maybe - est.value);
  }
  return est;
}

GammaEstimate gamma_toeplitz(int p, const GammaOptions& options) {
  return gamma_estimate(MatrixKind::Toeplitz, p, options);
}

GammaEstimate gamma_hankel(int p, const GammaOptions& options) {
  return gamma_estimate(MatrixKind::Hankel, p, options);
}

double gamma_upper_bound(MatrixKind kind, int p) {
  const BigInt count = kind == MatrixKind::Toeplitz ? double_factorial_odd(p) : factorial(p);
  return std::ldexp(count.convert_to<double>(), p);
}

const MomentRow& MomentReport::at(int h) const {
  if (h < 1 || h > h_max()) throw InvalidArgumentError("moment order " + std::to_string(h) + " not in report");
  return rows[static_cast<std::size_t>(h - 1)];
}

MomentReport beta_sequence(MatrixKind kind, int m, int h_max, const GammaOptions& options,
                           std::span<const double> weights) {
  if (m < 0) throw InvalidArgumentError("beta_sequence needs m >= 0");
  if (h_max < 2) throw InvalidArgumentError("beta_sequence needs h_max >= 2");
  if (!weights.empty() && std::any_of(weights.begin(), weights.end(), [](double c) { return c != 1.0; })) {
    throw UnsupportedTheoryError("limiting moments are only available for unit moving-average weights");
  }
  MomentReport report;
  report.kind = kind;
  report.m = m;
  for (int h = 1; h <= h_max; ++h) {
    MomentRow row;
    row.h = h;
    if (h % 2 == 0) {
      const int p = h / 2;
      row.cardinality = kind == MatrixKind::Toeplitz ? card_G_T(p, m) : card_G_H(p, m);
      row.gamma = gamma_estimate(kind, p, options);
      const double card = row.cardinality.convert_to<double>();
      row.beta = card * row.gamma->value;
      row.std_error = card * row.gamma->std_error;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

MomentReport report_from_even_moments(MatrixKind kind, int m, std::span<const double> even_moments,
                                      std::span<const double> std_errors) {
  MomentReport report;
  report.kind = kind;
  report.m = m;
  for (std::size_t p = 1; p <= even_moments.size(); ++p) {
    MomentRow odd;
    odd.h = static_cast<int>(2 * p - 1);
    report.rows.push_back(odd);
    MomentRow even;
    even.h = static_cast<int>(2 * p);
    even.beta = even_moments[p - 1];
    even.std_error = p - 1 < std_errors.size() ? std_errors[p - 1] : 0.0;
    report.rows.push_back(even);
  }
  return report;
}

double riesz_bound(int p, int m) {
  const double log_pairings = std::lgamma(2.0 * p + 1.0) - p * std::log(2.0) - std::lgamma(p + 1.0);
  return 2.0 * std::exp(log_pairings / (2.0 * p)) * (2.0 * m + 1.0) / p;
}

std::vector<GrowthRow> growth_diagnostics(const MomentReport& report) {
  const int p_max = report.h_max() / 2;
  if (p_max < 3) throw InvalidArgumentError("growth diagnostics need even moments up to order 6");
  std::vector<GrowthRow> out;
  for (int p = 1; p <= p_max; ++p) {
    const MomentRow& row = report.at(2 * p);
    if (!(row.beta > 0.0)) {
      throw InvalidArgumentError("growth diagnostics need positive beta_" + std::to_string(2 * p));
    }
    GrowthRow g;
    g.p = p;
    g.support_value = std::pow(row.beta, 1.0 / p);
    g.riesz_value = std::pow(row.beta, 1.0 / (2.0 * p)) / p;
    g.support_std_error = g.support_value / (p * row.beta) * row.std_error;
    g.riesz_bound = riesz_bound(p, report.m);
    out.push_back(g);
  }
  return out;
}

nlohmann::json to_json(const GammaEstimate& e) {
  return {{"p", e.p},
          {"kind", to_string(e.kind)},
          {"value", e.value},
          {"std_error", e.std_error},
          {"bias_bound", e.bias_bound},
          {"method", to_string(e.method)},
          {"samples_or_gridsize", e.samples_or_gridsize},
          {"partitions", e.partitions}};
}

nlohmann::json to_json(const MomentReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json r = {{"h", row.h},
                        {"beta", row.beta},
                        {"se", row.std_error},
                        {"cardinality", row.cardinality.str()},
                        {"method", row.gamma ? std::string(to_string(row.gamma->method)) : std::string("exact")}};
    if (row.gamma) r["gamma"] = to_json(*row.gamma);
    rows.push_back(std::move(r));
  }
  return {{"kind", to_string(report.kind)}, {"m", report.m}, {"rows", std::move(rows)}};
}

}  // namespace rmlab
