#include "rmlab/experiment.hpp"

#include <chrono>
#include <ctime>
#include <cmath>
#include <fstream>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "rmlab/error.hpp"
#include "rmlab/parallel.hpp"
#include "rmlab/rng.hpp"

namespace rmlab {

std::string_view version_string() noexcept { return RMLAB_VERSION; }

std::string_view to_string(SimulationMethod method) {
  return method == SimulationMethod::Dense ? "dense" : "fast";
}

SimulationMethod parse_method(std::string_view name) {
  if (name == "dense") return SimulationMethod::Dense;
  if (name == "fast") return SimulationMethod::Fast;
  throw InvalidArgumentError("unknown method '" + std::string(name) + "' (expected dense or fast)");
}

void ExperimentConfig::validate() const {
  if (n < 1) throw InvalidArgumentError("n must be >= 1");
  if (m < 0) throw InvalidArgumentError("m must be >= 0");
  if (trials < 1) throw InvalidArgumentError("trials must be >= 1");
  if (h_max < 2) throw InvalidArgumentError("hmax must be >= 2");
  if (h < 0) throw InvalidArgumentError("h must be >= 0");
  if (p_max < 1) throw InvalidArgumentError("pmax must be >= 1");
  if (m_max < 0) throw InvalidArgumentError("mmax must be >= 0");
  if (seeds < 1) throw InvalidArgumentError("seeds must be >= 1");
  if (n_list.empty()) throw InvalidArgumentError("n_list must not be empty");
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 1) throw InvalidArgumentError("n_list entries must be >= 1");
    if (k > 0 && n_list[k] <= n_list[k - 1]) throw InvalidArgumentError("n_list must be strictly ascending");
  }
  if (weights) {
    if (weights->size() != static_cast<std::size_t>(2 * m + 1)) {
      throw InvalidArgumentError(fmt::format("weights must have 2m+1 = {} entries, got {}", 2 * m + 1, weights->size()));
    }
    for (double w : *weights)
      if (!std::isfinite(w)) throw InvalidArgumentError("weights must be finite");
  }
}

MovingAverageProcess ExperimentConfig::process(std::uint64_t trial_seed) const {
  MovingAverageProcess p = MovingAverageProcess::unit(m, dist, trial_seed);
  if (weights) p.weights = *weights;
  return p;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["kind"] = to_string(c.kind);
  j["n"] = c.n;
  j["n_list"] = c.n_list;
  j["m"] = c.m;
  j["weights"] = c.weights ? nlohmann::json(*c.weights) : nlohmann::json(nullptr);
  j["dist"] = to_string(c.dist);
  j["trials"] = c.trials;
  j["h_max"] = c.h_max;
  j["h"] = c.h;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["method"] = to_string(c.method);
  j["budget"] = c.budget;
  j["gamma_method"] = to_string(c.gamma_method);
  j["theory"] = c.theory;
  j["p_max"] = c.p_max;
  j["m_max"] = c.m_max;
  j["bruteforce"] = c.bruteforce;
  j["mutate"] = c.mutate;
  j["seeds"] = c.seeds;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InvalidArgumentError("config must be a JSON object");
  static const std::set<std::string> known{"kind",   "n",     "n_list", "m",          "weights",  "dist",   "trials",
                                           "h_max",  "h",     "seed",   "out",        "method",   "budget", "gamma_method",
                                           "theory", "p_max", "m_max",  "bruteforce", "mutate",   "seeds"};
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw InvalidArgumentError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("kind")) c.kind = parse_kind(j.at("kind").get<std::string>());
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("n_list")) c.n_list = j.at("n_list").get<std::vector<int>>();
    if (j.contains("m")) c.m = j.at("m").get<int>();
    if (j.contains("weights") && !j.at("weights").is_null()) c.weights = j.at("weights").get<std::vector<double>>();
    if (j.contains("dist")) c.dist = parse_distribution(j.at("dist").get<std::string>());
    if (j.contains("trials")) c.trials = j.at("trials").get<int>();
    if (j.contains("h_max")) c.h_max = j.at("h_max").get<int>();
    if (j.contains("h")) c.h = j.at("h").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    if (j.contains("method")) c.method = parse_method(j.at("method").get<std::string>());
    if (j.contains("budget")) c.budget = j.at("budget").get<std::uint64_t>();
    if (j.contains("gamma_method")) c.gamma_method = parse_gamma_method(j.at("gamma_method").get<std::string>());
    if (j.contains("theory")) c.theory = j.at("theory").get<bool>();
    if (j.contains("p_max")) c.p_max = j.at("p_max").get<int>();
    if (j.contains("m_max")) c.m_max = j.at("m_max").get<int>();
    if (j.contains("bruteforce")) c.bruteforce = j.at("bruteforce").get<bool>();
    if (j.contains("mutate")) c.mutate = j.at("mutate").get<bool>();
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgumentError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

std::uint64_t trial_seed(std::uint64_t root, int n, int trial) {
  return derive_seed(derive_seed(root, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(trial));
}

std::optional<double> z_score(double mean, double std, int trials, double beta, double beta_std_error) {
  const double denominator = std::sqrt(std * std / trials + beta_std_error * beta_std_error);
  if (!(denominator > 0.0)) return std::nullopt;
  return (mean - beta) / denominator;
}

namespace {

GammaOptions gamma_options(const ExperimentConfig& c) {
  return GammaOptions{c.gamma_method, c.budget, c.seed};
}

std::optional<MomentReport> theory_for(const ExperimentConfig& c) {
  if (!c.theory) return std::nullopt;
  std::span<const double> w;
  if (c.weights) w = *c.weights;
  return beta_sequence(c.kind, c.m, c.h_max, gamma_options(c), w);
}

std::string g17(double v) { return fmt::format("{:.17g}", v); }
std::string opt17(const std::optional<double>& v) { return v ? g17(*v) : std::string(); }

std::filesystem::path prepare_out(const ExperimentConfig& c) {
  std::filesystem::path dir(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing " + path.string());
}

std::string csv_header(const ExperimentConfig& c) {
  return "# version: " + std::string(version_string()) + "\n# config: " + to_json(c).dump() + "\n";
}

nlohmann::json envelope(const ExperimentConfig& c) {
  return {{"version", version_string()}, {"config", to_json(c)}};
}

std::string rows_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "n,h,trials,mean,std,variance,beta,beta_se,z\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.n, r.h, r.trials, g17(r.mean), g17(r.std), g17(r.variance()),
                       opt17(r.beta), g17(r.beta_std_error), opt17(r.z));
  }
  return out;
}

}  // namespace

TrialSample run_trial(const ExperimentConfig& c, int n, int trial, bool with_diagonal_check) {
  const MovingAverageProcess process = c.process(trial_seed(c.seed, n, trial));
  TrialSample sample;
  if (c.method == SimulationMethod::Fast) {
    const EntrySequence y = sample_entries(process, n);
    const auto op = StructuredOperator::from_sequence(c.kind, n, y);
    sample.moments = structured_moments(op, c.h_max);
    return sample;
  }
  const PatternedMatrix matrix = sample_matrix(c.kind, n, process);
  EsdSummary full = esd(eigenvalues_symmetric(matrix), kDefaultHistogramBins, c.h_max);
  sample.moments = full.empirical_moments;
  if (with_diagonal_check) {
    const PatternedMatrix hollow = zero_diagonal(matrix);
    const EsdSummary other = esd(eigenvalues_symmetric(hollow), kDefaultHistogramBins, 2);
    const double w2 = w2_distance(full, other);
    sample.diagonal = DiagonalCheck{w2 * w2, diagonal_energy(matrix)};
  }
  sample.eigenvalues = std::move(full.eigenvalues);
  return sample;
}

std::vector<ConvergenceRow> summarize(const std::vector<TrialSample>& trials, int n, int h_max,
                                      const MomentReport* theory) {
  std::vector<ConvergenceRow> rows;
  const int count = static_cast<int>(trials.size());
  for (int h = 1; h <= h_max; ++h) {
    ConvergenceRow row;
    row.h = h;
    row.n = n;
    row.trials = count;
    double sum = 0.0;
    for (const auto& t : trials) sum += t.moments[static_cast<std::size_t>(h)];
    row.mean = sum / count;
    if (count > 1) {
      double ss = 0.0;
      for (const auto& t : trials) {
        const double d = t.moments[static_cast<std::size_t>(h)] - row.mean;
        ss += d * d;
      }
      row.std = std::sqrt(ss / (count - 1));
    }
    if (theory) {
      const MomentRow& tr = theory->at(h);
      row.beta = tr.beta;
      row.beta_std_error = tr.std_error;
      row.z = z_score(row.mean, row.std, count, tr.beta, tr.std_error);
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::vector<TrialSample> run_trials(const ExperimentConfig& c, int n, bool with_diagonal_check) {
  std::vector<TrialSample> samples(static_cast<std::size_t>(c.trials));
  parallel_for(samples.size(), [&](std::size_t t) {
    samples[t] = run_trial(c, n, static_cast<int>(t), with_diagonal_check);
  });
  return samples;
}

}  // namespace

SimulationResult cmd_simulate(const ExperimentConfig& c) {
  c.validate();
  SimulationResult result;
  result.n = c.n;
  // Theory first: a non-unit weight vector fails here before any sampling.
  result.theory = theory_for(c);
  const bool dense = c.method == SimulationMethod::Dense;
  result.trials = run_trials(c, c.n, dense);
  result.rows = summarize(result.trials, c.n, c.h_max, result.theory ? &*result.theory : nullptr);
  if (dense) {
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(c.n) * result.trials.size());
    for (const auto& t : result.trials) pooled.insert(pooled.end(), t.eigenvalues.begin(), t.eigenvalues.end());
    result.pooled_histogram = make_histogram(pooled);
  }
  if (c.out.empty()) return result;

  const auto dir = prepare_out(c);
  if (dense) {
    std::string csv = csv_header(c) + "trial,k,eigenvalue\n";
    for (std::size_t t = 0; t < result.trials.size(); ++t) {
      const auto& ev = result.trials[t].eigenvalues;
      for (std::size_t k = 0; k < ev.size(); ++k) csv += fmt::format("{},{},{}\n", t, k, g17(ev[k]));
    }
    write_text(dir / "eigenvalues.csv", csv);

    nlohmann::json hist = envelope(c);
    hist["histogram"] = to_json(*result.pooled_histogram);
    nlohmann::json means = nlohmann::json::array();
    for (const auto& r : result.rows) means.push_back({{"h", r.h}, {"mean", r.mean}});
    hist["moments"] = means;
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& t : result.trials)
      checks.push_back({{"w2_squared", t.diagonal->w2_squared}, {"bound", t.diagonal->bound}});
    hist["diagonal_checks"] = checks;
    write_text(dir / "histogram.json", hist.dump(2) + "\n");
  }
  write_text(dir / "convergence.csv", csv_header(c) + rows_csv(result.rows));
  return result;
}

MomentReport cmd_moments(const ExperimentConfig& c) {
  c.validate();
  std::span<const double> w;
  if (c.weights) w = *c.weights;
  MomentReport report = beta_sequence(c.kind, c.m, c.h_max, gamma_options(c), w);
  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    nlohmann::json j = envelope(c);
    j["report"] = to_json(report);
    write_text(dir / "moments.json", j.dump(2) + "\n");
  }
  return report;
}

bool CardinalityRow::match() const {
  if (closed_t != closed_h) return false;
  if (brute_t && *brute_t != closed_t) return false;
  if (brute_h && *brute_h != closed_h) return false;
  return true;
}

std::vector<CardinalityRow> cmd_cardinality(const ExperimentConfig& c) {
  c.validate();
  const std::uint64_t budget = c.budget ? c.budget : kDefaultEnumerationBudget;
  std::vector<CardinalityRow> rows;
  for (int p = 1; p <= c.p_max; ++p) {
    for (int m = 0; m <= c.m_max; ++m) {
      CardinalityRow row;
      row.p = p;
      row.m = m;
      row.closed_t = card_G_T(p, m);
      row.closed_h = card_G_H(p, m);
      if (c.bruteforce) {
        row.brute_t = card_G_bruteforce(p, m, false, budget);
        row.brute_h = card_G_bruteforce(p, m, true, budget);
      }
      rows.push_back(std::move(row));
    }
  }
  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    std::string csv = csv_header(c) + "p,m,closed_T,closed_H,brute_T,brute_H,match\n";
    for (const auto& r : rows) {
      csv += fmt::format("{},{},{},{},{},{},{}\n", r.p, r.m, r.closed_t.str(), r.closed_h.str(),
                         r.brute_t ? r.brute_t->str() : "", r.brute_h ? r.brute_h->str() : "",
                         r.match() ? "true" : "false");
    }
    write_text(dir / "cardinality.csv", csv);
  }
  return rows;
}

std::size_t ValidationReport::failures() const {
  std::size_t f = 0;
  for (const auto& c : cases) f += c.pass() ? 0 : 1;
  return f;
}

ValidationReport cmd_validate(const ExperimentConfig& c) {
  c.validate();
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < c.seeds; ++k) seeds.push_back(derive_seed(c.seed, static_cast<std::uint64_t>(k)));
  TraceFormulaOptions options;
  if (c.budget) options.budget = c.budget;
  options.mutate_indicator = c.mutate;
  ValidationReport report{run_validation_suite(ValidationGrid{}, seeds, options)};
  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    nlohmann::json j = envelope(c);
    j["grid"] = {{{"n_max", 6}, {"h_max", 4}}, {{"n_max", 3}, {"h_max", 6}}};
    j["cases"] = nlohmann::json::array();
    for (const auto& v : report.cases) j["cases"].push_back(to_json(v));
    j["total"] = report.cases.size();
    j["failures"] = report.failures();
    j["pass"] = report.pass();
    write_text(dir / "validate.json", j.dump(2) + "\n");
  }
  return report;
}

std::vector<ConvergencePoint> cmd_convergence(const ExperimentConfig& c) {
  c.validate();
  ExperimentConfig resolved = c;
  if (c.h > resolved.h_max) resolved.h_max = c.h;
  const auto theory = theory_for(resolved);
  const bool dense = c.method == SimulationMethod::Dense;
  std::vector<ConvergencePoint> points;
  for (int n : c.n_list) {
    ConvergencePoint point;
    point.n = n;
    const auto samples = run_trials(resolved, n, dense);
    auto rows = summarize(samples, n, resolved.h_max, theory ? &*theory : nullptr);
    for (auto& r : rows)
      if (c.h == 0 || r.h == c.h) point.rows.push_back(r);
    for (const auto& s : samples)
      if (s.diagonal) point.diagonal.push_back(*s.diagonal);
    points.push_back(std::move(point));
  }
  if (!c.out.empty()) {
    const auto dir = prepare_out(c);
    std::string csv = csv_header(c) + "n,h,trials,mean,std,variance,beta,beta_se,z,w2_sq_max,diag_bound_min,bound_violations\n";
    for (const auto& point : points) {
      std::string w2_max, bound_min, violations;
      if (!point.diagonal.empty()) {
        double wmax = 0.0, bmin = point.diagonal.front().bound;
        int bad = 0;
        for (const auto& d : point.diagonal) {
          wmax = std::max(wmax, d.w2_squared);
          bmin = std::min(bmin, d.bound);
          bad += d.holds() ? 0 : 1;
        }
        w2_max = g17(wmax);
        bound_min = g17(bmin);
        violations = std::to_string(bad);
      }
      for (const auto& r : point.rows) {
        csv += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.n, r.h, r.trials, g17(r.mean), g17(r.std),
                           g17(r.variance()), opt17(r.beta), g17(r.beta_std_error), opt17(r.z), w2_max, bound_min,
                           violations);
      }
    }
    write_text(dir / "convergence.csv", csv);
  }
  return points;
}

void write_run_record(const ExperimentConfig& c, const std::string& command) {
  if (c.out.empty()) return;
  const auto dir = prepare_out(c);
  nlohmann::json j = envelope(c);
  j["command"] = command;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  j["timestamp"] = fmt::format("{:%FT%TZ}", fmt::gmtime(now));
  write_text(dir / "run.json", j.dump(2) + "\n");
}

}  // namespace rmlab
