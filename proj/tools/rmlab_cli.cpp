// rmlab: simulate patterned random matrices and compare with their limiting moments.
//
// Exit codes: 0 success, 1 I/O or numeric failure, 2 validation mismatch,
// 3 resource limit, 4 bad arguments or unsupported theory.

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rmlab/error.hpp"
#include "rmlab/experiment.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kMismatch = 2, kResource = 3, kBadArgs = 4 };

struct Flags {
  std::string config;
  std::string kind, dist, weights, method, gamma_method, out;
  int n = 0, m = 0, trials = 0, h_max = 0, h = 0, p_max = 0, m_max = 0, seeds = 0;
  std::vector<int> n_list;
  std::uint64_t seed = 0, budget = 0;
  bool bruteforce = false, no_bruteforce = false, mutate = false, no_theory = false;
};

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      w.push_back(std::stod(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw rmlab::InvalidArgumentError("bad weight '" + token + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return w;
}

// File values first, then any flag given on the command line.
rmlab::ExperimentConfig resolve(const CLI::App& sub, const Flags& f) {
  rmlab::ExperimentConfig c = f.config.empty() ? rmlab::ExperimentConfig{} : rmlab::load_config(f.config);
  const auto given = [&](const char* name) {
    const CLI::Option* opt = sub.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--kind")) c.kind = rmlab::parse_kind(f.kind);
  if (given("--n")) c.n = f.n;
  if (given("--n-list")) c.n_list = f.n_list;
  if (given("--m")) c.m = f.m;
  if (given("--weights")) c.weights = parse_weights(f.weights);
  if (given("--dist")) c.dist = rmlab::parse_distribution(f.dist);
  if (given("--trials")) c.trials = f.trials;
  if (given("--hmax")) c.h_max = f.h_max;
  if (given("--h")) c.h = f.h;
  if (given("--seed")) c.seed = f.seed;
  if (given("--out")) c.out = f.out;
  if (given("--method")) c.method = rmlab::parse_method(f.method);
  if (given("--budget")) c.budget = f.budget;
  if (given("--gamma-method")) c.gamma_method = rmlab::parse_gamma_method(f.gamma_method);
  if (given("--no-theory")) c.theory = false;
  if (given("--pmax")) c.p_max = f.p_max;
  if (given("--mmax")) c.m_max = f.m_max;
  if (given("--bruteforce")) c.bruteforce = true;
  if (given("--no-bruteforce")) c.bruteforce = false;
  if (given("--mutate")) c.mutate = true;
  if (given("--seeds")) c.seeds = f.seeds;
  c.validate();
  return c;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--seed", f.seed, "root seed");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--budget", f.budget, "gamma samples or grid side, or enumeration cap");
}

void add_ensemble(CLI::App* sub, Flags& f) {
  sub->add_option("--kind", f.kind, "toeplitz or hankel");
  sub->add_option("--m", f.m, "moving-average order");
  sub->add_option("--weights", f.weights, "comma-separated c_{-m}..c_m");
  sub->add_option("--hmax", f.h_max, "largest moment order");
  sub->add_option("--gamma-method", f.gamma_method, "mc or grid");
  sub->add_flag("--no-theory", f.no_theory, "skip the limiting-moment comparison");
}

void add_sampling(CLI::App* sub, Flags& f) {
  sub->add_option("--dist", f.dist, "normal, rademacher or uniform");
  sub->add_option("--trials", f.trials, "independent draws");
  sub->add_option("--method", f.method, "dense or fast");
}

void print_rows(const std::vector<rmlab::ConvergenceRow>& rows) {
  for (const auto& r : rows) {
    std::cout << fmt::format("n={} h={} mean={:.6g} std={:.3g}", r.n, r.h, r.mean, r.std);
    if (r.beta) std::cout << fmt::format(" beta={:.6g}", *r.beta);
    if (r.z) std::cout << fmt::format(" z={:.3f}", *r.z);
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of Toeplitz and Hankel matrices with moving-average entries"};
  app.set_version_flag("--version", std::string(rmlab::version_string()));
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "sample matrices, write spectra and moment table");
  add_common(simulate, f);
  add_ensemble(simulate, f);
  add_sampling(simulate, f);
  simulate->add_option("--n", f.n, "matrix size");

  auto* moments = app.add_subcommand("moments", "limiting moments beta_h");
  add_common(moments, f);
  add_ensemble(moments, f);

  auto* cardinality = app.add_subcommand("cardinality", "closed-form and brute-force #G table");
  add_common(cardinality, f);
  cardinality->add_option("--pmax", f.p_max, "largest p");
  cardinality->add_option("--mmax", f.m_max, "largest m");
  cardinality->add_flag("--bruteforce", f.bruteforce, "enumerate offset vectors (default on)");
  cardinality->add_flag("--no-bruteforce", f.no_bruteforce, "closed form only");

  auto* validate = app.add_subcommand("validate", "exact trace-formula checks");
  add_common(validate, f);
  validate->add_option("--seeds", f.seeds, "random inputs per (kind, n, h)");
  validate->add_flag("--mutate", f.mutate, "inject an off-by-one in the indicator");

  auto* convergence = app.add_subcommand("convergence", "moment statistics over increasing n");
  add_common(convergence, f);
  add_ensemble(convergence, f);
  add_sampling(convergence, f);
  convergence->add_option("--n-list", f.n_list, "ascending sizes")->delimiter(',');
  convergence->set_help_flag("--help", "print this help message and exit");
  convergence->add_option("--h", f.h, "single moment order (0: all up to hmax)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadArgs;
  }

  try {
    if (*simulate) {
      const auto c = resolve(*simulate, f);
      rmlab::write_run_record(c, "simulate");
      print_rows(rmlab::cmd_simulate(c).rows);
    } else if (*moments) {
      const auto c = resolve(*moments, f);
      rmlab::write_run_record(c, "moments");
      const auto report = rmlab::cmd_moments(c);
      for (const auto& row : report.rows)
        std::cout << fmt::format("h={} beta={:.10g} se={:.3g} card={}\n", row.h, row.beta, row.std_error,
                                 row.cardinality.str());
    } else if (*cardinality) {
      const auto c = resolve(*cardinality, f);
      rmlab::write_run_record(c, "cardinality");
      bool all = true;
      for (const auto& row : rmlab::cmd_cardinality(c)) {
        std::cout << fmt::format("p={} m={} T={} H={}{}\n", row.p, row.m, row.closed_t.str(), row.closed_h.str(),
                                 row.brute_t ? fmt::format(" brute={}/{}", row.brute_t->str(), row.brute_h->str()) : "");
        all = all && row.match();
      }
      if (!all) return kMismatch;
    } else if (*validate) {
      const auto c = resolve(*validate, f);
      rmlab::write_run_record(c, "validate");
      const auto report = rmlab::cmd_validate(c);
      std::cout << fmt::format("{} cases, {} failures\n", report.cases.size(), report.failures());
      if (!report.pass()) return kMismatch;
    } else if (*convergence) {
      const auto c = resolve(*convergence, f);
      rmlab::write_run_record(c, "convergence");
      for (const auto& point : rmlab::cmd_convergence(c)) print_rows(point.rows);
    }
  } catch (const rmlab::Error& e) {
    std::cerr << "error (" << rmlab::to_string(e.code()) << "): " << e.what() << '\n';
    switch (e.code()) {
      case rmlab::ErrorCode::ResourceLimit:
        return kResource;
      case rmlab::ErrorCode::InvalidArgument:
      case rmlab::ErrorCode::InvalidRange:
      case rmlab::ErrorCode::UnsupportedTheory:
        return kBadArgs;
      default:
        return kFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
