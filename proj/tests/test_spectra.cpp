#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rmlab/error.hpp"
#include "rmlab/rng.hpp"
#include "rmlab/spectra.hpp"
#include "rmlab/trace_validate.hpp"

using namespace rmlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PatternedMatrix sample(MatrixKind kind, int n, int m, std::uint64_t seed,
                       EntryDistribution dist = EntryDistribution::StandardNormal) {
  return sample_matrix(kind, n, MovingAverageProcess::unit(m, dist, seed));
}

std::vector<double> random_vector(int n, std::uint64_t seed) {
  Engine e(seed);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = uniform(e, -1.0, 1.0);
  return v;
}

double dense_moment(const Eigen::MatrixXd& a, int h) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  for (int k = 0; k < h; ++k) p = p * a;
  return p.trace() / static_cast<double>(a.rows());
}

}  // namespace

TEST_CASE("eigenvalues of tiny matrices", "[spectra]") {
  SECTION("1 x 1") {
    const auto m = build_toeplitz(EntrySequence(0, {2.5}), 1);
    CHECK(eigenvalues_symmetric(m) == std::vector<double>{2.5});
  }
  SECTION("2 x 2 closed form") {
    const double a = 1.0, b = 3.0;
    const auto m = build_toeplitz(EntrySequence(0, {a, b}), 2);
    const auto ev = eigenvalues_symmetric(m);
    REQUIRE(ev.size() == 2);
    CHECK_THAT(ev[0], WithinAbs((a - b) / std::sqrt(2.0), 1e-14));
    CHECK_THAT(ev[1], WithinAbs((a + b) / std::sqrt(2.0), 1e-14));
  }
}

TEST_CASE("eigenvalues are sorted and sum to the trace", "[spectra]") {
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel})
    for (int n : {3, 17, 120}) {
      const auto m = sample(kind, n, 1, 40 + n);
      const auto ev = eigenvalues_symmetric(m);
      REQUIRE(ev.size() == static_cast<std::size_t>(n));
      CHECK(std::is_sorted(ev.begin(), ev.end()));
      const double trace = m.entries().trace();
      const double sum = std::accumulate(ev.begin(), ev.end(), 0.0);
      CHECK(std::abs(sum - trace) <= 1e-9 * (1 + std::abs(trace)));
    }
}

TEST_CASE("eigenpair residuals", "[spectra]") {
  const auto m = sample(MatrixKind::Hankel, 150, 2, 5);
  const auto pairs = symmetric_eigenpairs(m.entries());
  const double norm = m.entries().norm();
  for (int k : {0, 37, 149}) {
    const Eigen::VectorXd v = pairs.vectors.col(k);
    CHECK((m.entries() * v - pairs.values(k) * v).norm() <= 1e-8 * norm);
  }
  const auto ev = eigenvalues_symmetric(m);
  for (int k = 0; k < 150; ++k) CHECK(pairs.values(k) == ev[static_cast<std::size_t>(k)]);
}

TEST_CASE("non-finite entries are rejected", "[spectra]") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(3, 3);
  a(1, 2) = a(2, 1) = std::nan("");
  CHECK_THROWS_AS(eigenvalues_symmetric(a), NumericInputError);
  a(1, 2) = a(2, 1) = INFINITY;
  CHECK_THROWS_AS(symmetric_eigenpairs(a), NumericInputError);
  const auto bad = build_toeplitz(EntrySequence(0, {1.0, std::nan("")}), 2);
  CHECK_THROWS_AS(eigenvalues_symmetric(bad), NumericInputError);
}

TEST_CASE("esd step function", "[spectra]") {
  const auto e = esd({1.0, -1.0});
  CHECK(e.n == 2);
  CHECK(e.eigenvalues == std::vector<double>{-1.0, 1.0});
  CHECK(e.cdf(-1.5) == 0.0);
  CHECK(e.cdf(-1.0) == 0.5);
  CHECK(e.cdf(0.0) == 0.5);
  CHECK(e.cdf(1.0) == 1.0);
  CHECK(e.histogram.total() == 2);
  CHECK(e.histogram.edges.size() == static_cast<std::size_t>(kDefaultHistogramBins) + 1);
  CHECK(e.histogram.edges.front() == -1.0 - kHistogramPadding);
  CHECK(e.histogram.edges.back() == 1.0 + kHistogramPadding);
}

TEST_CASE("symmetric spectrum has vanishing odd moments", "[spectra]") {
  const auto e = esd({-3.0, -0.5, 0.0, 0.5, 3.0}, 10, 7);
  for (int h : {1, 3, 5, 7}) CHECK(e.moment(h) == 0.0);
  CHECK(e.moment(0) == 1.0);
  CHECK_THAT(e.moment(2), WithinAbs((9 + 0.25 + 0.25 + 9) / 5.0, 1e-15));
  CHECK_THROWS_AS(e.moment(8), InvalidArgumentError);
}

TEST_CASE("esd argument checks", "[spectra]") {
  CHECK_THROWS_AS(esd({}), InvalidArgumentError);
  CHECK_THROWS_AS(esd({1.0}, 0), InvalidArgumentError);
  CHECK_THROWS_AS(make_histogram(std::vector<double>{}), InvalidArgumentError);
  const auto single = esd({4.0}, 3);
  CHECK(single.histogram.total() == 1);
}

TEST_CASE("histogram counts every eigenvalue", "[spectra]") {
  const auto m = sample(MatrixKind::Toeplitz, 200, 0, 8);
  for (int bins : {1, 7, 101}) {
    const auto e = esd(eigenvalues_symmetric(m), bins);
    CHECK(e.histogram.total() == 200);
    CHECK(e.histogram.counts.size() == static_cast<std::size_t>(bins));
    CHECK(std::is_sorted(e.histogram.edges.begin(), e.histogram.edges.end()));
    CHECK(e.moment(2) >= 0.0);
  }
}

TEST_CASE("Toeplitz n = 2000 spectrum sits inside [-6, 6]", "[spectra][statistical]") {
  const auto e = esd(eigenvalues_symmetric(sample(MatrixKind::Toeplitz, 2000, 0, 2024)));
  CHECK(e.mass_within(-6.0, 6.0) >= 0.999);
}

TEST_CASE("moment paths agree", "[spectra]") {
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel})
    for (int n : {16, 128}) {
      const auto m = sample(kind, n, 1, 300 + n);
      CHECK(empirical_moment(m, 0, MomentPath::EigenPowerSum) == 1.0);
      CHECK(empirical_moment(m, 0, MomentPath::DensePowerTrace) == 1.0);
      CHECK_THAT(empirical_moment(m, 1, MomentPath::DensePowerTrace), WithinAbs(m.entries().trace() / n, 1e-15));
      CHECK_THAT(empirical_moment(m, 2, MomentPath::DensePowerTrace),
                 WithinRel(m.entries().squaredNorm() / n, 1e-12));
      for (int h = 1; h <= 8; ++h) {
        const double eig = empirical_moment(m, h, MomentPath::EigenPowerSum);
        const double dense = empirical_moment(m, h, MomentPath::DensePowerTrace);
        const double scale = empirical_moment(m, 2 * ((h + 1) / 2), MomentPath::EigenPowerSum);
        CHECK(std::abs(eig - dense) <= 1e-8 * std::max(std::abs(dense), scale));
      }
    }
  CHECK_THROWS_AS(empirical_moment(sample(MatrixKind::Toeplitz, 4, 0, 1), -1, MomentPath::EigenPowerSum),
                  InvalidArgumentError);
}

TEST_CASE("dense power trace is exact on an integer matrix", "[spectra]") {
  // Unscaled integer Toeplitz matrix: double arithmetic is exact at this size.
  const auto x = random_integer_inputs(5, 3, 12345);
  Eigen::MatrixXd a(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a(i, j) = static_cast<double>(x[static_cast<std::size_t>(std::abs(i - j))]);
  const PatternedMatrix m(MatrixKind::Toeplitz, a, nullptr);
  const auto exact = dense_toeplitz(x, 5);
  for (int h = 1; h <= 6; ++h) {
    const Rational trace = dense_power_trace(exact, h);
    CHECK(Rational(empirical_moment(m, h, MomentPath::DensePowerTrace) * 5) == trace);
    CHECK_THAT(empirical_moment(m, h, MomentPath::EigenPowerSum),
               WithinRel(static_cast<double>(trace) / 5, 1e-9) || WithinAbs(0.0, 1e-9));
  }
}

TEST_CASE("fast matvec reproduces the dense product", "[spectra]") {
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel})
    for (int n : {1, 2, 7, 64, 512}) {
      CAPTURE(to_string(kind), n);
      const auto m = sample(kind, n, 2, 900 + n);
      const auto op = StructuredOperator::from_matrix(m);
      CHECK(op.size() == n);
      CHECK(op.embedding_length() >= static_cast<std::size_t>(2 * n));
      // basis vectors give the columns
      for (int k : {0, n / 2, n - 1}) {
        std::vector<double> e(static_cast<std::size_t>(n), 0.0);
        e[static_cast<std::size_t>(k)] = 1.0;
        const auto col = fast_matvec(op, e);
        for (int i = 0; i < n; ++i) CHECK(std::abs(col[static_cast<std::size_t>(i)] - m(i, k)) <= 1e-10);
      }
      const auto v = random_vector(n, 11 * n);
      const Eigen::VectorXd dense = m.entries() * Eigen::Map<const Eigen::VectorXd>(v.data(), n);
      const auto fast = fast_matvec(op, v);
      double worst = 0.0;
      for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(fast[static_cast<std::size_t>(i)] - dense(i)));
      CHECK(worst < 1e-10);
      const auto zero = fast_matvec(op, std::vector<double>(static_cast<std::size_t>(n), 0.0));
      for (double z : zero) CHECK(std::abs(z) <= 1e-300);
    }
}

TEST_CASE("operator from the sequence matches the operator from the matrix", "[spectra]") {
  const int n = 33;
  const auto process = MovingAverageProcess::unit(1, EntryDistribution::Rademacher, 6);
  const auto y = sample_entries(process, n);
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel}) {
    const auto a = StructuredOperator::from_sequence(kind, n, y);
    const auto b = StructuredOperator::from_matrix(sample_matrix(kind, n, process));
    const auto v = random_vector(n, 3);
    const auto fa = a.apply(v), fb = b.apply(v);
    for (int i = 0; i < n; ++i) CHECK_THAT(fa[static_cast<std::size_t>(i)], WithinAbs(fb[static_cast<std::size_t>(i)], 1e-12));
  }
}

TEST_CASE("operator argument checks", "[spectra]") {
  const auto m = sample(MatrixKind::Toeplitz, 8, 0, 1);
  const auto op = StructuredOperator::from_matrix(m);
  CHECK_THROWS_AS(op.apply(std::vector<double>(7)), InvalidArgumentError);
  CHECK_THROWS_AS(StructuredOperator::from_sequence(MatrixKind::Hankel, 0, EntrySequence(0, {1.0})),
                  InvalidArgumentError);
  CHECK_THROWS_AS(StructuredOperator::from_matrix(zero_diagonal(sample(MatrixKind::Hankel, 8, 0, 1))),
                  InvalidArgumentError);
  // a zeroed Toeplitz diagonal is still Toeplitz
  const auto hollow = zero_diagonal(m);
  const auto hop = StructuredOperator::from_matrix(hollow);
  std::vector<double> e0(8, 0.0);
  e0[0] = 1.0;
  CHECK(std::abs(hop.apply(e0)[0]) < 1e-15);
}

TEST_CASE("structured moments are exact", "[spectra]") {
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel})
    for (int n : {1, 5, 100, 257}) {
      CAPTURE(to_string(kind), n);
      const auto m = sample(kind, n, 1, 70 + n);
      const auto fast = structured_moments(StructuredOperator::from_matrix(m), 8);
      REQUIRE(fast.size() == 9);
      CHECK(fast[0] == 1.0);
      for (int h = 1; h <= 8; ++h) {
        const double dense = dense_moment(m.entries(), h);
        const double scale = dense_moment(m.entries(), 2 * ((h + 1) / 2));
        CHECK(std::abs(fast[static_cast<std::size_t>(h)] - dense) <= 1e-9 * std::max(std::abs(dense), scale));
      }
    }
  CHECK_THROWS_AS(structured_moments(StructuredOperator::from_matrix(sample(MatrixKind::Toeplitz, 3, 0, 1)), 0),
                  InvalidArgumentError);
}

TEST_CASE("hutchinson at h = 2 and 4", "[spectra][statistical]") {
  const int n = 256;
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel}) {
    const auto m = sample(kind, n, 1, 4242);
    const auto op = StructuredOperator::from_matrix(m);
    for (int h : {2, 4}) {
      const auto est = hutchinson_moment(op, h, 64, 17);
      const double exact = empirical_moment(m, h, MomentPath::DensePowerTrace);
      CHECK(est.probes == 64);
      CHECK(est.std_error > 0);
      CHECK(std::abs(est.estimate - exact) <= 4 * est.std_error);
    }
  }
}

TEST_CASE("hutchinson is unbiased over independent runs", "[spectra][statistical]") {
  const auto m = sample(MatrixKind::Toeplitz, 64, 1, 99);
  const auto op = StructuredOperator::from_matrix(m);
  const double exact = empirical_moment(m, 2, MomentPath::DensePowerTrace);
  double sum = 0.0, var_sum = 0.0;
  const int runs = 200;
  for (int r = 0; r < runs; ++r) {
    const auto est = hutchinson_moment(op, 2, 8, derive_seed(5, r));
    sum += est.estimate;
    var_sum += est.std_error * est.std_error;
  }
  const double pooled_se = std::sqrt(var_sum) / runs;
  CHECK(std::abs(sum / runs - exact) <= 3 * pooled_se);
}

TEST_CASE("doubling probes shrinks the error by about 1/sqrt2", "[spectra][statistical]") {
  const auto m = sample(MatrixKind::Hankel, 128, 0, 31);
  const auto op = StructuredOperator::from_matrix(m);
  double ratio_sum = 0.0;
  const int reps = 20;
  for (int r = 0; r < reps; ++r) {
    const double a = hutchinson_moment(op, 4, 64, derive_seed(1, r)).std_error;
    const double b = hutchinson_moment(op, 4, 128, derive_seed(2, r)).std_error;
    ratio_sum += b / a;
  }
  CHECK_THAT(ratio_sum / reps, WithinRel(1 / std::sqrt(2.0), 0.3));
}

TEST_CASE("hutchinson argument checks", "[spectra]") {
  const auto op = StructuredOperator::from_matrix(sample(MatrixKind::Toeplitz, 10, 0, 1));
  CHECK_THROWS_AS(hutchinson_moment(op, 2, 7, 1), InvalidArgumentError);
  CHECK_THROWS_AS(hutchinson_moment(op, 0, 8, 1), InvalidArgumentError);
  const auto a = hutchinson_moment(op, 2, 8, 3), b = hutchinson_moment(op, 2, 8, 3);
  CHECK(a.estimate == b.estimate);
}

TEST_CASE("w2 basics", "[spectra]") {
  const auto a = esd({-1.0, 0.5, 2.0});
  CHECK(w2_distance(a, a) == 0.0);
  const auto zero = esd({0.0});
  const auto c = esd({-2.5});
  CHECK_THAT(w2_distance(zero, c), WithinAbs(2.5, 1e-15));
  // translation of an equal-size spectrum
  const auto shifted = esd({0.0, 1.5, 3.0});
  CHECK_THAT(w2_distance(a, shifted), WithinAbs(1.0, 1e-15));
  CHECK_THAT(w2_distance(a, shifted), WithinAbs(w2_distance(shifted, a), 1e-15));
}

TEST_CASE("w2 with unequal sizes", "[spectra]") {
  const auto a = esd({0.0, 1.0});
  const auto b = esd({0.0, 0.0, 1.0, 1.0});  // same distribution
  CHECK_THAT(w2_distance(a, b), WithinAbs(0.0, 1e-15));
  const auto c = esd({0.0, 1.0, 2.0});
  // quantiles differ by 1 on (1/3, 1/2) and (2/3, 1)
  CHECK_THAT(w2_distance(a, c), WithinAbs(std::sqrt(0.5), 1e-12));
}

TEST_CASE("zero diagonal", "[spectra]") {
  const auto m = sample(MatrixKind::Toeplitz, 30, 1, 8);
  const auto z = zero_diagonal(m);
  CHECK(z.diagonal_zeroed());
  for (int i = 0; i < 30; ++i) {
    CHECK(z(i, i) == 0.0);
    for (int j = 0; j < 30; ++j)
      if (i != j) CHECK(z(i, j) == m(i, j));
  }
  double energy = 0.0;
  for (int i = 0; i < 30; ++i) energy += m(i, i) * m(i, i);
  CHECK_THAT(diagonal_energy(m), WithinRel(energy / 30, 1e-14));
}

TEST_CASE("zeroing the diagonal moves the spectrum by at most its energy", "[spectra]") {
  for (auto kind : {MatrixKind::Toeplitz, MatrixKind::Hankel})
    for (int m : {0, 2})
      for (int n : {10, 100, 400}) {
        const auto a = sample(kind, n, m, 1000 + n + m);
        const auto ea = esd(eigenvalues_symmetric(a));
        const auto ez = esd(eigenvalues_symmetric(zero_diagonal(a)));
        const double w2 = w2_distance(ea, ez);
        CHECK(w2 * w2 <= diagonal_energy(a) + 1e-10);
      }
}

namespace {

int odd_moment_passes(MatrixKind kind, int n, int trials) {
  int ok = 0;
  for (int t = 0; t < trials; ++t) {
    const auto y = sample_entries(MovingAverageProcess::unit(0, EntryDistribution::StandardNormal, derive_seed(777, t)), n);
    const auto mom = structured_moments(StructuredOperator::from_sequence(kind, n, y), 3);
    ok += std::abs(mom[3]) <= 0.1 * std::pow(mom[2], 1.5) ? 1 : 0;
  }
  return ok;
}

}  // namespace

TEST_CASE("Hankel odd moments are small at n = 1000", "[spectra][statistical]") {
  CHECK(odd_moment_passes(MatrixKind::Hankel, 1000, 20) >= 19);
}

// The Toeplitz diagonal is c I with c = Y_0/sqrt(n), so beta_3 carries 3 c beta_2,
// of order 3/sqrt(n). At n = 1000 that alone exceeds 0.1 beta_2^{3/2} in about
// 29% of draws. Kept as a known-failing check.
TEST_CASE("Toeplitz odd moments are small at n = 1000", "[spectra][statistical][!mayfail]") {
  CHECK(odd_moment_passes(MatrixKind::Toeplitz, 1000, 20) >= 19);
}

TEST_CASE("Toeplitz third moment splits into hollow part and diagonal shift", "[spectra]") {
  const int n = 1000;
  const auto y = sample_entries(MovingAverageProcess::unit(0, EntryDistribution::StandardNormal, 4), n);
  const auto full = structured_moments(StructuredOperator::from_sequence(MatrixKind::Toeplitz, n, y), 3);
  std::vector<double> v(y.values().begin(), y.values().end());
  v[static_cast<std::size_t>(-y.lo())] = 0.0;
  const auto hollow = structured_moments(StructuredOperator::from_sequence(MatrixKind::Toeplitz, n, EntrySequence(y.lo(), v)), 3);
  const double c = y[0] / std::sqrt(double(n));
  CHECK_THAT(hollow[1], WithinAbs(0.0, 1e-12));
  CHECK_THAT(full[2], WithinAbs(hollow[2] + c * c, 1e-10));
  CHECK_THAT(full[3], WithinAbs(hollow[3] + 3 * c * hollow[2] + c * c * c, 1e-10));
}

TEST_CASE("histogram JSON", "[spectra]") {
  const auto h = make_histogram(std::vector<double>{0.0, 1.0, 1.0}, 2);
  const auto j = to_json(h);
  CHECK(j.at("edges").size() == 3);
  CHECK(j.at("counts") == nlohmann::json({1, 2}));
}
