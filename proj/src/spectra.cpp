#include "rmlab/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <string>

#include "rmlab/error.hpp"
#include "rmlab/rng.hpp"

namespace rmlab {

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double EsdSummary::cdf(double x) const {
  const auto it = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), x);
  return static_cast<double>(it - eigenvalues.begin()) / static_cast<double>(n);
}

double EsdSummary::mass_within(double lo, double hi) const {
  const auto first = std::lower_bound(eigenvalues.begin(), eigenvalues.end(), lo);
  const auto last = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), hi);
  return static_cast<double>(std::max<std::ptrdiff_t>(0, last - first)) / static_cast<double>(n);
}

double EsdSummary::moment(int h) const {
  if (h < 0 || h >= static_cast<int>(empirical_moments.size())) {
    throw InvalidArgumentError("moment " + std::to_string(h) + " not stored in summary");
  }
  return empirical_moments[static_cast<std::size_t>(h)];
}

Histogram make_histogram(std::span<const double> values, int bins) {
  if (bins < 1) throw InvalidArgumentError("histogram needs at least one bin");
  if (values.empty()) throw InvalidArgumentError("histogram of an empty sample");
  const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *min_it - kHistogramPadding;
  const double hi = *max_it + kHistogramPadding;
  const double width = (hi - lo) / bins;
  Histogram h;
  h.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + width * b;
  h.edges.back() = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    auto b = static_cast<long>((v - lo) / width);
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  return h;
}

double power_sum_moment(std::span<const double> eigenvalues, int h) {
  if (h == 0) return 1.0;
  double acc = 0.0;
  for (double l : eigenvalues) acc += std::pow(l, h);
  return acc / static_cast<double>(eigenvalues.size());
}

EsdSummary esd(std::vector<double> eigenvalues, int bins, int h_max) {
  if (eigenvalues.empty()) throw InvalidArgumentError("esd of an empty spectrum");
  if (bins < 1) throw InvalidArgumentError("esd needs at least one histogram bin");
  std::sort(eigenvalues.begin(), eigenvalues.end());
  EsdSummary s;
  s.n = static_cast<int>(eigenvalues.size());
  s.histogram = make_histogram(eigenvalues, bins);
  s.empirical_moments.resize(static_cast<std::size_t>(std::max(h_max, 0)) + 1);
  for (int h = 0; h <= h_max; ++h) s.empirical_moments[static_cast<std::size_t>(h)] = power_sum_moment(eigenvalues, h);
  s.eigenvalues = std::move(eigenvalues);
  return s;
}

namespace {

void require_finite(const Eigen::MatrixXd& m) {
  if (!m.allFinite()) throw NumericInputError("matrix has non-finite entries");
}

}  // namespace

std::vector<double> eigenvalues_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) throw InvalidArgumentError("eigenvalues need a nonempty square matrix");
  require_finite(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericInputError("symmetric eigensolver did not converge");
  const Eigen::VectorXd& values = solver.eigenvalues();
  return std::vector<double>(values.data(), values.data() + values.size());
}

std::vector<double> eigenvalues_symmetric(const PatternedMatrix& m) { return eigenvalues_symmetric(m.entries()); }

EigenPairs symmetric_eigenpairs(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() < 1) throw InvalidArgumentError("eigenpairs need a nonempty square matrix");
  require_finite(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericInputError("symmetric eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double empirical_moment(const PatternedMatrix& m, int h, MomentPath path) {
  if (h < 0) throw InvalidArgumentError("moment order must be nonnegative");
  if (h == 0) return 1.0;
  const double n = m.n();
  if (path == MomentPath::EigenPowerSum) return power_sum_moment(eigenvalues_symmetric(m), h);
  require_finite(m.entries());
  // Tr(M^h) = sum_ij (M^a)_ij (M^b)_ij with a + b = h, both powers symmetric.
  const int a = h / 2;
  const int b = h - a;
  Eigen::MatrixXd low = Eigen::MatrixXd::Identity(m.n(), m.n());
  for (int k = 0; k < a; ++k) low = low * m.entries();
  Eigen::MatrixXd high = low;
  if (b > a) high = low * m.entries();
  return (low.array() * high.array()).sum() / n;
}

// --- fast structured products -------------------------------------------------

namespace {

std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : data(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(data); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* data;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(data); }
  ComplexBuffer(const ComplexBuffer&) = delete;
  ComplexBuffer& operator=(const ComplexBuffer&) = delete;
  fftw_complex* data;
};

std::size_t embedding_length_for(int n) {
  std::size_t length = 1;
  while (length < 2 * static_cast<std::size_t>(n)) length <<= 1;
  return length;
}

}  // namespace

struct StructuredOperator::Plans {
  explicit Plans(std::size_t length) {
    std::scoped_lock lock(planner_mutex());
    RealBuffer real(length);
    ComplexBuffer spectrum(length / 2 + 1);
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(length), real.data, spectrum.data, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(length), spectrum.data, real.data, FFTW_ESTIMATE);
  }
  ~Plans() {
    std::scoped_lock lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  fftw_plan forward;
  fftw_plan backward;
};

StructuredOperator::StructuredOperator(MatrixKind kind, int n, std::vector<double> diagonals)
    : kind_(kind), n_(n), length_(embedding_length_for(n)), plans_(std::make_unique<Plans>(length_)) {
  RealBuffer circulant(length_);
  std::fill(circulant.data, circulant.data + length_, 0.0);
  const auto t = [&](int d) { return diagonals[static_cast<std::size_t>(d + n - 1)]; };
  for (int r = 0; r < n; ++r) circulant.data[r] = t(r);
  for (int r = 1; r < n; ++r) circulant.data[length_ - static_cast<std::size_t>(r)] = t(-r);
  ComplexBuffer out(length_ / 2 + 1);
  fftw_execute_dft_r2c(plans_->forward, circulant.data, out.data);
  spectrum_.resize(length_ / 2 + 1);
  const double inverse_length = 1.0 / static_cast<double>(length_);
  for (std::size_t k = 0; k < spectrum_.size(); ++k) {
    spectrum_[k] = std::complex<double>(out.data[k][0], out.data[k][1]) * inverse_length;
  }
}

StructuredOperator::StructuredOperator(StructuredOperator&&) noexcept = default;
StructuredOperator& StructuredOperator::operator=(StructuredOperator&&) noexcept = default;
StructuredOperator::~StructuredOperator() = default;

StructuredOperator StructuredOperator::from_sequence(MatrixKind kind, int n, const EntrySequence& y) {
  if (n < 1) throw InvalidArgumentError("operator size must be positive");
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> diagonals(static_cast<std::size_t>(2 * n - 1));
  for (int d = -(n - 1); d <= n - 1; ++d) {
    const long index = kind == MatrixKind::Toeplitz ? std::abs(d) : -d;
    diagonals[static_cast<std::size_t>(d + n - 1)] = y.at(index) * scale;
  }
  return StructuredOperator(kind, n, std::move(diagonals));
}

StructuredOperator StructuredOperator::from_matrix(const PatternedMatrix& m) {
  if (m.kind() == MatrixKind::Hankel && m.diagonal_zeroed()) {
    throw InvalidArgumentError("a Hankel matrix with zeroed diagonal has no Toeplitz embedding");
  }
  const int n = m.n();
  std::vector<double> diagonals(static_cast<std::size_t>(2 * n - 1));
  for (int d = 0; d < n; ++d) {
    if (m.kind() == MatrixKind::Toeplitz) {
      diagonals[static_cast<std::size_t>(d + n - 1)] = m(d, 0);
      diagonals[static_cast<std::size_t>(n - 1 - d)] = m(0, d);
    } else {
      diagonals[static_cast<std::size_t>(d + n - 1)] = m(d, n - 1);
      diagonals[static_cast<std::size_t>(n - 1 - d)] = m(0, n - 1 - d);
    }
  }
  return StructuredOperator(m.kind(), n, std::move(diagonals));
}

std::vector<double> StructuredOperator::apply(std::span<const double> v) const {
  if (v.size() != static_cast<std::size_t>(n_)) {
    throw InvalidArgumentError("operator of size " + std::to_string(n_) + " applied to vector of length " +
                               std::to_string(v.size()));
  }
  RealBuffer work(length_);
  ComplexBuffer freq(length_ / 2 + 1);
  std::fill(work.data, work.data + length_, 0.0);
  if (kind_ == MatrixKind::Toeplitz) {
    std::copy(v.begin(), v.end(), work.data);
  } else {
    std::reverse_copy(v.begin(), v.end(), work.data);
  }
  fftw_execute_dft_r2c(plans_->forward, work.data, freq.data);
  for (std::size_t k = 0; k < spectrum_.size(); ++k) {
    const std::complex<double> x(freq.data[k][0], freq.data[k][1]);
    const std::complex<double> y = x * spectrum_[k];
    freq.data[k][0] = y.real();
    freq.data[k][1] = y.imag();
  }
  fftw_execute_dft_c2r(plans_->backward, freq.data, work.data);
  return std::vector<double>(work.data, work.data + n_);
}

std::vector<double> fast_matvec(const StructuredOperator& op, std::span<const double> v) { return op.apply(v); }

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// <M^a z, M^b z> for every a + b = h in [1, h_max], accumulated into sums[h].
void accumulate_quadratic_forms(const StructuredOperator& op, std::vector<double> z, int h_max,
                                std::vector<double>& sums) {
  const int depth = (h_max + 1) / 2;
  std::vector<std::vector<double>> powers;
  powers.reserve(static_cast<std::size_t>(depth) + 1);
  powers.push_back(std::move(z));
  for (int k = 1; k <= depth; ++k) powers.push_back(op.apply(powers.back()));
  for (int h = 1; h <= h_max; ++h) {
    const int a = h / 2;
    sums[static_cast<std::size_t>(h)] += dot(powers[static_cast<std::size_t>(a)],
                                              powers[static_cast<std::size_t>(h - a)]);
  }
}

}  // namespace

std::vector<double> structured_moments(const StructuredOperator& op, int h_max) {
  if (h_max < 1) throw InvalidArgumentError("structured_moments needs h_max >= 1");
  const int n = op.size();
  std::vector<double> sums(static_cast<std::size_t>(h_max) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(i)] = 1.0;
    accumulate_quadratic_forms(op, std::move(e), h_max, sums);
  }
  sums[0] = n;
  for (double& s : sums) s /= n;
  return sums;
}

TraceEstimate hutchinson_moment(const StructuredOperator& op, int h, int probes, std::uint64_t seed) {
  if (probes < 8) throw InvalidArgumentError("Hutchinson estimator needs at least 8 probes");
  if (h < 1) throw InvalidArgumentError("Hutchinson estimator needs h >= 1");
  const int n = op.size();
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(probes));
  for (int k = 0; k < probes; ++k) {
    Engine engine(derive_seed(seed, static_cast<std::uint64_t>(k)));
    std::vector<double> z(static_cast<std::size_t>(n));
    for (double& v : z) v = (engine() >> 63) ? 1.0 : -1.0;
    std::vector<double> sums(static_cast<std::size_t>(h) + 1, 0.0);
    accumulate_quadratic_forms(op, std::move(z), h, sums);
    samples.push_back(sums[static_cast<std::size_t>(h)] / n);
  }
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / probes;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  return {mean, std::sqrt(ss / (probes - 1) / probes), probes};
}

double w2_distance(const EsdSummary& a, const EsdSummary& b) {
  if (a.eigenvalues.empty() || b.eigenvalues.empty()) throw InvalidArgumentError("w2 of an empty spectrum");
  const auto& x = a.eigenvalues;
  const auto& y = b.eigenvalues;
  double acc = 0.0;
  if (x.size() == y.size()) {
    for (std::size_t k = 0; k < x.size(); ++k) acc += (x[k] - y[k]) * (x[k] - y[k]);
    return std::sqrt(acc / static_cast<double>(x.size()));
  }
  // Piecewise-constant quantile functions sampled at midpoints of a grid with
  // 4 max(n_a, n_b) cells.
  const std::size_t grid = 4 * std::max(x.size(), y.size());
  const auto quantile = [](const std::vector<double>& v, double u) {
    const auto k = static_cast<std::size_t>(u * static_cast<double>(v.size()));
    return v[std::min(k, v.size() - 1)];
  };
  for (std::size_t k = 0; k < grid; ++k) {
    const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
    const double d = quantile(x, u) - quantile(y, u);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(grid));
}

PatternedMatrix zero_diagonal(const PatternedMatrix& m) {
  Eigen::MatrixXd entries = m.entries();
  entries.diagonal().setZero();
  return PatternedMatrix(m.kind(), std::move(entries), m.source_ptr(), true);
}

double diagonal_energy(const PatternedMatrix& m) {
  return m.entries().diagonal().squaredNorm() / static_cast<double>(m.n());
}

nlohmann::json to_json(const Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

}  // namespace rmlab
