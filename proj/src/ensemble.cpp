#include "rmlab/ensemble.hpp"

#include <cmath>
#include <string>

#include "rmlab/error.hpp"

namespace rmlab {

std::string_view to_string(EntryDistribution dist) {
  switch (dist) {
    case EntryDistribution::StandardNormal: return "normal";
    case EntryDistribution::Rademacher: return "rademacher";
    case EntryDistribution::UniformSym: return "uniform";
  }
  return "normal";
}

EntryDistribution parse_distribution(std::string_view name) {
  if (name == "normal" || name == "StandardNormal" || name == "gaussian") return EntryDistribution::StandardNormal;
  if (name == "rademacher" || name == "Rademacher") return EntryDistribution::Rademacher;
  if (name == "uniform" || name == "UniformSym") return EntryDistribution::UniformSym;
  throw InvalidArgumentError("unknown distribution '" + std::string(name) + "'");
}

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::Toeplitz ? "toeplitz" : "hankel";
}

MatrixKind parse_kind(std::string_view name) {
  if (name == "toeplitz" || name == "Toeplitz") return MatrixKind::Toeplitz;
  if (name == "hankel" || name == "Hankel") return MatrixKind::Hankel;
  throw InvalidArgumentError("unknown matrix kind '" + std::string(name) + "'");
}

EntrySampler::EntrySampler(EntryDistribution dist, std::uint64_t seed) : dist_(dist), engine_(seed) {}

double EntrySampler::operator()() {
  switch (dist_) {
    case EntryDistribution::StandardNormal:
      return normal_(engine_);
    case EntryDistribution::Rademacher:
      return (engine_() >> 63) ? 1.0 : -1.0;
    case EntryDistribution::UniformSym: {
      static const double half_width = std::sqrt(3.0);
      return half_width * (2.0 * uniform01(engine_) - 1.0);
    }
  }
  return 0.0;
}

EntrySequence::EntrySequence(long lo, std::vector<double> values) : lo_(lo), values_(std::move(values)) {
  if (values_.empty()) throw InvalidRangeError("entry sequence must hold at least one value");
}

double EntrySequence::at(long j) const {
  if (j < lo() || j > hi()) {
    throw MissingSupportError("index " + std::to_string(j) + " outside sequence support [" +
                              std::to_string(lo()) + ", " + std::to_string(hi()) + "]");
  }
  return (*this)[j];
}

MovingAverageProcess MovingAverageProcess::unit(int m, EntryDistribution dist, std::uint64_t seed) {
  if (m < 0) throw InvalidArgumentError("window half-width m must be nonnegative");
  return MovingAverageProcess{m, std::vector<double>(static_cast<std::size_t>(2 * m + 1), 1.0), dist, seed};
}

void MovingAverageProcess::validate() const {
  if (m < 0) throw InvalidArgumentError("window half-width m must be nonnegative");
  if (weights.size() != static_cast<std::size_t>(2 * m + 1)) {
    throw InvalidArgumentError("weights must have length 2m+1 = " + std::to_string(2 * m + 1) +
                               ", got " + std::to_string(weights.size()));
  }
}

bool MovingAverageProcess::has_unit_weights() const {
  for (double c : weights) {
    if (c != 1.0) return false;
  }
  return true;
}

EntrySequence sample_raw(const MovingAverageProcess& process, long lo, long hi) {
  if (lo > hi) {
    throw InvalidRangeError("sample_raw: lo " + std::to_string(lo) + " > hi " + std::to_string(hi));
  }
  EntrySampler draw(process.dist, process.seed);
  std::vector<double> values(static_cast<std::size_t>(hi - lo + 1));
  for (double& v : values) v = draw();
  return EntrySequence(lo, std::move(values));
}

EntrySequence moving_average(const EntrySequence& raw, int m, std::span<const double> weights, long j_lo,
                             long j_hi) {
  if (m < 0) throw InvalidArgumentError("moving_average: m must be nonnegative");
  if (weights.size() != static_cast<std::size_t>(2 * m + 1)) {
    throw InvalidArgumentError("moving_average: weights must have length 2m+1");
  }
  if (j_lo > j_hi) throw InvalidRangeError("moving_average: empty output range");
  if (!raw.covers(j_lo - m, j_hi + m)) {
    throw MissingSupportError("moving_average: raw support [" + std::to_string(raw.lo()) + ", " +
                              std::to_string(raw.hi()) + "] does not cover [" + std::to_string(j_lo - m) +
                              ", " + std::to_string(j_hi + m) + "]");
  }
  std::vector<double> out(static_cast<std::size_t>(j_hi - j_lo + 1), 0.0);
  for (long j = j_lo; j <= j_hi; ++j) {
    double acc = 0.0;
    for (int r = -m; r <= m; ++r) acc += weights[static_cast<std::size_t>(r + m)] * raw[j + r];
    out[static_cast<std::size_t>(j - j_lo)] = acc;
  }
  return EntrySequence(j_lo, std::move(out));
}

EntrySequence moving_average(const EntrySequence& raw, int m, std::span<const double> weights) {
  if (m < 0) throw InvalidArgumentError("moving_average: m must be nonnegative");
  if (raw.hi() - raw.lo() < 2L * m) {
    throw MissingSupportError("moving_average: raw window shorter than 2m+1");
  }
  return moving_average(raw, m, weights, raw.lo() + m, raw.hi() - m);
}

PatternedMatrix::PatternedMatrix(MatrixKind kind, Eigen::MatrixXd entries,
                                 std::shared_ptr<const EntrySequence> source, bool diagonal_zeroed)
    : kind_(kind), entries_(std::move(entries)), source_(std::move(source)), diagonal_zeroed_(diagonal_zeroed) {
  if (entries_.rows() != entries_.cols() || entries_.rows() < 1) {
    throw InvalidArgumentError("patterned matrix must be square with n >= 1");
  }
}

double PatternedMatrix::scale() const noexcept { return 1.0 / std::sqrt(static_cast<double>(n())); }

namespace {

void require_n(int n) {
  if (n < 1) throw InvalidArgumentError("matrix size n must be positive");
}

}  // namespace

PatternedMatrix build_toeplitz(std::shared_ptr<const EntrySequence> y, int n) {
  require_n(n);
  if (!y->covers(0, n - 1)) {
    throw MissingSupportError("build_toeplitz: Y must be defined on [0, " + std::to_string(n - 1) + "]");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd a(n, n);
  for (int d = 0; d < n; ++d) {
    const double v = (*y)[d] / root_n;
    for (int i = 0; i + d < n; ++i) {
      a(i, i + d) = v;
      a(i + d, i) = v;
    }
  }
  return PatternedMatrix(MatrixKind::Toeplitz, std::move(a), std::move(y));
}

PatternedMatrix build_toeplitz(EntrySequence y, int n) {
  return build_toeplitz(std::make_shared<const EntrySequence>(std::move(y)), n);
}

PatternedMatrix build_hankel(std::shared_ptr<const EntrySequence> y, int n) {
  require_n(n);
  if (!y->covers(-(n - 1), n - 1)) {
    throw MissingSupportError("build_hankel: Y must be defined on [" + std::to_string(-(n - 1)) + ", " +
                              std::to_string(n - 1) + "]");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  Eigen::MatrixXd a(n, n);
  // 0-based (i, j) is 1-based (i+1, j+1), so the index is n - (i + j) - 1.
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = (*y)[n - (i + j) - 1] / root_n;
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return PatternedMatrix(MatrixKind::Hankel, std::move(a), std::move(y));
}

PatternedMatrix build_hankel(EntrySequence y, int n) {
  return build_hankel(std::make_shared<const EntrySequence>(std::move(y)), n);
}

EntrySequence sample_entries(const MovingAverageProcess& process, int n) {
  process.validate();
  require_n(n);
  const long reach = static_cast<long>(n - 1);
  const EntrySequence raw = sample_raw(process, -reach - process.m, reach + process.m);
  return moving_average(raw, process.m, process.weights, -reach, reach);
}

PatternedMatrix sample_matrix(MatrixKind kind, int n, const MovingAverageProcess& process) {
  auto y = std::make_shared<const EntrySequence>(sample_entries(process, n));
  return kind == MatrixKind::Toeplitz ? build_toeplitz(std::move(y), n) : build_hankel(std::move(y), n);
}

}  // namespace rmlab
