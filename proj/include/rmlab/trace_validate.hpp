#pragma once

// Exact checks of the index-set trace formulas for Toeplitz and Hankel
// matrices against dense matrix powers, in rational arithmetic.
//
//   Toeplitz: Tr(T^h) = sum_i sum_{J in A_h} x_{|j_1|} ... x_{|j_h|} I(i, J)
//             A_h = { J in [-n, n]^h : sum_k j_k = 0 }
//             I(i, J) = prod_k chi_[1,n](i + j_1 + ... + j_k)
//   Hankel:   Tr(H^h) = sum_i sum_{J in C} x_{j_1} ... x_{j_h} I(i, J)
//             C = C_h = { sum_k (-1)^k j_k = 0 }          for even h
//             C = C_{h,i} = { sum_k (-1)^k j_k = 2i-1-n } for odd h
//             I(i, J) = prod_k chi_[1,n](i - sum_{t<=k} (-1)^t j_t)

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "rmlab/ensemble.hpp"

namespace rmlab {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

inline constexpr std::uint64_t kDefaultTraceBudget = 10'000'000;

enum class IndexSetKind { ToeplitzA, HankelCEven, HankelCOdd };

struct IndexSetSpec {
  int h = 1;
  int n = 1;
  IndexSetKind kind = IndexSetKind::ToeplitzA;
  int i = 0;  // row index, HankelCOdd only

  /// Right-hand side of the linear constraint: 0, or 2i-1-n.
  long constraint() const noexcept;
  /// Coefficient of j_k (1-based k) in the constraint: 1, or (-1)^k.
  int coefficient(int k) const noexcept;
};

/// Visits each tuple of [-n, n]^h meeting the constraint exactly once, with the
/// last coordinate solved from the constraint. Throws ResourceLimitError when
/// (2n+1)^{h-1} exceeds budget.
void for_each_index_tuple(const IndexSetSpec& spec, const std::function<void(std::span<const int>)>& visit,
                          std::uint64_t budget = kDefaultTraceBudget);
std::vector<std::vector<int>> enumerate_index_set(const IndexSetSpec& spec,
                                                  std::uint64_t budget = kDefaultTraceBudget);

struct TraceFormulaOptions {
  std::uint64_t budget = kDefaultTraceBudget;
  /// Mutation mode: shifts every indicator argument by one. Used to show the
  /// validation suite detects an off-by-one.
  bool mutate_indicator = false;
};

/// x holds x_0..x_{n-1}; negative indices read x_{|j|}.
Rational trace_formula_toeplitz(std::span<const Rational> x, int n, int h, const TraceFormulaOptions& options = {});
/// x holds x_{-(n-1)}..x_{n-1} (index j at x[j + n - 1]); x_j and x_{-j} are distinct.
Rational trace_formula_hankel(std::span<const Rational> x, int n, int h, const TraceFormulaOptions& options = {});

/// Exact dense matrices from the same inputs as the formulas (unscaled).
RationalMatrix dense_toeplitz(std::span<const Rational> x, int n);
RationalMatrix dense_hankel(std::span<const Rational> x, int n);
Rational dense_power_trace(const RationalMatrix& a, int h);

struct ValidationCase {
  MatrixKind kind = MatrixKind::Toeplitz;
  int n = 1;
  int h = 1;
  std::uint64_t seed = 0;
  Rational formula = 0;
  Rational dense = 0;
  bool pass() const { return formula == dense; }
};

struct ValidationGrid {
  struct Cell {
    int n_max;
    int h_max;
  };
  /// Default: n <= 6 with h <= 4, and n <= 3 with h <= 6.
  std::vector<Cell> cells{{6, 4}, {3, 6}};
  int value_range = 3;  // inputs drawn from [-value_range, value_range]
};

/// Every (kind, n, h) of the grid for each seed; duplicates across cells are run once.
std::vector<ValidationCase> run_validation_suite(const ValidationGrid& grid, std::span<const std::uint64_t> seeds,
                                                 const TraceFormulaOptions& options = {});

/// Random integer inputs for one case, reproducible from seed.
std::vector<Rational> random_integer_inputs(std::size_t count, int value_range, std::uint64_t seed);

nlohmann::json to_json(const ValidationCase& c);

}  // namespace rmlab
