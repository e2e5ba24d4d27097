#include "rmlab/trace_validate.hpp"

#include <cstdlib>
#include <set>
#include <string>
#include <tuple>

#include "rmlab/error.hpp"
#include "rmlab/rng.hpp"

namespace rmlab {

long IndexSetSpec::constraint() const noexcept {
  return kind == IndexSetKind::HankelCOdd ? 2L * i - 1 - n : 0L;
}

int IndexSetSpec::coefficient(int k) const noexcept {
  if (kind == IndexSetKind::ToeplitzA) return 1;
  return k % 2 == 0 ? 1 : -1;
}

namespace {

void check_budget(int n, int h, std::uint64_t budget) {
  if (h < 1 || n < 1) throw InvalidArgumentError("index sets need h >= 1 and n >= 1");
  long double size = 1;
  for (int k = 1; k < h; ++k) size *= (2.0L * n + 1);
  if (size > static_cast<long double>(budget)) {
    throw ResourceLimitError("index-set enumeration of (2n+1)^(h-1) = " + std::to_string(static_cast<double>(size)) +
                             " tuples exceeds budget " + std::to_string(budget));
  }
}

}  // namespace

void for_each_index_tuple(const IndexSetSpec& spec, const std::function<void(std::span<const int>)>& visit,
                          std::uint64_t budget) {
  check_budget(spec.n, spec.h, budget);
  const int n = spec.n;
  const int h = spec.h;
  std::vector<int> j(static_cast<std::size_t>(h), -n);
  const int last_coefficient = spec.coefficient(h);
  while (true) {
    long partial = 0;
    for (int k = 1; k < h; ++k) partial += static_cast<long>(spec.coefficient(k)) * j[static_cast<std::size_t>(k - 1)];
    // coefficient is +-1, so dividing is multiplying
    const long last = (spec.constraint() - partial) * last_coefficient;
    if (last >= -n && last <= n) {
      j[static_cast<std::size_t>(h - 1)] = static_cast<int>(last);
      visit(j);
    }
    int k = h - 2;
    while (k >= 0 && j[static_cast<std::size_t>(k)] == n) {
      j[static_cast<std::size_t>(k)] = -n;
      --k;
    }
    if (k < 0) break;
    ++j[static_cast<std::size_t>(k)];
  }
}

std::vector<std::vector<int>> enumerate_index_set(const IndexSetSpec& spec, std::uint64_t budget) {
  std::vector<std::vector<int>> out;
  for_each_index_tuple(spec, [&](std::span<const int> t) { out.emplace_back(t.begin(), t.end()); }, budget);
  return out;
}

namespace {

bool in_rows(long v, int n) { return v >= 1 && v <= n; }

Rational word_product_toeplitz(std::span<const Rational> x, std::span<const int> j) {
  Rational product = 1;
  for (int jk : j) {
    const auto index = static_cast<std::size_t>(std::abs(jk));
    if (index >= x.size()) return 0;
    product *= x[index];
  }
  return product;
}

Rational word_product_hankel(std::span<const Rational> x, int n, std::span<const int> j) {
  Rational product = 1;
  for (int jk : j) {
    const long index = static_cast<long>(jk) + n - 1;
    if (index < 0 || index >= static_cast<long>(x.size())) return 0;
    product *= x[static_cast<std::size_t>(index)];
  }
  return product;
}

}  // namespace

Rational trace_formula_toeplitz(std::span<const Rational> x, int n, int h, const TraceFormulaOptions& options) {
  if (x.size() != static_cast<std::size_t>(n)) throw InvalidArgumentError("Toeplitz inputs must hold x_0..x_{n-1}");
  const long shift = options.mutate_indicator ? 1 : 0;
  Rational total = 0;
  const IndexSetSpec spec{h, n, IndexSetKind::ToeplitzA, 0};
  for_each_index_tuple(
      spec,
      [&](std::span<const int> j) {
        // The product does not depend on i; count the admissible rows first.
        long rows = 0;
        for (int i = 1; i <= n; ++i) {
          long position = i + shift;
          bool ok = true;
          for (int jk : j) {
            position += jk;
            if (!in_rows(position, n)) {
              ok = false;
              break;
            }
          }
          rows += ok ? 1 : 0;
        }
        if (rows > 0) total += rows * word_product_toeplitz(x, j);
      },
      options.budget);
  return total;
}

Rational trace_formula_hankel(std::span<const Rational> x, int n, int h, const TraceFormulaOptions& options) {
  if (x.size() != static_cast<std::size_t>(2 * n - 1)) {
    throw InvalidArgumentError("Hankel inputs must hold x_{-(n-1)}..x_{n-1}");
  }
  const long shift = options.mutate_indicator ? 1 : 0;
  const auto indicator = [&](int i, std::span<const int> j) {
    long alternating = 0;
    for (std::size_t t = 0; t < j.size(); ++t) {
      alternating += ((t + 1) % 2 == 0 ? 1 : -1) * static_cast<long>(j[t]);
      if (!in_rows(i - alternating + shift, n)) return false;
    }
    return true;
  };
  Rational total = 0;
  if (h % 2 == 0) {
    const IndexSetSpec spec{h, n, IndexSetKind::HankelCEven, 0};
    for_each_index_tuple(
        spec,
        [&](std::span<const int> j) {
          long rows = 0;
          for (int i = 1; i <= n; ++i) rows += indicator(i, j) ? 1 : 0;
          if (rows > 0) total += rows * word_product_hankel(x, n, j);
        },
        options.budget);
    return total;
  }
  // Odd h: C_{h,i} moves with i. Enumerate the box prefix once and solve the
  // last coordinate per row.
  check_budget(n, h, options.budget);
  std::vector<int> j(static_cast<std::size_t>(h), -n);
  const int last_sign = h % 2 == 0 ? 1 : -1;
  while (true) {
    long partial = 0;
    for (int k = 1; k < h; ++k) partial += (k % 2 == 0 ? 1 : -1) * static_cast<long>(j[static_cast<std::size_t>(k - 1)]);
    for (int i = 1; i <= n; ++i) {
      const long last = (2L * i - 1 - n - partial) * last_sign;
      if (last < -n || last > n) continue;
      j[static_cast<std::size_t>(h - 1)] = static_cast<int>(last);
      if (indicator(i, j)) total += word_product_hankel(x, n, j);
    }
    int k = h - 2;
    while (k >= 0 && j[static_cast<std::size_t>(k)] == n) {
      j[static_cast<std::size_t>(k)] = -n;
      --k;
    }
    if (k < 0) break;
    ++j[static_cast<std::size_t>(k)];
  }
  return total;
}

RationalMatrix dense_toeplitz(std::span<const Rational> x, int n) {
  if (x.size() != static_cast<std::size_t>(n)) throw InvalidArgumentError("Toeplitz inputs must hold x_0..x_{n-1}");
  RationalMatrix a(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x[static_cast<std::size_t>(std::abs(i - j))];
  return a;
}

RationalMatrix dense_hankel(std::span<const Rational> x, int n) {
  if (x.size() != static_cast<std::size_t>(2 * n - 1)) {
    throw InvalidArgumentError("Hankel inputs must hold x_{-(n-1)}..x_{n-1}");
  }
  RationalMatrix a(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  // 1-based entry x_{n-(i+j)+1}; stored at offset n-1.
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      a[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = x[static_cast<std::size_t>(n - (i + j) + 1 + n - 1)];
  return a;
}

Rational dense_power_trace(const RationalMatrix& a, int h) {
  const std::size_t n = a.size();
  if (h < 1) throw InvalidArgumentError("dense_power_trace needs h >= 1");
  RationalMatrix power = a;
  for (int step = 1; step < h; ++step) {
    RationalMatrix next(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (power[i][k] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += power[i][k] * a[k][j];
      }
    power = std::move(next);
  }
  Rational trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += power[i][i];
  return trace;
}

std::vector<Rational> random_integer_inputs(std::size_t count, int value_range, std::uint64_t seed) {
  Engine engine(seed);
  std::uniform_int_distribution<int> pick(-value_range, value_range);
  std::vector<Rational> x;
  x.reserve(count);
  for (std::size_t k = 0; k < count; ++k) x.emplace_back(pick(engine));
  return x;
}

std::vector<ValidationCase> run_validation_suite(const ValidationGrid& grid, std::span<const std::uint64_t> seeds,
                                                 const TraceFormulaOptions& options) {
  std::set<std::pair<int, int>> shapes;
  for (const auto& cell : grid.cells)
    for (int n = 1; n <= cell.n_max; ++n)
      for (int h = 1; h <= cell.h_max; ++h) shapes.emplace(n, h);

  std::vector<ValidationCase> cases;
  for (MatrixKind kind : {MatrixKind::Toeplitz, MatrixKind::Hankel}) {
    for (const auto& [n, h] : shapes) {
      for (std::uint64_t seed : seeds) {
        ValidationCase c;
        c.kind = kind;
        c.n = n;
        c.h = h;
        c.seed = seed;
        const std::uint64_t stream = derive_seed(seed, static_cast<std::uint64_t>(n) * 64 + static_cast<std::uint64_t>(h) * 2 +
                                                           (kind == MatrixKind::Hankel ? 1 : 0));
        if (kind == MatrixKind::Toeplitz) {
          const auto x = random_integer_inputs(static_cast<std::size_t>(n), grid.value_range, stream);
          c.formula = trace_formula_toeplitz(x, n, h, options);
          c.dense = dense_power_trace(dense_toeplitz(x, n), h);
        } else {
          const auto x = random_integer_inputs(static_cast<std::size_t>(2 * n - 1), grid.value_range, stream);
          c.formula = trace_formula_hankel(x, n, h, options);
          c.dense = dense_power_trace(dense_hankel(x, n), h);
        }
        cases.push_back(std::move(c));
      }
    }
  }
  return cases;
}

nlohmann::json to_json(const ValidationCase& c) {
  return {{"kind", to_string(c.kind)}, {"n", c.n},           {"h", c.h},
          {"seed", c.seed},            {"formula", c.formula.str()}, {"dense", c.dense.str()},
          {"pass", c.pass()}};
}

}  // namespace rmlab
