#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "silp/ext_real.hpp"
#include "silp/model.hpp"

namespace silp {

/// One enumerated constraint a.x >= rhs with its origin.
struct FiniteRow {
  std::vector<mpq_class> a;
  mpq_class rhs;
  std::string block;
  Binding at;
};

struct FiniteSystem {
  std::string name;
  std::vector<std::string> vars;
  std::vector<mpq_class> objective;
  std::vector<FiniteRow> rows;
};

/// Enumerate every block over its domain with each axis capped at n.
FiniteSystem truncate(const SilpInstance& inst, const mpz_class& n);
/// Number of rows truncate(inst, n) would produce.
mpz_class truncated_row_count(const SilpInstance& inst, const mpz_class& n);

enum class LpStatus { Optimal, Unbounded, Infeasible };
std::string to_string(LpStatus s);

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  mpq_class value;                ///< set when Optimal
  std::vector<mpq_class> x;       ///< optimal point when Optimal
  std::vector<mpq_class> duals;   ///< one nonnegative multiplier per row when Optimal
  /// Optimal value as an extended real: -inf when unbounded, +inf when infeasible.
  ExtReal ov() const;
};

/// Exact minimum of c.x subject to the rows, by a rational simplex on the dual.
LpResult solve_exact(const FiniteSystem& fs);

/// Any point satisfying every row, or nullopt when there is none.
std::optional<std::vector<mpq_class>> feasible_point(const FiniteSystem& fs);

struct SweepEntry {
  mpz_class n;
  std::size_t rows = 0;
  bool skipped = false;  ///< truncation exceeded the row cap
  LpStatus status = LpStatus::Infeasible;
  ExtReal value;
};

struct TruncationSweep {
  std::vector<SweepEntry> entries;
  bool monotone = true;
  /// Value at the largest solved truncation.
  ExtReal sup_estimate;
};

struct SweepOptions {
  std::vector<mpz_class> schedule{10, 100, 1000, 10000};
  std::size_t row_cap = 100000;
};

/// Truncated optimal values along the schedule. Throws MonotonicityViolation on a decrease.
TruncationSweep fdsilp_estimate(const SilpInstance& inst, const SweepOptions& opt = {});

}  // namespace silp
