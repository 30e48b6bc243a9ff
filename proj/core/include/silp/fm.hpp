#pragma once

#include <map>
#include <string>
#include <vector>

#include "silp/asymptotics.hpp"
#include "silp/model.hpp"

namespace silp {

/// Reference to a source row: the objective row, or one row of an instance
/// block at an index given by Exprs in the current row's axes.
struct SourceRef {
  bool objective = false;
  std::string block;
  /// Source axis name -> Expr in the axes of the row that carries this reference.
  std::vector<std::pair<std::string, Expr>> binding;

  static SourceRef objective_row() { return {true, {}, {}}; }
  std::string to_string() const;
  /// Total order used as map key (objective first, then block, then binding text).
  bool operator<(const SourceRef& o) const;
  bool operator==(const SourceRef& o) const;
};

/// Nonnegative weights on source rows; the row equals the weighted sum.
using Multiplier = std::map<SourceRef, Expr>;

enum class RowClass { I1, I2, I3, I4 };
std::string to_string(RowClass c);

/// z*zc + sum_k x[k]*x_k >= rhs for every point of domain.
struct StdRow {
  std::string label;
  IndexDomain domain;
  Expr z;
  std::vector<Expr> x;
  Expr rhs;
  Multiplier mult;
  RowClass cls = RowClass::I1;
};

struct StdSystem {
  std::string name;
  std::vector<std::string> vars;
  std::vector<mpq_class> objective;
  std::vector<StdRow> rows;
};

/// Objective row z - c.x >= 0 followed by the instance blocks with z-coefficient 0.
StdSystem standardize(const SilpInstance& inst);

struct FmOptions {
  /// Preferred elimination order; eligible variables not listed follow in index order.
  std::vector<std::string> order;
  std::size_t dim_cap = 4;
  Budget budget;
};

struct EliminationOutput {
  std::string instance_name;
  std::vector<std::string> vars;
  std::vector<mpq_class> objective;
  std::vector<std::string> eliminated;
  std::vector<std::string> remaining;
  /// Per variable index: +1 / -1 uniform sign over I2 and I4 rows, 0 if
  /// identically zero there or eliminated.
  std::vector<int> remaining_sign;
  std::vector<StdRow> rows;

  std::vector<std::size_t> of_class(RowClass c) const;
  bool has_class(RowClass c) const { return !of_class(c).empty(); }
  std::size_t var_index(const std::string& v) const;
};

/// Parametric Fourier-Motzkin elimination. Throws SignUncertified or DimensionCapExceeded.
EliminationOutput eliminate(const StdSystem& sys, const FmOptions& opt = {});
EliminationOutput eliminate(const SilpInstance& inst, const FmOptions& opt = {});

/// For every output row h: r*u^h(objective) + sum_i u^h(i) y(i), one Expr per row.
std::vector<Expr> fm_apply(const EliminationOutput& out, const mpq_class& r, const RhsFamily& y);
/// fm_apply with r = 0.
std::vector<Expr> fm_bar(const EliminationOutput& out, const RhsFamily& y);

struct BoundResult {
  ExtReal value;
  bool certified = true;
};
/// Supremum of all multiplier weights over all output rows.
BoundResult multiplier_bound(const EliminationOutput& out, const Budget& budget = {});

std::string fm_dump_text(const EliminationOutput& out);
std::string fm_dump_json(const EliminationOutput& out);

}  // namespace silp
