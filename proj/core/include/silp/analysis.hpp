#pragma once

#include <optional>
#include <string>
#include <vector>

#include "silp/fm.hpp"
#include "silp/oracle.hpp"

namespace silp {

enum class Feasibility { Feasible, Infeasible, Unknown };
enum class GapClass { NoGap, Gap, Unknown };
enum class Dominant { S, L, Tie };

std::string to_string(Feasibility f);
std::string to_string(GapClass g);
std::string to_string(Dominant d);

/// Index sequence in one projected row: a fixed point, or some axes sent to +inf.
struct WitnessPath {
  std::size_t row = 0;
  RowClass cls = RowClass::I3;
  Witness witness;
  /// Limit of the projected right-hand side along the path.
  ExtReal rhs_limit;
  /// Limit of each remaining coefficient along the path (same order as out.remaining).
  std::vector<ExtReal> coeff_limits;
  std::string to_string(const EliminationOutput& out) const;
};

struct AnalysisOptions {
  Budget budget;
  /// Penalty weights for the numeric limit of omega; geometric 1, 10, ..., 10^12 by default.
  std::vector<mpq_class> delta_schedule;
  double tolerance = 1e-9;
  /// Truncation sizes tried when searching for a feasible point.
  std::vector<mpz_class> feasibility_schedule{10, 100};
  std::size_t row_cap = 20000;
  int cut_rounds = 60;

  AnalysisOptions();
  static std::vector<mpq_class> geometric_schedule(const mpq_class& max);
};

/// Projected right-hand side: fm_bar(out, y) with one Expr per output row.
std::vector<Expr> projected(const EliminationOutput& out, const RhsFamily& y);

/// Sum over remaining variables of |coefficient| on one row, as a rational Expr.
Expr penalty(const EliminationOutput& out, std::size_t row);

/// sup over I4 rows of projected(y) - delta * penalty; -inf when I4 is empty.
SupResult omega(const EliminationOutput& out, const std::vector<Expr>& ytil, const mpq_class& delta,
                const Budget& budget = {});
SupResult omega(const EliminationOutput& out, const RhsFamily& y, const mpq_class& delta,
                const Budget& budget = {});

struct SValue {
  ExtReal value;
  bool attained = false;
  std::optional<WitnessPath> witness;
  bool certified = true;
};

struct LValue {
  ExtReal value;
  std::optional<WitnessPath> witness;
  ExtReal numeric;   ///< omega at the last scheduled delta, or -inf when diverging
  bool numeric_converged = false;
  ExtReal analytic;  ///< sup of limits along vanishing escape paths
  bool discrepancy = false;
  bool certified = true;
  std::vector<std::string> notes;
};

SValue compute_S(const EliminationOutput& out, const RhsFamily& y, const AnalysisOptions& opt = {});
LValue compute_L(const EliminationOutput& out, const RhsFamily& y, const AnalysisOptions& opt = {});

struct FeasibilityResult {
  Feasibility verdict = Feasibility::Unknown;
  std::optional<std::vector<mpq_class>> point;
  std::string note;
};

/// Infeasible from a positive I1 row or an infeasible truncation; Feasible when a
/// candidate point has certified nonnegative residuals on every block.
FeasibilityResult check_feasibility(const SilpInstance& inst, const EliminationOutput& out,
                                    const RhsFamily& y, const AnalysisOptions& opt = {});

/// Turn an Unknown verdict into Infeasible when S or L is +inf.
void infer_infeasible(FeasibilityResult& f, const SValue& s, const LValue& l);

struct OvValue {
  ExtReal value;
  Dominant dominant = Dominant::Tie;
};
OvValue combine_ov(const SValue& s, const LValue& l, Feasibility f, double tol = 1e-9);
GapClass classify_gap(const SValue& s, const LValue& l, Feasibility f, double tol = 1e-9);

struct AnalysisReport {
  std::string instance;
  FeasibilityResult feasibility;
  SValue S;
  LValue L;
  OvValue OV;
  GapClass gap = GapClass::Unknown;
  BoundResult multiplier_bound;
  bool certified = true;
  std::vector<std::string> notes;
};

/// Full analysis of right-hand side y (the instance's own b when omitted).
AnalysisReport analyze(const SilpInstance& inst, const EliminationOutput& out, const RhsFamily& y,
                       const AnalysisOptions& opt = {});
AnalysisReport analyze(const SilpInstance& inst, const EliminationOutput& out,
                       const AnalysisOptions& opt = {});

/// Optimal value of the instance with right-hand side y (full recomputation).
ExtReal optimal_value(const SilpInstance& inst, const EliminationOutput& out, const RhsFamily& y,
                      const AnalysisOptions& opt = {});

/// The witness of whichever of S and L attains OV. Throws NoFiniteOV.
WitnessPath witness_sequence(const AnalysisReport& report);

/// Escape families of a domain: every nonempty subset of unbounded axes.
struct EscapeFamily {
  std::vector<std::string> escaping;
  IndexDomain rest;
};
std::vector<EscapeFamily> escape_families(const IndexDomain& dom);

/// Limits of a projected right-hand side along one family of index sequences of a row.
struct PathLimit {
  std::size_t row = 0;
  /// Axes sent to +inf; empty for constant sequences.
  std::vector<std::string> escaping;
  /// Axes left free; `limit` is a function of these.
  IndexDomain rest;
  std::optional<Expr> limit;
  /// Pointwise limits when the family is restricted to finitely many rest points.
  std::vector<std::pair<Binding, ExtReal>> at_points;
};

/// Path families of row h with their limits of ytil. With `vanishing`, only
/// paths along which every remaining coefficient tends to 0 (plus constant
/// sequences where the coefficients are already 0). Families that cannot be
/// resolved clear `certified` and add a note.
std::vector<PathLimit> path_limits(const EliminationOutput& out, std::size_t h, const Expr& ytil, bool vanishing,
                                   const Budget& budget, bool& certified, std::vector<std::string>& notes);

/// Supremum over one path family; with `below`, only of values strictly below it.
SupResult path_sup(const PathLimit& p, const std::optional<ExtReal>& below, const Budget& budget = {});

std::string report_json(const AnalysisReport& r, const EliminationOutput& out);
std::string report_text(const AnalysisReport& r, const EliminationOutput& out);

}  // namespace silp
