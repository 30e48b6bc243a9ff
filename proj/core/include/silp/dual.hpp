#pragma once

#include <optional>
#include <string>
#include <vector>

#include "silp/analysis.hpp"

namespace silp {

enum class DualMode { BaseOnU, ExtendedAlongPath };
std::string to_string(DualMode m);

/// A dual solution evaluated as the limit of projected right-hand sides along
/// one witness path. Defined exactly where that limit exists.
struct DualFunctional {
  WitnessPath witness;
  /// Recorded values on the columns: psi(a^k) = c_k.
  std::vector<mpq_class> column_values;
  /// Recorded value on b: psi(b) = OV(b).
  ExtReal rhs_value;
  DualMode mode = DualMode::BaseOnU;
};

/// Value of a functional on one family; `exists` false means NoLimit.
struct DualValue {
  bool exists = false;
  ExtReal value;
  std::string to_string() const;
};

/// The optimal dual on span(a^1..a^n, b). Throws NoFiniteOV unless the
/// report is Feasible with a finite OV.
DualFunctional base_dual(const EliminationOutput& out, const AnalysisReport& report);

/// Limit of fm_bar(out, y) along the path of psi.
DualValue evaluate_dual(const DualFunctional& psi, const EliminationOutput& out, const RhsFamily& y);
DualValue evaluate_along(const WitnessPath& path, const EliminationOutput& out, const RhsFamily& y);

/// Nested constraint spaces: the span U, bounded families, all families.
enum class SpaceTag { U, Bounded, All };
std::string to_string(SpaceTag t);
SpaceTag parse_space(const std::string& s);

/// Smallest space tag containing d.
SpaceTag classify_direction(const SilpInstance& inst, const RhsFamily& d, const Budget& budget = {});

enum class PriceVerdict { PricedExactly, PricedUpToTolerance, Fails, NotEvaluable };
std::string to_string(PriceVerdict v);

struct EpsRow {
  mpq_class eps;
  ExtReal ov;         ///< OV(b + eps d), recomputed
  ExtReal predicted;  ///< psi(b) + eps psi(d)
  bool agrees = false;
};

struct PricingReport {
  std::string instance;
  RhsFamily direction;
  SpaceTag space = SpaceTag::All;
  bool in_U = false;
  std::optional<SpanCoordinates> coords;
  ExtReal ov_b;
  DualValue psi_d;
  std::optional<WitnessPath> functional_path;
  std::optional<mpq_class> eps_hat;
  std::vector<EpsRow> table;
  PriceVerdict verdict = PriceVerdict::NotEvaluable;
  std::vector<std::string> notes;
};

struct PricingOptions {
  AnalysisOptions analysis;
  /// Largest step tried.
  mpq_class eps_max = 1;
  /// Explicit steps; replaces the eps_hat search when nonempty.
  std::vector<mpq_class> eps_table;
  int shrink_steps = 20;
};

/// Pricing of d in U by its span coordinates. Throws NotInU.
PricingReport price_in_U(const DualFunctional& psi, const SilpInstance& inst, const EliminationOutput& out,
                         const RhsFamily& d, const PricingOptions& opt = {});

/// Pricing of an arbitrary direction; delegates to price_in_U when d is in U.
PricingReport price_direction(const SilpInstance& inst, const EliminationOutput& out, const AnalysisReport& report,
                              const RhsFamily& d, const PricingOptions& opt = {});

enum class DpStatus { Holds, Fails, Vacuous, Unknown };
std::string to_string(DpStatus s);

/// One sufficient condition: accumulation values of the projected b strictly
/// below a reference value (S for the first, L for the second).
struct DpCheck {
  DpStatus status = DpStatus::Unknown;
  ExtReal reference;
  bool reference_attained = false;
  /// Supremum of accumulation values strictly below the reference.
  ExtReal below;
  std::vector<std::string> evidence;
};

DpCheck check_DP1(const EliminationOutput& out, const RhsFamily& b, const SValue& s, const AnalysisOptions& opt = {});
DpCheck check_DP2(const EliminationOutput& out, const RhsFamily& b, const LValue& l, const AnalysisOptions& opt = {});

struct SpaceVerdict {
  SpaceTag space = SpaceTag::U;
  DpStatus sd = DpStatus::Unknown;
  DpStatus dp = DpStatus::Unknown;
  std::string basis;
};

struct DpVerdict {
  std::string instance;
  DpCheck dp1;
  DpCheck dp2;
  BoundResult multiplier_bound;
  bool sufficient_DP = false;
  /// Finite multiplier bound: strong duality over bounded families.
  bool sd_certificate = false;
  /// One entry per space tag, smallest first.
  std::vector<SpaceVerdict> spaces;
  std::vector<std::string> notes;
};

DpVerdict dp_verdict(const SilpInstance& inst, const EliminationOutput& out, const AnalysisReport& report,
                     const AnalysisOptions& opt = {});

/// Record a pricing failure at space t; every larger space fails too.
void record_dp_failure(DpVerdict& v, SpaceTag t, const std::string& why);

enum class ConeVerdict { ImpliesSgeqLAndSolvable, NotApplicable, Unknown };
std::string to_string(ConeVerdict v);

struct ConeResult {
  ConeVerdict verdict = ConeVerdict::Unknown;
  std::size_t tight_rows = 0;
  /// Nonzero certificate weights on tight rows, keyed by row description.
  std::vector<std::pair<std::string, mpq_class>> certificate;
  std::string note;
};

/// Finite-support certificate c = sum v(i) a(i), v >= 0, over rows tight at x.
/// Throws DimensionMismatch.
ConeResult tight_cone_check(const SilpInstance& inst, const EliminationOutput& out, const std::vector<mpq_class>& x,
                            const AnalysisOptions& opt = {});

std::string pricing_json(const PricingReport& r, const EliminationOutput& out);
std::string pricing_text(const PricingReport& r, const EliminationOutput& out);
std::string dp_json(const DpVerdict& v);
std::string dp_text(const DpVerdict& v);

}  // namespace silp
