#pragma once

#include <optional>
#include <string>
#include <vector>

#include "silp/domain.hpp"
#include "silp/expr.hpp"
#include "silp/ext_real.hpp"

namespace silp {

/// Work limits for fallback scans.
struct Budget {
  long per_axis = 100000;
  long total = 1000000;
};

enum class Sign { NonNegative, NonPositive, IdenticallyZero, Mixed, Unknown };

std::string to_string(Sign s);

struct SignResult {
  Sign sign = Sign::Unknown;
  /// NonNegative/NonPositive verdicts that are in fact strictly signed on every point.
  bool strict = false;
  /// For Mixed: points with strictly positive and strictly negative values.
  std::optional<Binding> positive_at;
  std::optional<Binding> negative_at;
};

/// Sign of e over every integer point of dom. Certified verdicts come from
/// exact analysis; sampling can only produce Mixed or Unknown.
SignResult sign_over(const Expr& e, const IndexDomain& dom, const Budget& budget = {});

struct LimitResult {
  bool exists = false;  ///< false means NoLimit
  ExtReal value;
  /// True when the joint limit (not only the iterated ones) is certified.
  bool joint_certified = false;
};

/// Limit of e as all escaping variables tend to +inf with the fixed ones
/// substituted. Iterated limits over every ordering must agree, otherwise
/// NoLimit. Throws DegenerateDenominator if the denominator vanishes
/// identically after substitution, UnboundVariable if a variable is neither
/// fixed nor escaping.
LimitResult limit_at_infinity(const Expr& e, const std::vector<std::string>& escaping,
                              const Binding& fixed = {});

/// Limit as the escaping variables tend to +inf, as a function of the other
/// axes of dom. Returns nullopt when some iterated limit is infinite, the
/// orderings disagree, or a leading denominator coefficient is not strictly
/// signed on dom (so the pointwise limit could differ at special points).
std::optional<Expr> symbolic_limit(const Expr& e, const std::vector<std::string>& escaping,
                                   const IndexDomain& dom, const Budget& budget = {});

/// Sequence description: fixed axes plus axes sent to +inf.
struct Witness {
  Binding fixed;
  std::vector<std::string> escaping;
  bool is_point() const { return escaping.empty(); }
  std::string to_string() const;
};

struct SupResult {
  ExtReal value;  ///< -inf for an empty domain
  bool attained = false;
  Witness witness;
  bool certified = true;
};

/// Supremum of e over the integer grid dom.
SupResult sup_over(const Expr& e, const IndexDomain& dom, const Budget& budget = {});

/// Supremum of the values of e that are strictly below threshold (values,
/// not limits). -inf when no point qualifies. certified=false when the
/// analysis could not be made exact.
SupResult sup_below(const Expr& e, const IndexDomain& dom, const ExtReal& threshold,
                    const Budget& budget = {});

/// Integer roots of e (points where the numerator vanishes) on dom, up to cap
/// points. nullopt if enumeration could not be completed (too many roots or an
/// uncertified multivariate case). An identically-zero e is reported through
/// `all` = true.
struct RootSet {
  bool all = false;
  std::vector<Binding> points;
};
std::optional<RootSet> integer_roots(const Expr& e, const IndexDomain& dom, std::size_t cap,
                                     const Budget& budget = {});

}  // namespace silp
