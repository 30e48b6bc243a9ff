#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "silp/domain.hpp"
#include "silp/expr.hpp"

namespace silp {

/// A family of constraint rows sharing one closed form:
/// sum_k coeffs[k] * x_k >= rhs for every index point of domain.
struct ConstraintBlock {
  std::string label;
  IndexDomain domain;
  std::vector<Expr> coeffs;
  Expr rhs;
};

/// One right-hand-side value family per block label. Used for b, for the
/// columns a^k, and for perturbation directions.
using RhsFamily = std::map<std::string, Expr>;

struct SilpInstance {
  std::string name;
  std::vector<std::string> vars;
  std::vector<mpq_class> objective;
  std::vector<ConstraintBlock> blocks;

  std::size_t n() const { return vars.size(); }
  const ConstraintBlock* block(const std::string& label) const;
  /// b as a family.
  RhsFamily rhs() const;
  /// The k-th column a^k as a family.
  RhsFamily column(std::size_t k) const;
  /// Copy with every block's right-hand side replaced by y.
  SilpInstance with_rhs(const RhsFamily& y) const;
};

RhsFamily operator+(const RhsFamily& a, const RhsFamily& b);
RhsFamily operator-(const RhsFamily& a, const RhsFamily& b);
RhsFamily scaled(const RhsFamily& a, const mpq_class& q);

/// A perturbation direction read from a direction file.
struct Direction {
  std::string instance_name;
  RhsFamily values;
};

struct Diagnostic {
  std::string code;  ///< e.g. EmptyInstance, FreeVariableEscape, MixedSignWarning
  std::string message;
  std::string block;
  bool error = true;
};

/// Parse and validate an instance file. Throws ParseError for syntax problems
/// and ValidationError for the first semantic error.
SilpInstance parse_instance(std::string_view text);
SilpInstance load_instance(const std::string& path);

/// Canonical text form; parse_instance(render_instance(x)) == x.
std::string render_instance(const SilpInstance& inst);
/// Canonical JSON form.
std::string instance_json(const SilpInstance& inst);

/// Invariant checks plus sign warnings for parametric coefficients.
std::vector<Diagnostic> validate(const SilpInstance& inst);

/// Parse a direction file against an instance: every block label must appear once.
Direction parse_direction(std::string_view text, const SilpInstance& inst);
Direction load_direction(const std::string& path, const SilpInstance& inst);
std::string render_direction(const Direction& d);

/// Coordinates of d = sum_k alpha[k] a^k + alpha0 b.
struct SpanCoordinates {
  mpq_class alpha0;
  std::vector<mpq_class> alpha;
  bool residual_verified = false;
};

/// Exact coordinates of d in span(a^1..a^n, b), or nullopt when d is not in that span.
std::optional<SpanCoordinates> span_membership(const SilpInstance& inst, const RhsFamily& d);

/// Check that y has exactly the instance's block labels, with free variables
/// inside each block's domain. Throws ValidationError.
void check_family(const SilpInstance& inst, const RhsFamily& y, const std::string& what);

bool operator==(const ConstraintBlock& a, const ConstraintBlock& b);
bool operator==(const SilpInstance& a, const SilpInstance& b);

}  // namespace silp
