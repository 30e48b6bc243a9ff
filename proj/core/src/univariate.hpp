#pragma once

// Exact single-variable analysis over integer ranges: root brackets via Sturm
// sequences, sign segments and suprema of rational functions.

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "silp/expr.hpp"
#include "silp/ext_real.hpp"

namespace silp::detail {

/// Dense polynomial over Q, c[k] is the coefficient of x^k. No trailing zeros.
struct UPoly {
  std::vector<mpq_class> c;

  UPoly() = default;
  static UPoly from(const Poly& p, const std::string& v);
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  void trim();
  mpq_class eval(const mpq_class& x) const;
  int sign_at(const mpq_class& x) const { return sgn(eval(x)); }
  UPoly derivative() const;
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
};

/// Remainder of a by b (b nonzero).
UPoly rem(const UPoly& a, const UPoly& b);
UPoly quo(const UPoly& a, const UPoly& b);
UPoly gcd(UPoly a, UPoly b);

/// Integer B with every real root r satisfying |r| < B.
mpz_class cauchy_bound(const UPoly& p);

/// Integers k in [lo, hi] such that p has a real root in [k, k+1] or at k.
/// Both k and k+1 should be treated as candidates.
std::vector<mpz_class> root_brackets(const UPoly& p, const mpz_class& lo, const mpz_class& hi);

struct Segment {
  mpz_class a;
  std::optional<mpz_class> b;  ///< nullopt = +inf
  int sign;
};

/// Maximal integer ranges of [lo, hi] on which f has constant sign (f univariate in v).
std::vector<Segment> sign_segments(const Expr& f, const std::string& v, const mpz_class& lo,
                                   const std::optional<mpz_class>& hi);

struct USup {
  ExtReal value;
  bool attained = false;
  mpz_class arg;         ///< maximizer when attained
  bool escapes = false;  ///< sup approached as v -> inf
};

/// Exact sup of f (univariate in v, or constant) over integers in [lo, hi].
USup usup(const Expr& f, const std::string& v, const mpz_class& lo,
          const std::optional<mpz_class>& hi);

/// Limit of a univariate (or constant) f as v -> +inf.
ExtReal ulimit(const Expr& f, const std::string& v);

}  // namespace silp::detail
