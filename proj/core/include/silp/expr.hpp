#pragma once

#include <gmpxx.h>

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "silp/poly.hpp"

namespace silp {

/// Rational function P/Q in integer index variables, kept in canonical form:
/// gcd(P, Q) = 1, Q has a positive leading coefficient (graded-lex), and the
/// zero function is 0/1. Two Exprs are equal iff they denote the same function.
class Expr {
 public:
  Expr() : num_(0), den_(1) {}
  Expr(const mpq_class& q);
  Expr(long v) : Expr(mpq_class(v)) {}
  Expr(const Poly& p) : num_(p), den_(1) {}
  /// Builds num/den and canonicalizes. Throws DivisionByZero if den is zero.
  Expr(const Poly& num, const Poly& den);

  static Expr var(const std::string& name) { return Expr(Poly::var(name)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  std::set<std::string> free_vars() const;
  bool depends_on(const std::string& v) const;
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Value of a constant Expr.
  mpq_class constant_value() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr& operator/=(const Expr& o);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(Expr a, const Expr& b) { return a *= b; }
  friend Expr operator/(Expr a, const Expr& b) { return a /= b; }
  /// Integer power; negative exponents invert.
  Expr pow(long e) const;
  Expr scale(const mpq_class& q) const;

  /// Exact value. Throws UnboundVariable or DivisionByZero.
  mpq_class eval(const Binding& b) const;
  double eval_double(const Binding& b) const { return eval(b).get_d(); }

  /// Substitute an integer value for v.
  Expr fix(const std::string& v, const mpz_class& value) const;
  Expr fix(const Binding& b) const;
  /// Substitute an Expr for v.
  Expr substitute(const std::string& v, const Expr& e) const;
  Expr derivative(const std::string& v) const;
  Expr rename(const std::map<std::string, std::string>& names) const;

  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  /// Parseable rendering, e.g. "-1/(i^2 + i)".
  std::string to_string() const;

 private:
  struct Raw {};
  Expr(Raw, Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {}
  void canonicalize();
  Poly num_;
  Poly den_;
};

/// Evaluate an integer binding against a pre-fetched Expr quickly (used in
/// scan loops). Returns false when the denominator vanishes.
bool try_eval(const Expr& e, const Binding& b, mpq_class& out);

/// Parse the expression grammar: integers, p/q, identifiers, + - * / ^ with
/// integer exponents, parentheses. Throws ParseError (column is 1-based within
/// text; line is the supplied line number).
Expr parse_expr(std::string_view text, int line = 1, int column_offset = 0);

}  // namespace silp
