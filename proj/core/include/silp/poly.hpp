#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace silp {

using Binding = std::map<std::string, mpz_class>;

/// Power product over named index variables. Factors are kept sorted by
/// variable name and never carry a zero exponent.
class Monomial {
 public:
  using Factor = std::pair<std::string, unsigned>;

  Monomial() = default;
  static Monomial var(const std::string& name, unsigned exp = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  unsigned degree(const std::string& v) const;
  unsigned total_degree() const { return total_; }

  Monomial operator*(const Monomial& o) const;
  /// this / o when o divides this.
  std::optional<Monomial> divide(const Monomial& o) const;
  /// Componentwise o <= this.
  bool divisible_by(const Monomial& o) const;
  Monomial without(const std::string& v) const;

  bool operator==(const Monomial& o) const { return factors_ == o.factors_; }

  std::string to_string() const;

 private:
  std::vector<Factor> factors_;
  unsigned total_ = 0;
};

/// Graded lexicographic order (total degree, then lex by variable name).
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Sparse multivariate polynomial with integer coefficients.
class Poly {
 public:
  using Terms = std::map<Monomial, mpz_class, GrlexLess>;

  Poly() = default;
  Poly(const mpz_class& c);
  Poly(long c) : Poly(mpz_class(c)) {}
  static Poly var(const std::string& name);
  static Poly term(const mpz_class& c, const Monomial& m);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (0 if absent).
  mpz_class constant_term() const;
  /// Leading term in graded-lex order. Requires nonzero.
  const std::pair<const Monomial, mpz_class>& leading() const { return *terms_.rbegin(); }

  std::set<std::string> vars() const;
  unsigned degree(const std::string& v) const;
  unsigned total_degree() const;
  /// Coefficient of v^d, a polynomial in the remaining variables.
  Poly coeff(const std::string& v, unsigned d) const;
  /// Coefficient of the highest power of v.
  Poly leading_coeff(const std::string& v) const { return coeff(v, degree(v)); }
  /// gcd of the integer coefficients, nonnegative.
  mpz_class content() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const mpz_class& s) const;
  /// Divide every coefficient by s (must divide exactly).
  Poly divided_by(const mpz_class& s) const;
  Poly pow(unsigned e) const;

  /// Exact quotient, or nullopt if o does not divide this.
  std::optional<Poly> divide_exact(const Poly& o) const;

  mpz_class eval(const Binding& b) const;
  /// Substitute an integer for one variable.
  Poly fix(const std::string& v, const mpz_class& value) const;
  /// Substitute a polynomial for one variable.
  Poly substitute(const std::string& v, const Poly& p) const;
  Poly derivative(const std::string& v) const;
  /// Rename variables (old -> new); names not in the map are kept.
  Poly rename(const std::map<std::string, std::string>& names) const;

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  /// e.g. "3*i^2*n - 2*i + 1"
  std::string to_string() const;

 private:
  void add_term(const Monomial& m, const mpz_class& c);
  Terms terms_;
};

/// Greatest common divisor in Z[vars]; result has a positive leading coefficient
/// (gcd(0, 0) = 0).
Poly gcd(const Poly& a, const Poly& b);

}  // namespace silp
