#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace silp {

/// Extended real: a finite rational, +inf or -inf.
///
/// Values produced by exact routines carry `exact = true`. Numeric estimates
/// (the delta-schedule limit of omega) are still stored as rationals but are
/// flagged inexact, and comparisons that drive a classification then use the
/// 1e-9 relative tolerance from `approx_equal`.
class ExtReal {
 public:
  enum class Kind { Finite, PosInf, NegInf };

  ExtReal() : kind_(Kind::NegInf) {}
  ExtReal(const mpq_class& v, bool exact = true) : kind_(Kind::Finite), value_(v), exact_(exact) {}
  ExtReal(long v) : kind_(Kind::Finite), value_(v) {}

  static ExtReal pos_inf() { return ExtReal(Kind::PosInf); }
  static ExtReal neg_inf() { return ExtReal(Kind::NegInf); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool exact() const { return exact_; }
  void set_exact(bool e) { exact_ = e; }

  /// Only meaningful when finite.
  const mpq_class& value() const { return value_; }
  double to_double() const;

  ExtReal operator-() const;
  /// inf + (-inf) is treated as -inf (sup of an empty family), which is the
  /// only way the engine combines opposite infinities.
  friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
  friend ExtReal operator*(const mpq_class& s, const ExtReal& a);

  friend bool operator==(const ExtReal& a, const ExtReal& b);
  friend std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b);

  /// Decimal or "inf"/"-inf" rendering used by JSON reports.
  std::string to_string() const;
  /// Exact rendering: "p/q", "inf" or "-inf".
  std::string to_exact_string() const;

 private:
  explicit ExtReal(Kind k) : kind_(k) {}
  Kind kind_;
  mpq_class value_{0};
  bool exact_ = true;
};

ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal min(const ExtReal& a, const ExtReal& b);

/// |a - b| <= tol * (1 + |b|) for finite values; equal kinds for infinities.
bool approx_equal(const ExtReal& a, const ExtReal& b, double tol = 1e-9);

/// Strict a < b. Exact when both are exact, otherwise requires a margin of tol.
bool definitely_less(const ExtReal& a, const ExtReal& b, double tol = 1e-9);

std::string rational_to_string(const mpq_class& q);
std::string rational_to_decimal(const mpq_class& q, int digits = 12);

}  // namespace silp
