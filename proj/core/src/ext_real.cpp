#include "silp/ext_real.hpp"

#include <cmath>
#include <sstream>

namespace silp {

double ExtReal::to_double() const {
  switch (kind_) {
    case Kind::PosInf:
      return HUGE_VAL;
    case Kind::NegInf:
      return -HUGE_VAL;
    default:
      return value_.get_d();
  }
}

ExtReal ExtReal::operator-() const {
  switch (kind_) {
    case Kind::PosInf:
      return neg_inf();
    case Kind::NegInf:
      return pos_inf();
    default:
      return ExtReal(mpq_class(-value_), exact_);
  }
}

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(mpq_class(a.value_ + b.value_), a.exact_ && b.exact_);
}

ExtReal operator*(const mpq_class& s, const ExtReal& a) {
  if (a.is_finite()) return ExtReal(mpq_class(s * a.value_), a.exact_);
  if (sgn(s) == 0) return ExtReal(0);
  return sgn(s) > 0 ? a : -a;
}

bool operator==(const ExtReal& a, const ExtReal& b) {
  if (a.kind_ != b.kind_) return false;
  return !a.is_finite() || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
  auto rank = [](const ExtReal& x) {
    return x.is_neg_inf() ? 0 : x.is_finite() ? 1 : 2;
  };
  if (rank(a) != rank(b)) return rank(a) <=> rank(b);
  if (!a.is_finite()) return std::strong_ordering::equal;
  int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

bool approx_equal(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.kind() != b.kind()) return false;
  if (!a.is_finite()) return true;
  if (a.exact() && b.exact()) return a.value() == b.value();
  mpq_class diff = abs(a.value() - b.value());
  mpq_class scale = 1 + abs(b.value());
  return diff.get_d() <= tol * scale.get_d();
}

bool definitely_less(const ExtReal& a, const ExtReal& b, double tol) {
  if (!(a < b)) return false;
  if (!a.is_finite() || !b.is_finite()) return true;
  if (a.exact() && b.exact()) return true;
  return !approx_equal(a, b, tol);
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

std::string rational_to_decimal(const mpq_class& q, int digits) {
  if (q.get_den() == 1) return q.get_num().get_str();
  std::ostringstream os;
  os.precision(digits);
  os << q.get_d();
  return os.str();
}

std::string ExtReal::to_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return rational_to_decimal(value_);
}

std::string ExtReal::to_exact_string() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return value_.get_str();
}

}  // namespace silp
