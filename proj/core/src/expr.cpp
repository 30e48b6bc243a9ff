#include "silp/expr.hpp"

#include <cctype>

#include "silp/errors.hpp"

namespace silp {

Expr::Expr(const mpq_class& q) : num_(mpz_class(q.get_num())), den_(mpz_class(q.get_den())) {}

Expr::Expr(const Poly& num, const Poly& den) : num_(num), den_(den) {
  if (den_.is_zero()) throw DivisionByZero("denominator is identically zero");
  canonicalize();
}

void Expr::canonicalize() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  if (den_.is_constant() && num_.is_constant()) {
    mpq_class q(num_.constant_term(), den_.constant_term());
    q.canonicalize();
    num_ = Poly(mpz_class(q.get_num()));
    den_ = Poly(mpz_class(q.get_den()));
    return;
  }
  Poly g = gcd(num_, den_);
  if (!(g.is_constant() && g.constant_term() == 1)) {
    num_ = *num_.divide_exact(g);
    den_ = *den_.divide_exact(g);
  }
  if (den_.leading().second < 0) {
    num_ = -num_;
    den_ = -den_;
  }
}

std::set<std::string> Expr::free_vars() const {
  auto v = num_.vars();
  auto d = den_.vars();
  v.insert(d.begin(), d.end());
  return v;
}

bool Expr::depends_on(const std::string& v) const {
  return num_.degree(v) > 0 || den_.degree(v) > 0;
}

mpq_class Expr::constant_value() const {
  mpq_class q(num_.constant_term(), den_.constant_term());
  q.canonicalize();
  return q;
}

Expr Expr::operator-() const { return Expr(Raw{}, -num_, den_); }

Expr& Expr::operator+=(const Expr& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
  } else {
    num_ = num_ * o.den_ + o.num_ * den_;
    den_ = den_ * o.den_;
  }
  canonicalize();
  return *this;
}

Expr& Expr::operator-=(const Expr& o) { return *this += -o; }

Expr& Expr::operator*=(const Expr& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  canonicalize();
  return *this;
}

Expr& Expr::operator/=(const Expr& o) {
  if (o.is_zero()) throw DivisionByZero("divisor is identically zero");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  canonicalize();
  return *this;
}

Expr Expr::pow(long e) const {
  if (e < 0) {
    if (is_zero()) throw DivisionByZero("negative power of zero");
    return Expr(den_.pow(static_cast<unsigned>(-e)), num_.pow(static_cast<unsigned>(-e)));
  }
  return Expr(Raw{}, num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
}

Expr Expr::scale(const mpq_class& q) const { return *this * Expr(q); }

mpq_class Expr::eval(const Binding& b) const {
  mpz_class d = den_.eval(b);
  if (d == 0) throw DivisionByZero("denominator " + den_.to_string() + " vanishes");
  mpq_class q(num_.eval(b), d);
  q.canonicalize();
  return q;
}

bool try_eval(const Expr& e, const Binding& b, mpq_class& out) {
  mpz_class d = e.den().eval(b);
  if (d == 0) return false;
  out = mpq_class(e.num().eval(b), d);
  out.canonicalize();
  return true;
}

Expr Expr::fix(const std::string& v, const mpz_class& value) const {
  if (!depends_on(v)) return *this;
  Poly d = den_.fix(v, value);
  if (d.is_zero())
    throw DivisionByZero("denominator vanishes at " + v + "=" + value.get_str());
  return Expr(num_.fix(v, value), d);
}

Expr Expr::fix(const Binding& b) const {
  Expr r = *this;
  for (const auto& [v, value] : b) r = r.fix(v, value);
  return r;
}

Expr Expr::substitute(const std::string& v, const Expr& e) const {
  if (!depends_on(v)) return *this;
  // Homogenize: p(v) with v = a/c becomes c^deg * p(a/c) / c^deg.
  unsigned deg = std::max(num_.degree(v), den_.degree(v));
  auto homog = [&](const Poly& p) {
    Poly r;
    for (unsigned k = 0; k <= deg; ++k) {
      Poly ck = p.coeff(v, k);
      if (ck.is_zero()) continue;
      r += ck * e.num().pow(k) * e.den().pow(deg - k);
    }
    return r;
  };
  return Expr(homog(num_), homog(den_));
}

Expr Expr::derivative(const std::string& v) const {
  return Expr(num_.derivative(v) * den_ - num_ * den_.derivative(v), den_ * den_);
}

Expr Expr::rename(const std::map<std::string, std::string>& names) const {
  return Expr(num_.rename(names), den_.rename(names));
}

namespace {

bool simple_factor(const Poly& p) {
  if (p.terms().size() != 1) return false;
  const auto& [m, c] = *p.terms().begin();
  if (m.is_one()) return c > 0;
  return c == 1 && m.factors().size() == 1;
}

}  // namespace

std::string Expr::to_string() const {
  if (den_.is_constant() && den_.constant_term() == 1) return num_.to_string();
  std::string n = num_.to_string();
  if (num_.terms().size() > 1) n = "(" + n + ")";
  std::string d = den_.to_string();
  if (!simple_factor(den_)) d = "(" + d + ")";
  return n + "/" + d;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view s, int line, int col0) : s_(s), line_(line), col0_(col0) {}

  Expr parse() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_) + 1);
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr expr() {
    Expr e = term();
    while (true) {
      if (accept('+'))
        e += term();
      else if (accept('-'))
        e -= term();
      else
        return e;
    }
  }

  Expr term() {
    Expr e = unary();
    while (true) {
      if (accept('*')) {
        e *= unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        e /= d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_ws();
    std::size_t at = pos_;
    bool neg = accept('-');
    Expr ex = primary();
    if (!ex.is_constant() || ex.constant_value().get_den() != 1) {
      pos_ = at;
      fail("exponent must be an integer constant");
    }
    mpz_class k = ex.constant_value().get_num();
    if (neg) k = -k;
    if (abs(k) > 64) {
      pos_ = at;
      fail("exponent too large");
    }
    if (k < 0 && base.is_zero()) {
      pos_ = at;
      fail("division by zero");
    }
    return base.pow(k.get_si());
  }

  Expr primary() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Expr(mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      return Expr::var(std::string(s_.substr(start, pos_ - start)));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  int col0_;
};

}  // namespace

Expr parse_expr(std::string_view text, int line, int column_offset) {
  return ExprParser(text, line, column_offset).parse();
}

}  // namespace silp
