#include "silp/poly.hpp"

#include <algorithm>
#include <sstream>

#include "silp/errors.hpp"

namespace silp {

Monomial Monomial::var(const std::string& name, unsigned exp) {
  Monomial m;
  if (exp > 0) {
    m.factors_.emplace_back(name, exp);
    m.total_ = exp;
  }
  return m;
}

unsigned Monomial::degree(const std::string& v) const {
  for (const auto& [name, e] : factors_)
    if (name == v) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  r.factors_.reserve(factors_.size() + o.factors_.size());
  auto a = factors_.begin(), b = o.factors_.begin();
  while (a != factors_.end() || b != o.factors_.end()) {
    if (b == o.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      r.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      r.factors_.push_back(*b++);
    } else {
      r.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  r.total_ = total_ + o.total_;
  return r;
}

bool Monomial::divisible_by(const Monomial& o) const {
  for (const auto& [name, e] : o.factors_)
    if (degree(name) < e) return false;
  return true;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
  if (!divisible_by(o)) return std::nullopt;
  Monomial r;
  for (const auto& [name, e] : factors_) {
    unsigned d = e - o.degree(name);
    if (d > 0) r.factors_.emplace_back(name, d);
  }
  r.total_ = total_ - o.total_;
  return r;
}

Monomial Monomial::without(const std::string& v) const {
  Monomial r;
  for (const auto& f : factors_) {
    if (f.first == v) continue;
    r.factors_.push_back(f);
    r.total_ += f.second;
  }
  return r;
}

std::string Monomial::to_string() const {
  std::string s;
  for (const auto& [name, e] : factors_) {
    if (!s.empty()) s += "*";
    s += name;
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  if (a.total_degree() != b.total_degree()) return a.total_degree() < b.total_degree();
  // Lex on exponent vectors over the union of variables, variables in name order.
  auto fa = a.factors().begin(), fb = b.factors().begin();
  while (fa != a.factors().end() || fb != b.factors().end()) {
    if (fb == b.factors().end() || (fa != a.factors().end() && fa->first < fb->first))
      return false;  // a has a positive exponent where b has zero
    if (fa == a.factors().end() || fb->first < fa->first) return true;
    if (fa->second != fb->second) return fa->second < fb->second;
    ++fa;
    ++fb;
  }
  return false;
}

Poly::Poly(const mpz_class& c) {
  if (c != 0) terms_.emplace(Monomial(), c);
}

Poly Poly::var(const std::string& name) {
  Poly p;
  p.terms_.emplace(Monomial::var(name), 1);
  return p;
}

Poly Poly::term(const mpz_class& c, const Monomial& m) {
  Poly p;
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

mpz_class Poly::constant_term() const {
  auto it = terms_.find(Monomial());
  return it == terms_.end() ? mpz_class(0) : it->second;
}

std::set<std::string> Poly::vars() const {
  std::set<std::string> out;
  for (const auto& [m, c] : terms_)
    for (const auto& f : m.factors()) out.insert(f.first);
  return out;
}

unsigned Poly::degree(const std::string& v) const {
  unsigned d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree(v));
  return d;
}

unsigned Poly::total_degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree();
}

Poly Poly::coeff(const std::string& v, unsigned d) const {
  Poly r;
  for (const auto& [m, c] : terms_)
    if (m.degree(v) == d) r.terms_.emplace(m.without(v), c);
  return r;
}

mpz_class Poly::content() const {
  mpz_class g = 0;
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

void Poly::add_term(const Monomial& m, const mpz_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Poly Poly::scaled(const mpz_class& s) const {
  if (s == 0) return Poly();
  Poly r = *this;
  for (auto& [m, c] : r.terms_) c *= s;
  return r;
}

Poly Poly::divided_by(const mpz_class& s) const {
  Poly r = *this;
  for (auto& [m, c] : r.terms_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), s.get_mpz_t());
  return r;
}

Poly Poly::pow(unsigned e) const {
  Poly result(1), base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& o) const {
  if (o.is_zero()) throw DivisionByZero("polynomial division");
  if (is_zero()) return Poly();
  if (o.is_constant()) {
    const mpz_class& d = o.terms_.begin()->second;
    Poly r = *this;
    for (auto& [m, c] : r.terms_) {
      if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return std::nullopt;
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
    }
    return r;
  }
  Poly rem = *this, quot;
  const auto& [lm, lc] = o.leading();
  while (!rem.is_zero()) {
    const auto& [rm, rc] = rem.leading();
    auto qm = rm.divide(lm);
    if (!qm || !mpz_divisible_p(rc.get_mpz_t(), lc.get_mpz_t())) return std::nullopt;
    mpz_class qc;
    mpz_divexact(qc.get_mpz_t(), rc.get_mpz_t(), lc.get_mpz_t());
    Poly t = Poly::term(qc, *qm);
    quot += t;
    rem -= t * o;
  }
  return quot;
}

mpz_class Poly::eval(const Binding& b) const {
  mpz_class sum = 0, t, p;
  for (const auto& [m, c] : terms_) {
    t = c;
    for (const auto& [name, e] : m.factors()) {
      auto it = b.find(name);
      if (it == b.end()) throw UnboundVariable(name);
      mpz_pow_ui(p.get_mpz_t(), it->second.get_mpz_t(), e);
      t *= p;
    }
    sum += t;
  }
  return sum;
}

Poly Poly::fix(const std::string& v, const mpz_class& value) const {
  Poly r;
  mpz_class p;
  for (const auto& [m, c] : terms_) {
    unsigned e = m.degree(v);
    if (e == 0) {
      r.add_term(m, c);
      continue;
    }
    mpz_pow_ui(p.get_mpz_t(), value.get_mpz_t(), e);
    r.add_term(m.without(v), c * p);
  }
  return r;
}

Poly Poly::substitute(const std::string& v, const Poly& p) const {
  unsigned d = degree(v);
  if (d == 0) return *this;
  // Horner in v.
  Poly r = coeff(v, d);
  for (unsigned k = d; k-- > 0;) r = r * p + coeff(v, k);
  return r;
}

Poly Poly::derivative(const std::string& v) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    unsigned e = m.degree(v);
    if (e == 0) continue;
    r.add_term(m.without(v) * Monomial::var(v, e - 1), c * e);
  }
  return r;
}

Poly Poly::rename(const std::map<std::string, std::string>& names) const {
  Poly r;
  for (const auto& [m, c] : terms_) {
    Monomial nm;
    for (const auto& [name, e] : m.factors()) {
      auto it = names.find(name);
      nm = nm * Monomial::var(it == names.end() ? name : it->second, e);
    }
    r.add_term(nm, c);
  }
  return r;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    mpz_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (m.is_one()) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << m.to_string();
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// gcd: recursive primitive polynomial remainder sequences.

namespace {

Poly normalize_sign(Poly p) {
  if (!p.is_zero() && p.leading().second < 0) return -p;
  return p;
}

Poly gcd_impl(const Poly& a, const Poly& b);

/// gcd of the coefficients of p viewed as a polynomial in v.
Poly content_in(const Poly& p, const std::string& v) {
  Poly g;
  for (unsigned d = 0, deg = p.degree(v); d <= deg; ++d) {
    Poly c = p.coeff(v, d);
    if (c.is_zero()) continue;
    g = gcd_impl(g, c);
    if (g.is_constant() && g.constant_term() == 1) break;
  }
  return g;
}

/// Pseudo-remainder of a by b in v.
Poly prem(Poly a, const Poly& b, const std::string& v) {
  unsigned db = b.degree(v);
  Poly lb = b.coeff(v, db);
  while (!a.is_zero() && a.degree(v) >= db) {
    unsigned da = a.degree(v);
    Poly la = a.coeff(v, da);
    Poly shift = la * Poly::term(1, Monomial::var(v, da - db));
    a = lb * a - shift * b;
  }
  return a;
}

Poly gcd_impl(const Poly& a, const Poly& b) {
  if (a.is_zero()) return normalize_sign(b);
  if (b.is_zero()) return normalize_sign(a);
  if (a.is_constant() || b.is_constant()) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    return Poly(g);
  }
  std::set<std::string> va = a.vars(), vb = b.vars();
  // Main variable: smallest name present in both, if any.
  std::string main;
  for (const auto& v : va)
    if (vb.count(v)) {
      main = v;
      break;
    }
  if (main.empty()) {
    // No shared variable: gcd divides the content of each with respect to any variable.
    const std::string& v = *va.begin();
    return gcd_impl(content_in(a, v), b);
  }
  Poly ca = content_in(a, main), cb = content_in(b, main);
  Poly pa = *a.divide_exact(ca), pb = *b.divide_exact(cb);
  Poly c = gcd_impl(ca, cb);
  if (pa.degree(main) < pb.degree(main)) std::swap(pa, pb);
  while (true) {
    Poly r = prem(pa, pb, main);
    if (r.is_zero()) break;
    if (r.degree(main) == 0) {
      pb = Poly(1);
      break;
    }
    pa = std::move(pb);
    pb = *r.divide_exact(content_in(r, main));
  }
  if (!(pb.is_constant())) pb = *pb.divide_exact(content_in(pb, main));
  else pb = Poly(1);
  return normalize_sign(c * pb);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(a, b); }

}  // namespace silp
