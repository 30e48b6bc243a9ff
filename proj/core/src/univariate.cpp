#include "univariate.hpp"

#include <algorithm>
#include <set>

#include "silp/errors.hpp"

namespace silp::detail {

UPoly UPoly::from(const Poly& p, const std::string& v) {
  UPoly u;
  for (const auto& [m, coef] : p.terms()) {
    unsigned d = m.degree(v);
    if (m.total_degree() != d) throw Error("internal: polynomial is not univariate in " + v);
    if (u.c.size() <= d) u.c.resize(d + 1, mpq_class(0));
    u.c[d] += mpq_class(coef);
  }
  u.trim();
  return u;
}

void UPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

mpq_class UPoly::eval(const mpq_class& x) const {
  mpq_class r = 0;
  for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
  return r;
}

UPoly UPoly::derivative() const {
  UPoly d;
  for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * static_cast<long>(k));
  d.trim();
  return d;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  UPoly r;
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  UPoly r;
  r.c.assign(std::max(a.c.size(), b.c.size()), mpq_class(0));
  for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.trim();
  return r;
}

namespace {

void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  if (b.is_zero()) throw DivisionByZero("polynomial remainder");
  r = a;
  q.c.assign(a.c.size() >= b.c.size() ? a.c.size() - b.c.size() + 1 : 0, mpq_class(0));
  const mpq_class& lb = b.c.back();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    std::size_t shift = r.c.size() - b.c.size();
    mpq_class f = r.c.back() / lb;
    q.c[shift] = f;
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i + shift] -= f * b.c[i];
    r.c.pop_back();
    r.trim();
  }
  q.trim();
}

}  // namespace

UPoly rem(const UPoly& a, const UPoly& b) {
  UPoly q, r;
  divmod(a, b, q, r);
  return r;
}

UPoly quo(const UPoly& a, const UPoly& b) {
  UPoly q, r;
  divmod(a, b, q, r);
  return q;
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.is_zero()) {
    mpq_class lc = a.c.back();
    for (auto& x : a.c) x /= lc;
  }
  return a;
}

mpz_class cauchy_bound(const UPoly& p) {
  if (p.degree() <= 0) return 1;
  mpq_class m = 0;
  for (int k = 0; k < p.degree(); ++k) {
    mpq_class r = abs(p.c[k] / p.c.back());
    if (r > m) m = r;
  }
  mpz_class b;
  mpz_cdiv_q(b.get_mpz_t(), m.get_num_mpz_t(), m.get_den_mpz_t());
  return b + 2;
}

namespace {

/// Sturm-based isolation with on-the-fly deflation of exact integer roots.
class Isolator {
 public:
  explicit Isolator(const UPoly& p) {
    UPoly d = p.derivative();
    p_ = d.is_zero() ? p : quo(p, gcd(p, d));
    rebuild();
  }

  void run(const mpz_class& lo, const mpz_class& hi, std::set<mpz_class>& out) {
    if (p_.degree() <= 0 || hi < lo) return;
    if (p_.sign_at(lo) == 0) {
      out.insert(lo);
      deflate(lo);
    }
    iso(lo, hi, out);
  }

 private:
  void rebuild() {
    seq_.clear();
    if (p_.degree() <= 0) return;
    seq_.push_back(p_);
    seq_.push_back(p_.derivative());
    while (!seq_.back().is_zero() && seq_.back().degree() > 0) {
      UPoly r = rem(seq_[seq_.size() - 2], seq_.back());
      if (r.is_zero()) break;
      for (auto& x : r.c) x = -x;
      seq_.push_back(r);
    }
  }

  void deflate(const mpz_class& root) {
    UPoly lin;
    lin.c = {mpq_class(-root), mpq_class(1)};
    p_ = quo(p_, lin);
    rebuild();
  }

  int variations(const mpq_class& x) const {
    int v = 0, last = 0;
    for (const auto& s : seq_) {
      int g = s.sign_at(x);
      if (g == 0) continue;
      if (last != 0 && g != last) ++v;
      last = g;
    }
    return v;
  }

  /// Roots in (a, b]; requires p(a) != 0.
  int count(const mpz_class& a, const mpz_class& b) const {
    if (seq_.empty()) return 0;
    return variations(mpq_class(a)) - variations(mpq_class(b));
  }

  void iso(const mpz_class& a, const mpz_class& b, std::set<mpz_class>& out) {
    if (b <= a || seq_.empty()) return;
    if (count(a, b) == 0) return;
    if (b - a <= 1) {
      out.insert(a);
      return;
    }
    mpz_class mid = (a + b) / 2;
    if (p_.sign_at(mpq_class(mid)) == 0) {
      out.insert(mid);
      deflate(mid);
    }
    iso(a, mid, out);
    iso(mid, b, out);
  }

  UPoly p_;
  std::vector<UPoly> seq_;
};

}  // namespace

std::vector<mpz_class> root_brackets(const UPoly& p, const mpz_class& lo, const mpz_class& hi) {
  std::set<mpz_class> out;
  if (p.degree() > 0) Isolator(p).run(lo, hi, out);
  return {out.begin(), out.end()};
}

namespace {

/// Upper end of the analysed range: hi if finite, else a point beyond every
/// real root of the given polynomial (and not below lo).
mpz_class range_top(const UPoly& roots_of, const mpz_class& lo, const std::optional<mpz_class>& hi) {
  if (hi) return *hi;
  mpz_class m = cauchy_bound(roots_of);
  return m > lo ? m : mpz_class(lo);
}

/// Candidate integers: lo, top, both ends of every root bracket, and the
/// successor of each of these (clipped to [lo, top]).
std::vector<mpz_class> candidates(const UPoly& roots_of, const mpz_class& lo,
                                  const mpz_class& top) {
  std::set<mpz_class> base{lo, top};
  for (const auto& k : root_brackets(roots_of, lo, top)) {
    base.insert(k);
    if (k + 1 <= top) base.insert(k + 1);
  }
  std::set<mpz_class> all = base;
  for (const auto& k : base)
    if (k + 1 <= top) all.insert(k + 1);
  return {all.begin(), all.end()};
}

std::string single_var(const Expr& f) {
  auto vars = f.free_vars();
  if (vars.size() > 1) throw Error("internal: expected a univariate expression");
  return vars.empty() ? std::string() : *vars.begin();
}

mpq_class at(const Expr& f, const std::string& v, const mpz_class& x) {
  if (v.empty()) return f.constant_value();
  return f.eval(Binding{{v, x}});
}

}  // namespace

ExtReal ulimit(const Expr& f, const std::string& v) {
  if (f.is_constant()) return ExtReal(f.constant_value());
  unsigned dp = f.num().degree(v), dq = f.den().degree(v);
  if (dp < dq) return ExtReal(0);
  mpq_class ratio(f.num().coeff(v, dp).constant_term(), f.den().coeff(v, dq).constant_term());
  ratio.canonicalize();
  if (dp == dq) return ExtReal(ratio);
  return sgn(ratio) > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
}

std::vector<Segment> sign_segments(const Expr& f, const std::string& var, const mpz_class& lo,
                                   const std::optional<mpz_class>& hi) {
  std::string v = single_var(f);
  if (!v.empty() && v != var) throw Error("internal: sign_segments variable mismatch");
  std::vector<Segment> segs;
  if (hi && *hi < lo) return segs;
  if (v.empty()) {
    segs.push_back({lo, hi, sgn(f.constant_value())});
    return segs;
  }
  UPoly pq = UPoly::from(f.num(), v) * UPoly::from(f.den(), v);
  mpz_class top = range_top(pq, lo, hi);
  auto cand = candidates(pq, lo, top);
  for (std::size_t k = 0; k < cand.size(); ++k) {
    int s = sgn(at(f, v, cand[k]));
    std::optional<mpz_class> end;
    if (k + 1 < cand.size())
      end = cand[k + 1] - 1;
    else
      end = hi;  // last candidate is top: finite hi, or the monotone tail
    if (!segs.empty() && segs.back().sign == s)
      segs.back().b = end;
    else
      segs.push_back({cand[k], end, s});
  }
  return segs;
}

USup usup(const Expr& f, const std::string& var, const mpz_class& lo,
          const std::optional<mpz_class>& hi) {
  USup r;
  if (hi && *hi < lo) return r;  // -inf
  std::string v = single_var(f);
  if (v.empty()) {
    r.value = ExtReal(f.constant_value());
    r.attained = true;
    r.arg = lo;
    return r;
  }
  if (v != var) throw Error("internal: usup variable mismatch");
  UPoly p = UPoly::from(f.num(), v), q = UPoly::from(f.den(), v);
  UPoly d = p.derivative() * q - p * q.derivative();
  UPoly crit = d.is_zero() ? q : d * q;
  // Beyond the top the function is monotone and has no poles.
  UPoly all = crit * p;
  mpz_class top = range_top(all, lo, hi);
  bool have = false;
  mpq_class best;
  for (const auto& x : candidates(crit, lo, top)) {
    mpq_class val = at(f, v, x);
    if (!have || val > best) {
      best = val;
      r.arg = x;
      have = true;
    }
  }
  r.value = ExtReal(best);
  r.attained = true;
  if (!hi) {
    ExtReal lim = ulimit(f, v);
    if (lim > r.value) {
      r.value = lim;
      r.attained = false;
      r.escapes = true;
    }
  }
  return r;
}

}  // namespace silp::detail
