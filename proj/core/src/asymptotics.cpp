#include "silp/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "silp/errors.hpp"
#include "univariate.hpp"

namespace silp {

std::string to_string(Sign s) {
  switch (s) {
    case Sign::NonNegative:
      return "NonNegative";
    case Sign::NonPositive:
      return "NonPositive";
    case Sign::IdenticallyZero:
      return "IdenticallyZero";
    case Sign::Mixed:
      return "Mixed";
    default:
      return "Unknown";
  }
}

std::string Witness::to_string() const {
  std::string s;
  for (const auto& [v, x] : fixed) {
    if (!s.empty()) s += ", ";
    s += v + "=" + x.get_str();
  }
  for (const auto& v : escaping) {
    if (!s.empty()) s += ", ";
    s += v + "->inf";
  }
  return s.empty() ? "single row" : s;
}

namespace {

// ---------------------------------------------------------------------------
// Sign bookkeeping

struct SignSeen {
  bool pos = false, neg = false, zero = false, unknown = false;
  std::optional<Binding> pos_at, neg_at;

  void add(int s, const Binding& at) {
    if (s > 0 && !pos) {
      pos = true;
      pos_at = at;
    } else if (s < 0 && !neg) {
      neg = true;
      neg_at = at;
    } else if (s == 0) {
      zero = true;
    }
  }
  bool mixed() const { return pos && neg; }

  SignResult result() const {
    SignResult r;
    if (mixed()) {
      r.sign = Sign::Mixed;
      r.positive_at = pos_at;
      r.negative_at = neg_at;
    } else if (unknown) {
      r.sign = Sign::Unknown;
    } else if (pos) {
      r.sign = Sign::NonNegative;
      r.strict = !zero;
    } else if (neg) {
      r.sign = Sign::NonPositive;
      r.strict = !zero;
    } else {
      r.sign = Sign::IdenticallyZero;
    }
    return r;
  }
};

void check_vars(const Expr& e, const IndexDomain& dom) {
  for (const auto& v : e.free_vars())
    if (!dom.has(v)) throw UnboundVariable(v);
}

/// +1 (> 0 everywhere), +2 (>= 0), -1 (< 0), -2 (<= 0), 0 (unknown) for a
/// polynomial over the real box obtained from dom by coefficient inspection
/// after shifting each axis to an anchored corner.
int poly_sign_shift(const Poly& p, const IndexDomain& dom) {
  if (p.is_zero()) return 0;
  std::vector<const Axis*> axes;
  for (const auto& v : p.vars()) axes.push_back(dom.find(v));
  std::vector<std::size_t> finite_ix;
  for (std::size_t k = 0; k < axes.size(); ++k)
    if (axes[k]->hi) finite_ix.push_back(k);
  std::size_t combos = std::size_t(1) << std::min<std::size_t>(finite_ix.size(), 4);
  for (std::size_t mask = 0; mask < combos; ++mask) {
    Poly q = p;
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const Axis& a = *axes[k];
      bool reflect = false;
      for (std::size_t f = 0; f < finite_ix.size() && f < 4; ++f)
        if (finite_ix[f] == k && (mask >> f) & 1u) reflect = true;
      Poly t = Poly::var(a.name);
      q = q.substitute(a.name, reflect ? Poly(*a.hi) - t : Poly(a.lo) + t);
    }
    bool nonneg = true, nonpos = true;
    for (const auto& [m, c] : q.terms()) {
      if (c < 0) nonneg = false;
      if (c > 0) nonpos = false;
    }
    mpz_class c0 = q.constant_term();
    if (nonneg) return c0 > 0 ? 1 : 2;
    if (nonpos) return c0 < 0 ? -1 : -2;
  }
  return 0;
}

void enumerate_sign(const Expr& e, const IndexDomain& dom, SignSeen& seen) {
  mpq_class v;
  for_each_point(dom, [&](const Binding& b) {
    if (!try_eval(e, b, v)) throw DivisionByZero("denominator vanishes on the domain");
    seen.add(sgn(v), b);
    return !seen.mixed();
  });
}

/// Sampled points per axis: small values plus a geometric tail.
std::vector<mpz_class> sample_axis(const Axis& a, std::size_t max_points) {
  std::vector<mpz_class> pts;
  auto push = [&](const mpz_class& x) {
    if (x < a.lo || (a.hi && x > *a.hi)) return;
    if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(x);
  };
  for (long k = 0; k < 12; ++k) push(a.lo + k);
  for (long k : {20L, 50L, 100L, 1000L, 10000L, 1000000L}) push(a.lo + k);
  if (a.hi) push(*a.hi);
  if (pts.size() > max_points) pts.resize(max_points);
  return pts;
}

void sample_sign(const Expr& e, const IndexDomain& dom, SignSeen& seen) {
  std::size_t per = dom.axes.size() <= 1 ? 20 : dom.axes.size() == 2 ? 19 : 8;
  IndexDomain grid;
  std::vector<std::vector<mpz_class>> pts;
  for (const auto& a : dom.axes) pts.push_back(sample_axis(a, per));
  std::vector<std::size_t> ix(pts.size(), 0);
  Binding b;
  mpq_class v;
  while (true) {
    for (std::size_t k = 0; k < pts.size(); ++k) b[dom.axes[k].name] = pts[k][ix[k]];
    if (try_eval(e, b, v)) seen.add(sgn(v), b);
    if (seen.mixed()) return;
    std::size_t k = pts.size();
    while (k > 0) {
      if (++ix[k - 1] < pts[k - 1].size()) break;
      ix[k - 1] = 0;
      --k;
    }
    if (k == 0) return;
  }
}

SignResult sign_rec(const Expr& e, const IndexDomain& dom, const Budget& budget);

void merge_sub(const SignResult& r, const std::string& v, const mpz_class& x, SignSeen& seen) {
  auto with = [&](const std::optional<Binding>& b) {
    Binding out = b ? *b : Binding{};
    out[v] = x;
    return out;
  };
  switch (r.sign) {
    case Sign::NonNegative:
      seen.add(1, with(std::nullopt));
      if (!r.strict) seen.zero = true;
      break;
    case Sign::NonPositive:
      seen.add(-1, with(std::nullopt));
      if (!r.strict) seen.zero = true;
      break;
    case Sign::IdenticallyZero:
      seen.zero = true;
      break;
    case Sign::Mixed:
      seen.add(1, with(r.positive_at));
      seen.add(-1, with(r.negative_at));
      break;
    default:
      seen.unknown = true;
  }
}

SignResult sign_rec(const Expr& e, const IndexDomain& full, const Budget& budget) {
  if (full.empty_product()) return {Sign::IdenticallyZero, false, {}, {}};
  if (e.is_zero()) return {Sign::IdenticallyZero, false, {}, {}};
  auto vars = e.free_vars();
  IndexDomain dom = full.restricted({vars.begin(), vars.end()});
  if (vars.empty()) {
    int s = sgn(e.constant_value());
    return {s > 0 ? Sign::NonNegative : Sign::NonPositive, true, {}, {}};
  }
  SignSeen seen;
  if (vars.size() == 1) {
    const Axis& a = dom.axes.front();
    for (const auto& seg : detail::sign_segments(e, a.name, a.lo, a.hi)) {
      seen.add(seg.sign, Binding{{a.name, seg.a}});
      if (seg.sign == 0 && seg.b != seg.a) seen.zero = true;
    }
    return seen.result();
  }
  int sn = poly_sign_shift(e.num(), dom);
  int sd = sn == 0 ? 0 : poly_sign_shift(e.den(), dom);
  if (sn != 0 && sd != 0) {
    bool pos = (sn > 0) == (sd > 0);
    bool strict = std::abs(sn) == 1 && std::abs(sd) == 1;
    if (std::abs(sd) == 2) {
      // Denominator may touch zero only where the function is undefined; the
      // sign verdict is unaffected but strictness is not claimed.
      strict = false;
    }
    return {pos ? Sign::NonNegative : Sign::NonPositive, strict, {}, {}};
  }
  if (auto n = dom.count(); n && *n <= budget.total) {
    enumerate_sign(e, dom, seen);
    return seen.result();
  }
  // Split along the narrowest finite axis when it is short.
  const Axis* narrow = nullptr;
  for (const auto& a : dom.axes)
    if (a.hi && (!narrow || *a.hi - a.lo < *narrow->hi - narrow->lo)) narrow = &a;
  if (narrow && *narrow->hi - narrow->lo < 256) {
    IndexDomain rest = dom.without(narrow->name);
    for (mpz_class x = narrow->lo; x <= *narrow->hi; ++x) {
      merge_sub(sign_rec(e.fix(narrow->name, x), rest, budget), narrow->name, x, seen);
      if (seen.mixed()) break;
    }
    return seen.result();
  }
  sample_sign(e, dom, seen);
  if (seen.mixed()) return seen.result();
  return {Sign::Unknown, false, {}, {}};
}

// ---------------------------------------------------------------------------
// Limits

int eventual_sign(Poly p, const std::vector<std::string>& order, std::size_t from) {
  for (std::size_t k = from; k < order.size(); ++k) p = p.leading_coeff(order[k]);
  if (!p.is_constant()) return 0;
  return sgn(p.constant_term());
}

/// Iterated limit innermost-first along order; f depends only on order's variables.
/// Returns nullopt when a sign could not be decided.
std::optional<ExtReal> iterated(const Expr& f, const std::vector<std::string>& order,
                                std::size_t k) {
  if (f.is_constant()) return ExtReal(f.constant_value());
  if (k >= order.size()) return std::nullopt;
  const std::string& v = order[k];
  unsigned dp = f.num().degree(v), dq = f.den().degree(v);
  if (dp < dq) return ExtReal(0);
  Poly lp = f.num().coeff(v, dp), lq = f.den().coeff(v, dq);
  if (dp == dq) return iterated(Expr(lp, lq), order, k + 1);
  int s = eventual_sign(lp, order, k + 1) * eventual_sign(lq, order, k + 1);
  if (s == 0) return std::nullopt;
  return s > 0 ? ExtReal::pos_inf() : ExtReal::neg_inf();
}

bool dominated_by_positive(const Poly& n, const Poly& q, const std::vector<std::string>& vars) {
  for (const auto& [m, c] : q.terms())
    if (c <= 0) return false;
  for (const auto& [mn, cn] : n.terms()) {
    bool ok = false;
    for (const auto& [mq, cq] : q.terms()) {
      bool le = true, strict = false;
      for (const auto& v : vars) {
        unsigned a = mn.degree(v), b = mq.degree(v);
        if (a > b) le = false;
        if (a < b) strict = true;
      }
      if (le && strict) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Suprema

SupResult from_usup(const detail::USup& u, const std::string& v) {
  SupResult r;
  r.value = u.value;
  r.attained = u.attained;
  if (u.escapes)
    r.witness.escaping.push_back(v);
  else if (!v.empty())
    r.witness.fixed[v] = u.arg;
  return r;
}

void better(SupResult& best, SupResult cand) {
  if (best.value < cand.value || (best.value == cand.value && !best.attained && cand.attained)) {
    bool cert = best.certified && cand.certified;
    best = std::move(cand);
    best.certified = cert;
  } else {
    best.certified = best.certified && cand.certified;
  }
}

SupResult scan_fallback(const Expr& f, const IndexDomain& dom, const Budget& budget) {
  SupResult best;
  best.value = ExtReal::neg_inf();
  std::size_t dims = dom.axes.size();
  long per = static_cast<long>(std::floor(std::pow(static_cast<double>(budget.total),
                                                   1.0 / static_cast<double>(dims))));
  per = std::max(2L, std::min(per, budget.per_axis));
  IndexDomain grid;
  for (const auto& a : dom.axes) {
    Axis g = a;
    mpz_class top = a.lo + per - 1;
    g.hi = a.hi && *a.hi < top ? *a.hi : top;
    grid.axes.push_back(g);
  }
  mpq_class v;
  for_each_point(grid, [&](const Binding& b) {
    if (try_eval(f, b, v) && (best.value < ExtReal(v) || best.value.is_neg_inf())) {
      best.value = ExtReal(v);
      best.attained = true;
      best.witness = Witness{b, {}};
    }
    return true;
  });
  // Escaping subsets of the unbounded axes, others on a coarse grid.
  std::vector<std::string> open;
  for (const auto& a : dom.axes)
    if (!a.hi) open.push_back(a.name);
  for (std::size_t mask = 1; mask < (std::size_t(1) << open.size()); ++mask) {
    std::vector<std::string> esc;
    for (std::size_t k = 0; k < open.size(); ++k)
      if (mask >> k & 1u) esc.push_back(open[k]);
    IndexDomain rest;
    for (const auto& a : grid.axes)
      if (std::find(esc.begin(), esc.end(), a.name) == esc.end()) {
        Axis c = a;
        if (*c.hi - c.lo > 50) c.hi = c.lo + 50;
        rest.axes.push_back(c);
      }
    for_each_point(rest, [&](const Binding& b) {
      try {
        auto lim = limit_at_infinity(f, esc, b);
        if (lim.exists && best.value < lim.value) {
          best.value = lim.value;
          best.attained = false;
          best.witness = Witness{b, esc};
        }
      } catch (const Error&) {
      }
      return true;
    });
    if (rest.axes.empty()) {
      try {
        auto lim = limit_at_infinity(f, esc, {});
        if (lim.exists && best.value < lim.value) {
          best.value = lim.value;
          best.attained = false;
          best.witness = Witness{{}, esc};
        }
      } catch (const Error&) {
      }
    }
  }
  best.certified = false;
  return best;
}

SupResult sup_rec(const Expr& f, const IndexDomain& full, const Budget& budget) {
  SupResult r;
  if (full.empty_product()) {
    r.value = ExtReal::neg_inf();
    return r;
  }
  auto vars = f.free_vars();
  IndexDomain dom = full.restricted({vars.begin(), vars.end()});
  if (vars.empty()) {
    r.value = ExtReal(f.constant_value());
    r.attained = true;
    return r;
  }
  if (vars.size() == 1) {
    const Axis& a = dom.axes.front();
    return from_usup(detail::usup(f, a.name, a.lo, a.hi), a.name);
  }
  for (const auto& a : dom.axes) {
    const std::string& v = a.name;
    if (a.hi && *a.hi == a.lo) {
      SupResult s = sup_rec(f.fix(v, a.lo), dom.without(v), budget);
      s.witness.fixed[v] = a.lo;
      return s;
    }
    Expr step = f.substitute(v, Expr(Poly::var(v) + Poly(1))) - f;
    IndexDomain sdom = dom;
    for (auto& x : sdom.axes)
      if (x.name == v && x.hi) x.hi = *x.hi - 1;
    SignResult s = sign_rec(step, sdom, budget);
    IndexDomain rest = dom.without(v);
    if (s.sign == Sign::NonPositive || s.sign == Sign::IdenticallyZero) {
      SupResult sub = sup_rec(f.fix(v, a.lo), rest, budget);
      if (!sub.value.is_neg_inf()) sub.witness.fixed[v] = a.lo;
      return sub;
    }
    if (s.sign != Sign::NonNegative) continue;
    if (a.hi) {
      SupResult sub = sup_rec(f.fix(v, *a.hi), rest, budget);
      sub.witness.fixed[v] = *a.hi;
      return sub;
    }
    unsigned dp = f.num().degree(v), dq = f.den().degree(v);
    Poly lq = f.den().coeff(v, dq);
    SignResult lqs = sign_rec(Expr(lq), rest, budget);
    if (!lqs.strict || (lqs.sign != Sign::NonNegative && lqs.sign != Sign::NonPositive)) continue;
    SupResult sub;
    if (dp > dq) {
      sub.value = ExtReal::pos_inf();
      sub.witness.fixed = rest.lowest();
    } else {
      Expr g = dp < dq ? Expr(0) : Expr(f.num().coeff(v, dp), lq);
      sub = sup_rec(g, rest, budget);
    }
    sub.witness.escaping.insert(sub.witness.escaping.begin(), v);
    sub.attained = false;
    return sub;
  }
  // No certified monotone axis: enumerate a short finite axis, else scan.
  const Axis* narrow = nullptr;
  for (const auto& a : dom.axes)
    if (a.hi && (!narrow || *a.hi - a.lo < *narrow->hi - narrow->lo)) narrow = &a;
  if (narrow && *narrow->hi - narrow->lo < 4096) {
    SupResult best;
    best.value = ExtReal::neg_inf();
    IndexDomain rest = dom.without(narrow->name);
    for (mpz_class x = narrow->lo; x <= *narrow->hi; ++x) {
      SupResult sub = sup_rec(f.fix(narrow->name, x), rest, budget);
      sub.witness.fixed[narrow->name] = x;
      better(best, std::move(sub));
    }
    return best;
  }
  return scan_fallback(f, dom, budget);
}

void complete_witness(SupResult& r, const IndexDomain& dom) {
  for (const auto& a : dom.axes) {
    bool esc = std::find(r.witness.escaping.begin(), r.witness.escaping.end(), a.name) !=
               r.witness.escaping.end();
    if (!esc && !r.witness.fixed.count(a.name)) r.witness.fixed[a.name] = a.lo;
  }
}

}  // namespace

SignResult sign_over(const Expr& e, const IndexDomain& dom, const Budget& budget) {
  check_vars(e, dom);
  return sign_rec(e, dom, budget);
}

LimitResult limit_at_infinity(const Expr& e, const std::vector<std::string>& escaping,
                              const Binding& fixed) {
  if (escaping.empty()) throw Error("limit_at_infinity needs at least one escaping variable");
  Expr f = e;
  for (const auto& [v, x] : fixed) {
    if (!f.depends_on(v)) continue;
    Poly d = f.den().fix(v, x);
    if (d.is_zero())
      throw DegenerateDenominator("denominator vanishes identically at " + v + "=" + x.get_str());
    f = Expr(f.num().fix(v, x), d);
  }
  std::vector<std::string> esc;
  for (const auto& v : f.free_vars()) {
    if (std::find(escaping.begin(), escaping.end(), v) == escaping.end()) throw UnboundVariable(v);
    esc.push_back(v);
  }
  LimitResult r;
  if (esc.empty()) {
    r.exists = true;
    r.value = ExtReal(f.constant_value());
    r.joint_certified = true;
    return r;
  }
  std::sort(esc.begin(), esc.end());
  std::optional<ExtReal> common;
  do {
    auto lim = iterated(f, esc, 0);
    if (!lim) return r;  // sign undecidable: report NoLimit
    if (!common)
      common = lim;
    else if (!(*common == *lim))
      return r;
  } while (std::next_permutation(esc.begin(), esc.end()));
  r.exists = true;
  r.value = *common;
  if (esc.size() == 1) {
    r.joint_certified = true;
  } else if (r.value.is_finite()) {
    // f - L = (q_den*P - q_num*Q) / (q_den*Q) with L = q_num/q_den
    Poly n = f.num().scaled(r.value.value().get_den()) - f.den().scaled(r.value.value().get_num());
    Poly q = f.den();
    if (q.leading().second < 0) {
      q = -q;
      n = -n;
    }
    r.joint_certified = n.is_zero() || dominated_by_positive(n, q, esc);
  }
  return r;
}

std::optional<Expr> symbolic_limit(const Expr& e, const std::vector<std::string>& escaping,
                                   const IndexDomain& dom, const Budget& budget) {
  std::vector<std::string> esc;
  for (const auto& v : escaping)
    if (e.depends_on(v)) esc.push_back(v);
  if (esc.empty()) return e;
  std::sort(esc.begin(), esc.end());
  std::optional<Expr> common;
  do {
    Expr f = e;
    for (const auto& v : esc) {
      unsigned dp = f.num().degree(v), dq = f.den().degree(v);
      if (dp > dq) return std::nullopt;
      if (dp < dq) {
        f = Expr(0);
        break;
      }
      Poly lq = f.den().coeff(v, dq);
      if (!lq.is_constant()) {
        Expr lqe(lq);
        check_vars(lqe, dom);
        SignResult s = sign_rec(lqe, dom, budget);
        if (!s.strict) return std::nullopt;
      }
      f = Expr(f.num().coeff(v, dp), lq);
    }
    if (!common)
      common = f;
    else if (*common != f)
      return std::nullopt;
  } while (std::next_permutation(esc.begin(), esc.end()));
  return common;
}

SupResult sup_over(const Expr& e, const IndexDomain& dom, const Budget& budget) {
  check_vars(e, dom);
  SupResult r = sup_rec(e, dom, budget);
  if (!r.value.is_neg_inf() || !dom.empty_product()) complete_witness(r, dom);
  return r;
}

SupResult sup_below(const Expr& e, const IndexDomain& dom, const ExtReal& threshold,
                    const Budget& budget) {
  check_vars(e, dom);
  SupResult r;
  r.value = ExtReal::neg_inf();
  if (threshold.is_neg_inf() || dom.empty_product()) return r;
  if (threshold.is_pos_inf()) return sup_over(e, dom, budget);
  auto vars = e.free_vars();
  if (vars.empty()) {
    if (ExtReal(e.constant_value()) < threshold) {
      r.value = ExtReal(e.constant_value());
      r.attained = true;
      r.witness.fixed = dom.lowest();
    }
    r.certified = threshold.exact();
    return r;
  }
  if (threshold.exact() && vars.size() == 1) {
    const Axis& a = *dom.find(*vars.begin());
    Expr g = e - Expr(threshold.value());
    for (const auto& seg : detail::sign_segments(g, a.name, a.lo, a.hi)) {
      if (seg.sign >= 0) continue;
      SupResult s = from_usup(detail::usup(e, a.name, seg.a, seg.b), a.name);
      better(r, std::move(s));
    }
    complete_witness(r, dom);
    return r;
  }
  SupResult full = sup_over(e, dom, budget);
  if (full.certified && full.value < threshold) return full;
  if (threshold.exact()) {
    // Exact split along a short finite axis keeps the answer certified.
    const Axis* narrow = nullptr;
    for (const auto& a : dom.axes)
      if (vars.count(a.name) && a.hi &&
          (!narrow || *a.hi - a.lo < *narrow->hi - narrow->lo))
        narrow = &a;
    if (narrow && *narrow->hi - narrow->lo < 4096) {
      IndexDomain rest = dom.without(narrow->name);
      for (mpz_class x = narrow->lo; x <= *narrow->hi; ++x) {
        SupResult s = sup_below(e.fix(narrow->name, x), rest, threshold, budget);
        s.witness.fixed[narrow->name] = x;
        better(r, std::move(s));
      }
      return r;
    }
  }
  // Uncertified: best sampled value below the threshold.
  IndexDomain grid;
  for (const auto& a : dom.axes) {
    Axis g = a;
    mpz_class top = a.lo + 200;
    g.hi = a.hi && *a.hi < top ? *a.hi : top;
    grid.axes.push_back(g);
  }
  mpq_class v;
  long evals = 0;
  for_each_point(grid, [&](const Binding& b) {
    if (try_eval(e, b, v) && ExtReal(v) < threshold && r.value < ExtReal(v)) {
      r.value = ExtReal(v);
      r.attained = true;
      r.witness = Witness{b, {}};
    }
    return ++evals < budget.total;
  });
  r.certified = false;
  return r;
}

std::optional<RootSet> integer_roots(const Expr& e, const IndexDomain& dom, std::size_t cap,
                                     const Budget& budget) {
  check_vars(e, dom);
  RootSet out;
  if (e.is_zero()) {
    out.all = true;
    return out;
  }
  auto vars = e.free_vars();
  if (vars.empty()) return out;
  if (vars.size() == 1) {
    const Axis& a = *dom.find(*vars.begin());
    for (const auto& seg : detail::sign_segments(e, a.name, a.lo, a.hi)) {
      if (seg.sign != 0) continue;
      if (!seg.b) return std::nullopt;
      for (mpz_class x = seg.a; x <= *seg.b; ++x) {
        if (out.points.size() >= cap) return std::nullopt;
        Binding b = dom.lowest();
        b[a.name] = x;
        out.points.push_back(b);
      }
    }
    return out;
  }
  SignResult s = sign_over(e, dom, budget);
  if (s.strict) return out;
  if (auto n = dom.count(); n && *n <= budget.total) {
    mpq_class v;
    bool overflow = false;
    for_each_point(dom, [&](const Binding& b) {
      if (try_eval(e, b, v) && v == 0) {
        if (out.points.size() >= cap) {
          overflow = true;
          return false;
        }
        out.points.push_back(b);
      }
      return true;
    });
    if (overflow) return std::nullopt;
    return out;
  }
  return std::nullopt;
}

}  // namespace silp
