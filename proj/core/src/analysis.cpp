#include "silp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "silp/errors.hpp"

namespace silp {

std::string to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible:
      return "Feasible";
    case Feasibility::Infeasible:
      return "Infeasible";
    default:
      return "Unknown";
  }
}

std::string to_string(GapClass g) {
  switch (g) {
    case GapClass::NoGap:
      return "NoGap";
    case GapClass::Gap:
      return "Gap";
    default:
      return "Unknown";
  }
}

std::string to_string(Dominant d) {
  switch (d) {
    case Dominant::S:
      return "S";
    case Dominant::L:
      return "L";
    default:
      return "tie";
  }
}

AnalysisOptions::AnalysisOptions() : delta_schedule(geometric_schedule(mpq_class("1000000000000"))) {}

std::vector<mpq_class> AnalysisOptions::geometric_schedule(const mpq_class& max) {
  std::vector<mpq_class> out;
  for (mpq_class d = 1; d <= max; d *= 10) out.push_back(d);
  if (out.empty() || out.back() != max) out.push_back(max);
  return out;
}

std::string WitnessPath::to_string(const EliminationOutput& out) const {
  return "row " + std::to_string(row + 1) + " (" + out.rows[row].label + ", " + silp::to_string(cls) +
         "): " + witness.to_string();
}

std::vector<Expr> projected(const EliminationOutput& out, const RhsFamily& y) { return fm_bar(out, y); }

Expr penalty(const EliminationOutput& out, std::size_t row) {
  Expr p(0);
  for (std::size_t k = 0; k < out.vars.size(); ++k) {
    int s = out.remaining_sign[k];
    if (s != 0) p += out.rows[row].x[k].scale(s);
  }
  return p;
}

std::vector<EscapeFamily> escape_families(const IndexDomain& dom) {
  std::vector<std::string> open;
  for (const auto& a : dom.axes)
    if (!a.bounded()) open.push_back(a.name);
  std::vector<EscapeFamily> fams;
  for (unsigned mask = 1; mask < (1u << open.size()); ++mask) {
    EscapeFamily f;
    for (std::size_t k = 0; k < open.size(); ++k)
      if (mask & (1u << k)) f.escaping.push_back(open[k]);
    for (const auto& a : dom.axes)
      if (std::find(f.escaping.begin(), f.escaping.end(), a.name) == f.escaping.end())
        f.rest.axes.push_back(a);
    fams.push_back(std::move(f));
  }
  return fams;
}

namespace {

bool better_sup(const SupResult& cand, const SupResult& best) {
  if (best.value < cand.value) return true;
  return cand.value == best.value && cand.attained && !best.attained;
}

ExtReal path_limit(const Expr& e, const Witness& w) {
  if (w.is_point()) return ExtReal(e.eval(w.fixed));
  Binding fixed;
  for (const auto& [v, x] : w.fixed)
    if (e.depends_on(v)) fixed[v] = x;
  try {
    LimitResult l = limit_at_infinity(e, w.escaping, fixed);
    if (l.exists) return l.value;
  } catch (const Error&) {
  }
  return ExtReal::neg_inf();
}

WitnessPath make_path(const EliminationOutput& out, std::size_t row, const Expr& ytil, const Witness& w) {
  WitnessPath p;
  p.row = row;
  p.cls = out.rows[row].cls;
  p.witness = w;
  p.rhs_limit = path_limit(ytil, w);
  for (const auto& v : out.remaining) p.coeff_limits.push_back(path_limit(out.rows[row].x[out.var_index(v)], w));
  return p;
}

Witness merge(const std::vector<std::string>& esc, const Witness& inner) {
  Witness w;
  w.fixed = inner.fixed;
  w.escaping = esc;
  for (const auto& v : inner.escaping) w.escaping.push_back(v);
  for (const auto& v : esc) w.fixed.erase(v);
  return w;
}

}  // namespace

std::vector<PathLimit> path_limits(const EliminationOutput& out, std::size_t h, const Expr& ytil, bool vanishing,
                                   const Budget& budget, bool& certified, std::vector<std::string>& notes) {
  const StdRow& row = out.rows[h];
  std::vector<PathLimit> paths;
  auto note = [&](const std::string& what, const std::vector<std::string>& esc) {
    certified = false;
    notes.push_back("row " + std::to_string(h + 1) + ": " + what + " along " + Witness{{}, esc}.to_string());
  };
  Expr pen = vanishing ? penalty(out, h) : Expr(0);
  if (vanishing) {
    // Constant sequences at points where the penalty is zero.
    auto zeros = integer_roots(pen, row.domain, 1000, budget);
    if (!zeros) {
      certified = false;
      notes.push_back("row " + std::to_string(h + 1) + ": zero set of the coefficients not enumerated");
    } else if (!zeros->points.empty()) {
      PathLimit p;
      p.row = h;
      for (const auto& b : zeros->points) p.at_points.emplace_back(b, ExtReal(ytil.eval(b)));
      paths.push_back(std::move(p));
    }
  }
  for (const auto& fam : escape_families(row.domain)) {
    PathLimit p;
    p.row = h;
    p.escaping = fam.escaping;
    p.rest = fam.rest;
    std::optional<std::vector<Binding>> only;  // vanishing only at these rest points
    if (vanishing) {
      auto g = symbolic_limit(pen, fam.escaping, row.domain, budget);
      if (!g) {
        if (!fam.rest.axes.empty()) {
          note("coefficient limit undetermined", fam.escaping);
          continue;
        }
        LimitResult l = limit_at_infinity(pen, fam.escaping);
        if (!(l.exists && l.value == ExtReal(0))) continue;
      } else if (!g->is_zero()) {
        auto pts = integer_roots(*g, fam.rest, 1000, budget);
        if (!pts) {
          note("vanishing set not enumerated", fam.escaping);
          continue;
        }
        if (pts->points.empty()) continue;
        only = pts->points;
      }
    }
    if (only) {
      for (const auto& b : *only) {
        Binding fixed;
        for (const auto& [v, x] : b)
          if (ytil.depends_on(v)) fixed[v] = x;
        LimitResult l = limit_at_infinity(ytil, fam.escaping, fixed);
        if (!l.exists) {
          note("no limit of the right-hand side", fam.escaping);
          continue;
        }
        p.at_points.emplace_back(b, l.value);
      }
      if (!p.at_points.empty()) paths.push_back(std::move(p));
      continue;
    }
    p.limit = symbolic_limit(ytil, fam.escaping, row.domain, budget);
    if (!p.limit) {
      if (!fam.rest.axes.empty()) {
        note("no symbolic limit of the right-hand side", fam.escaping);
        continue;
      }
      LimitResult l = limit_at_infinity(ytil, fam.escaping);
      if (!l.exists) {
        note("no limit of the right-hand side", fam.escaping);
        continue;
      }
      p.at_points.emplace_back(Binding{}, l.value);
    }
    paths.push_back(std::move(p));
  }
  return paths;
}

SupResult path_sup(const PathLimit& p, const std::optional<ExtReal>& below, const Budget& budget) {
  if (p.limit) {
    SupResult s = below ? sup_below(*p.limit, p.rest, *below, budget) : sup_over(*p.limit, p.rest, budget);
    s.witness = merge(p.escaping, s.witness);
    s.attained = s.attained && p.escaping.empty();
    return s;
  }
  SupResult best;
  best.value = ExtReal::neg_inf();
  for (const auto& [b, v] : p.at_points) {
    if (below && !(v < *below)) continue;
    if (!(best.value < v) && best.attained) continue;
    if (v < best.value) continue;
    best.value = v;
    best.attained = p.escaping.empty();
    best.witness.fixed = b;
    best.witness.escaping = p.escaping;
    for (const auto& e : p.escaping) best.witness.fixed.erase(e);
  }
  return best;
}

namespace {

std::vector<Expr> residuals(const SilpInstance& inst, const RhsFamily& y, const std::vector<mpq_class>& x) {
  std::vector<Expr> r;
  for (const auto& b : inst.blocks) {
    Expr e = -y.at(b.label);
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] != 0) e += b.coeffs[k].scale(x[k]);
    r.push_back(e);
  }
  return r;
}

// Feasible point of least L1 norm, via x = p - q with p, q >= 0.
std::optional<std::vector<mpq_class>> least_l1_point(const FiniteSystem& fs) {
  std::size_t n = fs.vars.size();
  FiniteSystem split;
  for (std::size_t k = 0; k < 2 * n; ++k) {
    split.vars.push_back("v" + std::to_string(k));
    split.objective.emplace_back(1);
  }
  for (const auto& r : fs.rows) {
    FiniteRow s;
    for (const auto& a : r.a) s.a.push_back(a);
    for (const auto& a : r.a) s.a.push_back(-a);
    s.rhs = r.rhs;
    split.rows.push_back(std::move(s));
  }
  for (std::size_t k = 0; k < 2 * n; ++k) {
    FiniteRow s;
    s.a.assign(2 * n, 0);
    s.a[k] = 1;
    s.rhs = 0;
    split.rows.push_back(std::move(s));
  }
  LpResult r = solve_exact(split);
  if (r.status != LpStatus::Optimal) return std::nullopt;
  std::vector<mpq_class> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = r.x[k] - r.x[n + k];
  return x;
}

std::optional<Binding> negative_point(const Expr& r, const IndexDomain& dom, const SignResult& s) {
  if (s.negative_at) return s.negative_at;
  std::optional<Binding> found;
  if (dom.finite()) {
    for_each_point(dom, [&](const Binding& b) {
      if (r.eval(b) < 0) {
        found = b;
        return false;
      }
      return true;
    });
    return found;
  }
  auto t = dom.truncated(1000);
  if (!t) return std::nullopt;
  long seen = 0;
  for_each_point(*t, [&](const Binding& b) {
    if (++seen > 100000) return false;
    if (r.eval(b) < 0) {
      found = b;
      return false;
    }
    return true;
  });
  return found;
}

}  // namespace

SupResult omega(const EliminationOutput& out, const std::vector<Expr>& ytil, const mpq_class& delta,
                const Budget& budget) {
  SupResult best;
  best.value = ExtReal::neg_inf();
  for (std::size_t h : out.of_class(RowClass::I4)) {
    Expr f = ytil[h] - penalty(out, h).scale(delta);
    SupResult s = sup_over(f, out.rows[h].domain, budget);
    bool cert = best.certified && s.certified;
    if (better_sup(s, best)) best = s;
    best.certified = cert;
  }
  return best;
}

SupResult omega(const EliminationOutput& out, const RhsFamily& y, const mpq_class& delta, const Budget& budget) {
  return omega(out, projected(out, y), delta, budget);
}

SValue compute_S(const EliminationOutput& out, const RhsFamily& y, const AnalysisOptions& opt) {
  auto ytil = projected(out, y);
  SValue s;
  s.value = ExtReal::neg_inf();
  SupResult best;
  best.value = ExtReal::neg_inf();
  std::optional<std::size_t> row;
  for (std::size_t h : out.of_class(RowClass::I3)) {
    SupResult r = sup_over(ytil[h], out.rows[h].domain, opt.budget);
    if (!r.certified) s.certified = false;
    if (better_sup(r, best)) {
      best = r;
      row = h;
    }
  }
  if (row) {
    s.value = best.value;
    s.attained = best.attained;
    s.witness = make_path(out, *row, ytil[*row], best.witness);
  }
  return s;
}

LValue compute_L(const EliminationOutput& out, const RhsFamily& y, const AnalysisOptions& opt) {
  LValue l;
  l.value = l.numeric = l.analytic = ExtReal::neg_inf();
  auto i4 = out.of_class(RowClass::I4);
  if (i4.empty()) {
    l.numeric_converged = true;
    return l;
  }
  auto ytil = projected(out, y);

  // Numeric: omega along the delta schedule.
  std::vector<ExtReal> ws;
  for (const auto& d : opt.delta_schedule) {
    SupResult w = omega(out, ytil, d, opt.budget);
    if (!w.certified) l.certified = false;
    ExtReal v = w.value;
    v.set_exact(false);
    if (!ws.empty() && definitely_less(ws.back(), v, opt.tolerance))
      l.notes.push_back("omega increased at delta " + d.get_str());
    ws.push_back(v);
  }
  ExtReal last = ws.back();
  std::optional<ExtReal> prev;
  if (ws.size() > 1) prev = ws[ws.size() - 2];
  const mpq_class& dmax = opt.delta_schedule.back();
  if (last.is_finite() && last.to_double() <= -std::sqrt(dmax.get_d())) {
    l.numeric = ExtReal::neg_inf();
    l.numeric_converged = true;
  } else {
    l.numeric = last;
    l.numeric_converged =
        prev && approx_equal(last, *prev, opt.tolerance);
  }

  // Analytic: limits along vanishing escape paths.
  SupResult best;
  best.value = ExtReal::neg_inf();
  std::optional<std::size_t> best_row;
  for (std::size_t h : i4) {
    for (const auto& p : path_limits(out, h, ytil[h], true, opt.budget, l.certified, l.notes)) {
      SupResult s = path_sup(p, std::nullopt, opt.budget);
      if (!s.certified) l.certified = false;
      if (better_sup(s, best)) {
        best = s;
        best_row = h;
      }
    }
  }
  l.analytic = best.value;
  if (best_row) l.witness = make_path(out, *best_row, ytil[*best_row], best.witness);
  l.value = l.analytic;

  bool agree = l.numeric_converged ? approx_equal(l.numeric, l.analytic, opt.tolerance)
                                   : !definitely_less(l.numeric, l.analytic, opt.tolerance);
  if (!agree) {
    l.discrepancy = true;
    l.certified = false;
    l.notes.push_back("Discrepancy: numeric " + l.numeric.to_string() + ", analytic " + l.analytic.to_string());
  } else if (!l.numeric_converged) {
    l.notes.push_back("omega not converged at delta " + dmax.get_str() + "; value " + l.numeric.to_string() +
                      " bounds the analytic limit from above");
  }
  return l;
}

FeasibilityResult check_feasibility(const SilpInstance& inst, const EliminationOutput& out, const RhsFamily& y,
                                    const AnalysisOptions& opt) {
  FeasibilityResult res;
  auto ytil = projected(out, y);
  for (std::size_t h : out.of_class(RowClass::I1)) {
    SupResult s = sup_over(ytil[h], out.rows[h].domain, opt.budget);
    if (ExtReal(0) < s.value) {
      res.verdict = Feasibility::Infeasible;
      res.note = "projected row " + std::to_string(h + 1) + " requires 0 >= " + s.value.to_string();
      return res;
    }
  }
  SilpInstance target = inst.with_rhs(y);

  auto certify = [&](const std::vector<mpq_class>& x, std::vector<FiniteRow>* cuts) -> std::optional<bool> {
    auto rs = residuals(inst, y, x);
    bool ok = true;
    for (std::size_t b = 0; b < rs.size(); ++b) {
      const IndexDomain& dom = inst.blocks[b].domain;
      SignResult s = sign_over(rs[b], dom, opt.budget);
      if (s.sign == Sign::NonNegative || s.sign == Sign::IdenticallyZero) continue;
      if (s.sign == Sign::Unknown) return std::nullopt;
      ok = false;
      if (!cuts) return false;
      // Deepest cut when the violation peaks at a point, any violated point otherwise.
      std::optional<Binding> p;
      SupResult worst = sup_over(-rs[b], dom, opt.budget);
      if (worst.attained && worst.witness.is_point() && ExtReal(0) < worst.value) p = worst.witness.fixed;
      if (!p) p = negative_point(rs[b], dom, s);
      if (!p) return std::nullopt;
      for (const auto& a : dom.axes) p->try_emplace(a.name, a.lo);
      FiniteRow r;
      for (const auto& c : inst.blocks[b].coeffs) r.a.push_back(c.eval(*p));
      r.rhs = y.at(inst.blocks[b].label).eval(*p);
      r.block = inst.blocks[b].label;
      r.at = *p;
      cuts->push_back(r);
    }
    return ok;
  };

  std::vector<mpq_class> zero(inst.n(), 0);
  if (certify(zero, nullptr).value_or(false)) {
    res.verdict = Feasibility::Feasible;
    res.point = zero;
    return res;
  }
  // Cutting planes on truncations: the least-L1 point first (sparse points tend
  // to survive the tail), then an arbitrary vertex.
  for (const auto& n : opt.feasibility_schedule) {
    if (truncated_row_count(target, n) > opt.row_cap) break;
    for (bool sparse : {true, false}) {
      FiniteSystem fs = truncate(target, n);
      for (int round = 0; round <= opt.cut_rounds; ++round) {
        auto x = sparse ? least_l1_point(fs) : feasible_point(fs);
        if (!x) {
          res.verdict = Feasibility::Infeasible;
          res.note = "a finite subsystem of " + std::to_string(fs.rows.size()) + " rows is infeasible";
          return res;
        }
        std::vector<FiniteRow> cuts;
        auto ok = certify(*x, &cuts);
        if (!ok) break;
        if (*ok) {
          res.verdict = Feasibility::Feasible;
          res.point = *x;
          return res;
        }
        for (auto& c : cuts) fs.rows.push_back(std::move(c));
      }
    }
  }
  res.note = "no certified feasible point found";
  return res;
}

// A feasible system has OV = max(S, L) < +inf, so an infinite S or L settles
// an open verdict.
void infer_infeasible(FeasibilityResult& f, const SValue& s, const LValue& l) {
  if (f.verdict != Feasibility::Unknown) return;
  if (s.value.is_pos_inf() || l.value.is_pos_inf()) {
    f.verdict = Feasibility::Infeasible;
    f.note = std::string(s.value.is_pos_inf() ? "S" : "L") + " is +inf, which no feasible system allows";
  }
}

OvValue combine_ov(const SValue& s, const LValue& l, Feasibility f, double tol) {
  OvValue ov;
  if (f == Feasibility::Infeasible) {
    ov.value = ExtReal::pos_inf();
    return ov;
  }
  ov.value = max(s.value, l.value);
  if (approx_equal(s.value, l.value, tol))
    ov.dominant = Dominant::Tie;
  else
    ov.dominant = l.value < s.value ? Dominant::S : Dominant::L;
  return ov;
}

GapClass classify_gap(const SValue& s, const LValue& l, Feasibility f, double tol) {
  if (f != Feasibility::Feasible) return GapClass::Unknown;
  if (!s.certified || !l.certified) {
    if (definitely_less(s.value, l.value, tol)) return GapClass::Gap;
    return GapClass::Unknown;
  }
  return definitely_less(s.value, l.value, tol) ? GapClass::Gap : GapClass::NoGap;
}

AnalysisReport analyze(const SilpInstance& inst, const EliminationOutput& out, const RhsFamily& y,
                       const AnalysisOptions& opt) {
  AnalysisReport r;
  r.instance = inst.name;
  r.feasibility = check_feasibility(inst, out, y, opt);
  r.S = compute_S(out, y, opt);
  r.L = compute_L(out, y, opt);
  infer_infeasible(r.feasibility, r.S, r.L);
  r.OV = combine_ov(r.S, r.L, r.feasibility.verdict, opt.tolerance);
  r.gap = classify_gap(r.S, r.L, r.feasibility.verdict, opt.tolerance);
  r.multiplier_bound = multiplier_bound(out, opt.budget);
  r.certified = r.S.certified && r.L.certified && r.feasibility.verdict != Feasibility::Unknown &&
                r.multiplier_bound.certified;
  if (!r.feasibility.note.empty()) r.notes.push_back(r.feasibility.note);
  if (!r.S.certified) r.notes.push_back("S: supremum not certified");
  for (const auto& n : r.L.notes) r.notes.push_back("L: " + n);
  if (!r.multiplier_bound.certified) r.notes.push_back("multiplier bound not certified");
  return r;
}

AnalysisReport analyze(const SilpInstance& inst, const EliminationOutput& out, const AnalysisOptions& opt) {
  return analyze(inst, out, inst.rhs(), opt);
}

ExtReal optimal_value(const SilpInstance& inst, const EliminationOutput& out, const RhsFamily& y,
                      const AnalysisOptions& opt) {
  auto f = check_feasibility(inst, out, y, opt);
  if (f.verdict == Feasibility::Infeasible) return ExtReal::pos_inf();
  return max(compute_S(out, y, opt).value, compute_L(out, y, opt).value);  // +inf also means infeasible
}

WitnessPath witness_sequence(const AnalysisReport& report) {
  if (!report.OV.value.is_finite()) throw NoFiniteOV();
  bool use_s = !(report.S.value < report.L.value);
  const auto& w = use_s ? report.S.witness : report.L.witness;
  if (!w) throw NoFiniteOV();
  return *w;
}

std::string report_json(const AnalysisReport& r, const EliminationOutput& out) {
  using detail::ext_json;
  detail::json j;
  j["instance"] = r.instance;
  j["feasibility"] = to_string(r.feasibility.verdict);
  if (r.feasibility.point) {
    detail::json pt = detail::json::array();
    for (const auto& v : *r.feasibility.point) pt.push_back(rational_to_string(v));
    j["feasible_point"] = pt;
  }
  auto path = [&](const std::optional<WitnessPath>& w) -> detail::json {
    if (!w) return nullptr;
    return w->to_string(out);
  };
  j["S"] = {{"value", ext_json(r.S.value)},
            {"exact", r.S.value.to_exact_string()},
            {"attained", r.S.attained},
            {"witness", path(r.S.witness)}};
  j["L"] = {{"value", ext_json(r.L.value)},
            {"exact", r.L.value.to_exact_string()},
            {"witness", path(r.L.witness)},
            {"numeric", ext_json(r.L.numeric)},
            {"discrepancy", r.L.discrepancy}};
  j["OV"] = ext_json(r.OV.value);
  j["OV_exact"] = r.OV.value.to_exact_string();
  j["dominant"] = to_string(r.OV.dominant);
  j["gap_fdsilp"] = to_string(r.gap);
  j["multiplier_bound"] = ext_json(r.multiplier_bound.value);
  j["certified"] = r.certified;
  j["notes"] = r.notes;
  return j.dump(2);
}

std::string report_text(const AnalysisReport& r, const EliminationOutput& out) {
  std::ostringstream os;
  os << "instance: " << r.instance << "\n";
  os << "feasibility: " << to_string(r.feasibility.verdict) << "\n";
  os << "S: " << r.S.value.to_exact_string() << (r.S.attained ? " (attained)" : " (not attained)");
  if (r.S.witness) os << " along " << r.S.witness->to_string(out);
  os << "\n";
  os << "L: " << r.L.value.to_exact_string();
  if (r.L.witness) os << " along " << r.L.witness->to_string(out);
  os << "\n";
  os << "OV: " << r.OV.value.to_exact_string() << " (dominant: " << to_string(r.OV.dominant) << ")\n";
  os << "gap_fdsilp: " << to_string(r.gap) << "\n";
  os << "multiplier_bound: " << r.multiplier_bound.value.to_exact_string() << "\n";
  os << "certified: " << (r.certified ? "yes" : "no") << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace silp
