#include "silp/dual.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "json_util.hpp"
#include "silp/errors.hpp"

namespace silp {

std::string to_string(DualMode m) { return m == DualMode::BaseOnU ? "BaseOnU" : "ExtendedAlongPath"; }

std::string to_string(SpaceTag t) {
  switch (t) {
    case SpaceTag::U:
      return "U";
    case SpaceTag::Bounded:
      return "bounded";
    default:
      return "all";
  }
}

SpaceTag parse_space(const std::string& s) {
  if (s == "U") return SpaceTag::U;
  if (s == "bounded") return SpaceTag::Bounded;
  if (s == "all") return SpaceTag::All;
  throw ValidationError("UnknownSpace", "space must be U, bounded or all, got '" + s + "'");
}

std::string to_string(PriceVerdict v) {
  switch (v) {
    case PriceVerdict::PricedExactly:
      return "PricedExactly";
    case PriceVerdict::PricedUpToTolerance:
      return "PricedUpToTolerance";
    case PriceVerdict::Fails:
      return "Fails";
    default:
      return "NotEvaluable";
  }
}

std::string to_string(DpStatus s) {
  switch (s) {
    case DpStatus::Holds:
      return "Holds";
    case DpStatus::Fails:
      return "Fails";
    case DpStatus::Vacuous:
      return "Vacuous";
    default:
      return "Unknown";
  }
}

std::string to_string(ConeVerdict v) {
  switch (v) {
    case ConeVerdict::ImpliesSgeqLAndSolvable:
      return "ImpliesS_geq_L_and_solvable";
    case ConeVerdict::NotApplicable:
      return "NotApplicable";
    default:
      return "Unknown";
  }
}

std::string DualValue::to_string() const { return exists ? value.to_exact_string() : "NoLimit"; }

DualFunctional base_dual(const EliminationOutput& out, const AnalysisReport& report) {
  if (report.feasibility.verdict != Feasibility::Feasible) throw NoFiniteOV();
  DualFunctional psi;
  psi.witness = witness_sequence(report);
  psi.column_values = out.objective;
  psi.rhs_value = report.OV.value;
  psi.mode = DualMode::BaseOnU;
  return psi;
}

DualValue evaluate_along(const WitnessPath& path, const EliminationOutput& out, const RhsFamily& y) {
  DualValue v;
  Expr e = fm_bar(out, y)[path.row];
  const Witness& w = path.witness;
  try {
    if (w.is_point()) {
      v.value = ExtReal(e.eval(w.fixed));
      v.exists = true;
      return v;
    }
    Binding fixed;
    for (const auto& [name, x] : w.fixed)
      if (e.depends_on(name)) fixed[name] = x;
    LimitResult l = limit_at_infinity(e, w.escaping, fixed);
    v.exists = l.exists;
    if (l.exists) v.value = l.value;
  } catch (const Error&) {
    v.exists = false;
  }
  return v;
}

DualValue evaluate_dual(const DualFunctional& psi, const EliminationOutput& out, const RhsFamily& y) {
  return evaluate_along(psi.witness, out, y);
}

SpaceTag classify_direction(const SilpInstance& inst, const RhsFamily& d, const Budget& budget) {
  if (span_membership(inst, d)) return SpaceTag::U;
  for (const auto& b : inst.blocks) {
    const Expr& e = d.at(b.label);
    if (!sup_over(e, b.domain, budget).value.is_finite()) return SpaceTag::All;
    if (!sup_over(-e, b.domain, budget).value.is_finite()) return SpaceTag::All;
  }
  return SpaceTag::Bounded;
}

namespace {

RhsFamily step(const SilpInstance& inst, const RhsFamily& d, const mpq_class& eps) {
  return inst.rhs() + scaled(d, eps);
}

bool agree(const ExtReal& a, const ExtReal& b, double tol) {
  if (a.exact() && b.exact()) return a == b;
  return approx_equal(a, b, tol);
}

PriceVerdict verdict_of(const std::vector<EpsRow>& table) {
  if (table.empty()) return PriceVerdict::NotEvaluable;
  bool exact = true;
  for (const auto& r : table) {
    if (!r.agrees) return PriceVerdict::Fails;
    if (!(r.ov.exact() && r.predicted.exact())) exact = false;
  }
  return exact ? PriceVerdict::PricedExactly : PriceVerdict::PricedUpToTolerance;
}

// OV(b + eps d) per step, memoized across candidate functionals.
class OvCache {
 public:
  OvCache(const SilpInstance& inst, const EliminationOutput& out, const RhsFamily& d, const AnalysisOptions& opt,
          bool feasible = false)
      : inst_(inst), out_(out), d_(d), opt_(opt), feasible_(feasible) {}
  const ExtReal& at(const mpq_class& eps) {
    std::string key = eps.get_str();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, compute(eps)).first;
    return it->second;
  }

 private:
  ExtReal compute(const mpq_class& eps) const {
    RhsFamily y = step(inst_, d_, eps);
    if (!feasible_) return optimal_value(inst_, out_, y, opt_);
    return max(compute_S(out_, y, opt_).value, compute_L(out_, y, opt_).value);
  }

  const SilpInstance& inst_;
  const EliminationOutput& out_;
  const RhsFamily& d_;
  const AnalysisOptions& opt_;
  bool feasible_;
  std::map<std::string, ExtReal> cache_;
};

std::vector<EpsRow> fill_table(const std::vector<mpq_class>& steps, OvCache& ovs, const ExtReal& ov_b,
                               const ExtReal& psi_d, double tol) {
  std::vector<EpsRow> table;
  for (const auto& eps : steps) {
    EpsRow r;
    r.eps = eps;
    r.ov = ovs.at(eps);
    r.predicted = ov_b + eps * psi_d;
    r.agrees = agree(r.ov, r.predicted, tol);
    table.push_back(r);
  }
  return table;
}

std::vector<mpq_class> default_steps(const mpq_class& eps_hat) {
  return {eps_hat, eps_hat / 2, eps_hat / 4, eps_hat / 10};
}

// sup |fm_bar(d)| over the rows of one class.
ExtReal sup_abs(const EliminationOutput& out, const std::vector<Expr>& dtil, RowClass cls, const Budget& budget) {
  ExtReal m(0);
  for (std::size_t h : out.of_class(cls)) {
    m = max(m, sup_over(dtil[h], out.rows[h].domain, budget).value);
    m = max(m, sup_over(-dtil[h], out.rows[h].domain, budget).value);
  }
  return m;
}

// Step from the gap between the dominant value and the other accumulation values,
// divided by three times the size of the perturbation on the dominant rows.
std::optional<mpq_class> seed_step(const EliminationOutput& out, const AnalysisReport& report, const RhsFamily& b,
                                   const RhsFamily& d, const AnalysisOptions& opt, std::vector<std::string>& notes) {
  auto dtil = fm_bar(out, d);
  std::optional<mpq_class> best;
  auto consider = [&](const ExtReal& top, const ExtReal& other, const ExtReal& below, RowClass cls) {
    ExtReal rest = max(other, below);
    if (!top.is_finite() || !(rest < top)) return;
    ExtReal m = sup_abs(out, dtil, cls, opt.budget);
    if (!m.is_finite()) return;
    mpq_class alpha = rest.is_finite() ? mpq_class(top.value() - rest.value()) : mpq_class(1);
    if (!rest.is_finite()) notes.push_back("no competing accumulation value; gap taken as 1");
    mpq_class e = m.value() == 0 ? mpq_class(1) : mpq_class(alpha / (3 * m.value()));
    if (!best || e < *best) best = e;
  };
  const ExtReal& s = report.S.value;
  const ExtReal& l = report.L.value;
  if (!(s < l)) consider(s, l, check_DP1(out, b, report.S, opt).below, RowClass::I3);
  if (!(l < s)) consider(l, s, check_DP2(out, b, report.L, opt).below, RowClass::I4);
  return best;
}

}  // namespace

PricingReport price_in_U(const DualFunctional& psi, const SilpInstance& inst, const EliminationOutput& out,
                         const RhsFamily& d, const PricingOptions& opt) {
  check_family(inst, d, "direction");
  auto coords = span_membership(inst, d);
  if (!coords) throw NotInU();
  PricingReport r;
  r.instance = inst.name;
  r.direction = d;
  r.space = SpaceTag::U;
  r.in_U = true;
  r.coords = coords;
  r.ov_b = psi.rhs_value;
  r.functional_path = psi.witness;

  ExtReal value(0);
  for (std::size_t k = 0; k < coords->alpha.size(); ++k) value = value + ExtReal(coords->alpha[k] * psi.column_values[k]);
  value = value + coords->alpha0 * psi.rhs_value;
  r.psi_d = {true, value};
  DualValue direct = evaluate_dual(psi, out, d);
  if (direct.exists && !agree(direct.value, value, opt.analysis.tolerance))
    r.notes.push_back("path limit of the direction is " + direct.to_string() + ", span coordinates give " +
                      value.to_exact_string());

  // b + eps d = (1 + eps alpha0) b + eps sum alpha_k a^k needs 1 + eps alpha0 > 0.
  mpq_class cap = opt.eps_max;
  if (coords->alpha0 < 0) {
    mpq_class limit = -1 / coords->alpha0;
    if (limit / 2 < cap) {
      cap = limit / 2;
      r.notes.push_back("step capped at " + rational_to_string(cap) + " so that b keeps a positive weight");
    }
  }
  std::vector<mpq_class> steps;
  if (opt.eps_table.empty()) {
    steps = default_steps(cap);
  } else {
    for (const auto& e : opt.eps_table)
      if (e > 0 && e <= cap) steps.push_back(e);
    if (steps.size() < opt.eps_table.size()) r.notes.push_back("requested steps above the cap were dropped");
    if (steps.empty()) steps = default_steps(cap);
  }
  if (!steps.empty()) r.eps_hat = *std::max_element(steps.begin(), steps.end());
  // With x feasible for b, (1 + eps alpha0) x + eps alpha is feasible for b + eps d.
  OvCache ovs(inst, out, d, opt.analysis, true);
  r.table = fill_table(steps, ovs, r.ov_b, value, opt.analysis.tolerance);
  r.verdict = verdict_of(r.table);
  return r;
}

PricingReport price_direction(const SilpInstance& inst, const EliminationOutput& out, const AnalysisReport& report,
                              const RhsFamily& d, const PricingOptions& opt) {
  check_family(inst, d, "direction");
  PricingReport r;
  r.instance = inst.name;
  r.direction = d;
  r.ov_b = report.OV.value;

  std::optional<DualFunctional> base;
  try {
    base = base_dual(out, report);
  } catch (const NoFiniteOV&) {
    r.space = classify_direction(inst, d, opt.analysis.budget);
    r.in_U = r.space == SpaceTag::U;
    r.notes.push_back("OV(b) is not finite with a feasible b; no optimal dual to price with");
    return r;
  }
  if (span_membership(inst, d)) return price_in_U(*base, inst, out, d, opt);
  r.space = classify_direction(inst, d, opt.analysis.budget);

  RhsFamily b = inst.rhs();
  std::vector<mpq_class> seeds;
  if (!opt.eps_table.empty()) {
    seeds.push_back(*std::max_element(opt.eps_table.begin(), opt.eps_table.end()));
  } else {
    mpq_class start = opt.eps_max;
    if (auto s = seed_step(out, report, b, d, opt.analysis, r.notes)) {
      if (*s < start) start = *s;
      r.notes.push_back("step seeded at " + rational_to_string(start) + " from the gap to the next accumulation value");
    }
    for (int k = 0; k <= opt.shrink_steps; ++k) {
      seeds.push_back(start);
      start /= 2;
    }
  }

  OvCache ovs(inst, out, d, opt.analysis);
  const double tol = opt.analysis.tolerance;
  const RhsFamily& y_b = b;
  bool evaluated = false;
  std::optional<PricingReport> first_failure;
  for (const auto& eps_hat : seeds) {
    std::vector<mpq_class> steps = opt.eps_table.empty() ? default_steps(eps_hat) : opt.eps_table;

    // Candidate optimal functionals: the witness path of b + eps_hat d, and the base dual.
    std::vector<std::pair<WitnessPath, DualMode>> cands;
    RhsFamily moved = step(inst, d, eps_hat);
    AnalysisReport shifted = analyze(inst, out, moved, opt.analysis);
    try {
      cands.emplace_back(witness_sequence(shifted), DualMode::ExtendedAlongPath);
    } catch (const NoFiniteOV&) {
    }
    cands.emplace_back(base->witness, DualMode::BaseOnU);

    for (const auto& [path, mode] : cands) {
      DualValue on_b = evaluate_along(path, out, y_b);
      if (!on_b.exists || !agree(on_b.value, r.ov_b, tol)) continue;  // not an optimal dual
      bool feasible = true;
      for (std::size_t k = 0; k < inst.n() && feasible; ++k) {
        DualValue on_a = evaluate_along(path, out, inst.column(k));
        feasible = on_a.exists && on_a.value == ExtReal(out.objective[k]);
      }
      if (!feasible) continue;
      DualValue on_d = evaluate_along(path, out, d);
      if (!on_d.exists) continue;
      evaluated = true;
      PricingReport trial = r;
      trial.eps_hat = eps_hat;
      trial.psi_d = on_d;
      trial.functional_path = path;
      trial.table = fill_table(steps, ovs, r.ov_b, on_d.value, tol);
      trial.verdict = verdict_of(trial.table);
      if (mode == DualMode::ExtendedAlongPath) trial.notes.push_back("functional taken along the witness of b + eps d");
      if (trial.verdict == PriceVerdict::PricedExactly || trial.verdict == PriceVerdict::PricedUpToTolerance)
        return trial;
      // Report the largest scale, and there the base dual: it is the unique optimum on U.
      if (!first_failure || (first_failure->eps_hat == eps_hat && mode == DualMode::BaseOnU)) first_failure = trial;
    }
  }
  if (!evaluated) {
    r.notes.push_back("no optimal functional has a limit on the direction");
    r.verdict = PriceVerdict::NotEvaluable;
    return r;
  }
  PricingReport f = *first_failure;
  f.verdict = PriceVerdict::Fails;
  if (opt.eps_table.empty())
    f.notes.push_back("fails at every tested scale down to " + rational_to_string(seeds.back()) +
                      "; this is evidence, not a proof");
  return f;
}

namespace {

// Strict comparison with the tolerance fallback: Holds, Fails, or Unknown inside the margin.
DpStatus strictly_below(const ExtReal& g, const ExtReal& ref, double tol) {
  if (g.exact() && ref.exact()) return g < ref ? DpStatus::Holds : DpStatus::Fails;
  if (definitely_less(g, ref, tol)) return DpStatus::Holds;
  if (approx_equal(g, ref, tol)) return DpStatus::Unknown;
  return DpStatus::Fails;
}

}  // namespace

DpCheck check_DP1(const EliminationOutput& out, const RhsFamily& b, const SValue& s, const AnalysisOptions& opt) {
  DpCheck c;
  c.reference = s.value;
  c.reference_attained = s.attained;
  c.below = ExtReal::neg_inf();
  auto rows = out.of_class(RowClass::I3);
  if (rows.empty()) {
    c.status = DpStatus::Vacuous;
    c.evidence.push_back("no rows with all remaining coefficients zero");
    return c;
  }
  auto btil = fm_bar(out, b);
  bool certified = s.certified;
  std::vector<std::string> notes;
  for (std::size_t h : rows) {
    SupResult v = sup_below(btil[h], out.rows[h].domain, s.value, opt.budget);
    if (!v.certified) certified = false;
    if (c.below < v.value) {
      c.below = v.value;
      c.evidence.push_back("row " + std::to_string(h + 1) + ": values below S reach " + v.value.to_exact_string());
    }
    for (const auto& p : path_limits(out, h, btil[h], false, opt.budget, certified, notes)) {
      SupResult l = path_sup(p, s.value, opt.budget);
      if (!l.certified) certified = false;
      if (c.below < l.value) {
        c.below = l.value;
        c.evidence.push_back("row " + std::to_string(h + 1) + ": limits below S along " + l.witness.to_string() +
                             " reach " + l.value.to_exact_string());
      }
    }
  }
  for (const auto& n : notes) c.evidence.push_back(n);
  c.evidence.push_back("sup of accumulation values below S = " + c.below.to_exact_string() + ", S = " +
                       s.value.to_exact_string() + (s.attained ? " (attained)" : " (not attained)"));
  if (!s.attained) {
    c.status = DpStatus::Fails;
    return c;
  }
  DpStatus cmp = c.below.is_neg_inf() ? DpStatus::Holds : strictly_below(c.below, s.value, opt.tolerance);
  if (cmp == DpStatus::Holds && !certified) cmp = DpStatus::Unknown;
  c.status = cmp;
  return c;
}

DpCheck check_DP2(const EliminationOutput& out, const RhsFamily& b, const LValue& l, const AnalysisOptions& opt) {
  DpCheck c;
  c.reference = l.value;
  c.below = ExtReal::neg_inf();
  auto rows = out.of_class(RowClass::I4);
  if (rows.empty()) {
    c.status = DpStatus::Vacuous;
    c.evidence.push_back("no rows with a nonzero remaining coefficient");
    return c;
  }
  auto btil = fm_bar(out, b);
  bool certified = l.certified;
  std::vector<std::string> notes;
  for (std::size_t h : rows) {
    for (const auto& p : path_limits(out, h, btil[h], true, opt.budget, certified, notes)) {
      SupResult v = path_sup(p, l.value, opt.budget);
      if (!v.certified) certified = false;
      if (c.below < v.value) {
        c.below = v.value;
        c.evidence.push_back("row " + std::to_string(h + 1) + ": vanishing-path limits below L along " +
                             v.witness.to_string() + " reach " + v.value.to_exact_string());
      }
    }
  }
  for (const auto& n : notes) c.evidence.push_back(n);
  c.evidence.push_back("sup of vanishing-path limits below L = " + c.below.to_exact_string() + ", L = " +
                       l.value.to_exact_string());
  DpStatus cmp = c.below.is_neg_inf() ? DpStatus::Holds : strictly_below(c.below, l.value, opt.tolerance);
  if (cmp == DpStatus::Holds && !certified) cmp = DpStatus::Unknown;
  c.status = cmp;
  return c;
}

DpVerdict dp_verdict(const SilpInstance& inst, const EliminationOutput& out, const AnalysisReport& report,
                     const AnalysisOptions& opt) {
  DpVerdict v;
  v.instance = inst.name;
  RhsFamily b = inst.rhs();
  v.dp1 = check_DP1(out, b, report.S, opt);
  v.dp2 = check_DP2(out, b, report.L, opt);
  v.multiplier_bound = report.multiplier_bound;
  auto ok = [](DpStatus s) { return s == DpStatus::Holds || s == DpStatus::Vacuous; };
  bool finite_bound = v.multiplier_bound.value.is_finite() && v.multiplier_bound.certified;
  bool solvable = report.feasibility.verdict == Feasibility::Feasible && report.OV.value.is_finite();
  v.sufficient_DP = solvable && ok(v.dp1.status) && ok(v.dp2.status) && finite_bound;
  v.sd_certificate = solvable && finite_bound;
  if (!solvable) v.notes.push_back("b is not known to be feasible with finite OV; no verdict is certified");
  if (!finite_bound) v.notes.push_back("multiplier bound " + v.multiplier_bound.value.to_exact_string() +
                                       (v.multiplier_bound.certified ? "" : " (uncertified)") +
                                       ": no strong duality certificate over bounded families");
  if (report.gap == GapClass::Gap) v.notes.push_back("finite-support dual has a duality gap");

  SpaceVerdict u{SpaceTag::U, DpStatus::Unknown, DpStatus::Unknown, "b infeasible or OV not finite"};
  if (solvable) {
    u.sd = u.dp = DpStatus::Holds;
    u.basis = "base dual along " + witness_sequence(report).to_string(out);
  }
  SpaceVerdict bounded{SpaceTag::Bounded, DpStatus::Unknown, DpStatus::Unknown, "no certificate"};
  if (v.sd_certificate) {
    bounded.sd = DpStatus::Holds;
    bounded.basis = "multiplier bound " + v.multiplier_bound.value.to_exact_string();
  }
  if (v.sufficient_DP) {
    bounded.dp = DpStatus::Holds;
    bounded.basis += "; both accumulation conditions hold";
  }
  SpaceVerdict all{SpaceTag::All, DpStatus::Unknown, DpStatus::Unknown, "no certificate for unbounded families"};
  v.spaces = {u, bounded, all};
  return v;
}

void record_dp_failure(DpVerdict& v, SpaceTag t, const std::string& why) {
  for (auto& s : v.spaces) {
    if (static_cast<int>(s.space) < static_cast<int>(t)) continue;
    s.dp = DpStatus::Fails;
    s.basis = why;
  }
  v.notes.push_back("pricing fails in space " + to_string(t) + ": " + why);
}

ConeResult tight_cone_check(const SilpInstance& inst, const EliminationOutput& out, const std::vector<mpq_class>& x,
                            const AnalysisOptions& opt) {
  if (x.size() != inst.n()) throw DimensionMismatch(x.size(), inst.n());
  constexpr std::size_t cap = 1000;
  ConeResult g;

  FiniteSystem fs;
  fs.name = inst.name;
  fs.vars = inst.vars;
  fs.objective = inst.objective;
  bool truncated = false;
  for (const auto& blk : inst.blocks) {
    Expr res = -blk.rhs;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k] != 0) res += blk.coeffs[k].scale(x[k]);
    SignResult s = sign_over(res, blk.domain, opt.budget);
    if (s.sign == Sign::Unknown) {
      g.note = "sign of the residual on block " + blk.label + " not certified";
      return g;
    }
    if (s.sign != Sign::NonNegative && s.sign != Sign::IdenticallyZero) {
      g.verdict = ConeVerdict::NotApplicable;
      g.note = "x is infeasible on block " + blk.label;
      return g;
    }
    std::vector<Binding> tight;
    auto add = [&](const Binding& p) {
      if (fs.rows.size() >= cap) {
        truncated = true;
        return false;
      }
      FiniteRow r;
      for (const auto& c : blk.coeffs) r.a.push_back(c.eval(p));
      r.rhs = blk.rhs.eval(p);
      r.block = blk.label;
      r.at = p;
      fs.rows.push_back(std::move(r));
      return true;
    };
    if (s.sign == Sign::IdenticallyZero) {
      std::size_t room = cap - std::min(cap, fs.rows.size());
      auto dom = blk.domain.finite() ? std::optional<IndexDomain>(blk.domain)
                                     : blk.domain.truncated(mpz_class(std::to_string(cap + 1000)));
      if (!dom) continue;
      if (!blk.domain.finite() || *dom->count() > room) truncated = true;
      for_each_point(*dom, add);
      continue;
    }
    auto roots = integer_roots(res, blk.domain, cap, opt.budget);
    if (!roots) {
      g.note = "tight rows of block " + blk.label + " not enumerated";
      return g;
    }
    for (const auto& p : roots->points)
      if (!add(p)) break;
  }
  g.tight_rows = fs.rows.size();
  if (truncated) g.note = "tight set sampled at " + std::to_string(cap) + " rows";

  // c = sum v(i) a(i), v >= 0 exactly when the LP over the tight rows is bounded.
  LpResult lp = solve_exact(fs);
  if (lp.status != LpStatus::Optimal) {
    g.verdict = ConeVerdict::NotApplicable;
    if (!g.note.empty()) g.note += "; ";
    g.note += "c is not in the cone of the tight rows";
    return g;
  }
  for (std::size_t j = 0; j < fs.rows.size(); ++j) {
    if (lp.duals[j] == 0) continue;
    std::string where = fs.rows[j].block;
    if (!fs.rows[j].at.empty()) {
      where += "[";
      bool first = true;
      for (const auto& [name, v] : fs.rows[j].at) {
        where += (first ? "" : ",") + name + "=" + v.get_str();
        first = false;
      }
      where += "]";
    }
    g.certificate.emplace_back(where, lp.duals[j]);
  }
  g.verdict = ConeVerdict::ImpliesSgeqLAndSolvable;
  SValue s = compute_S(out, inst.rhs(), opt);
  LValue l = compute_L(out, inst.rhs(), opt);
  bool consistent = s.attained && !(s.value < l.value);
  g.note = std::string(consistent ? "cross-check passed" : "cross-check failed") + ": S = " + s.value.to_exact_string() +
           (s.attained ? " (attained)" : " (not attained)") + ", L = " + l.value.to_exact_string();
  return g;
}

namespace {

detail::json coords_json(const SpanCoordinates& c) {
  detail::json alpha = detail::json::array();
  for (const auto& a : c.alpha) alpha.push_back(rational_to_string(a));
  return {{"alpha0", rational_to_string(c.alpha0)}, {"alpha", alpha}, {"residual_verified", c.residual_verified}};
}

detail::json check_json(const DpCheck& c) {
  return {{"status", to_string(c.status)},
          {"reference", c.reference.to_exact_string()},
          {"reference_attained", c.reference_attained},
          {"sup_below", c.below.to_exact_string()},
          {"evidence", c.evidence}};
}

}  // namespace

std::string pricing_json(const PricingReport& r, const EliminationOutput& out) {
  using detail::ext_json;
  detail::json j;
  j["instance"] = r.instance;
  detail::json dir = detail::json::object();
  for (const auto& [k, v] : r.direction) dir[k] = v.to_string();
  j["direction"] = dir;
  j["space"] = to_string(r.space);
  j["in_U"] = r.in_U;
  j["coordinates"] = r.coords ? coords_json(*r.coords) : detail::json(nullptr);
  j["OV_b"] = r.ov_b.to_exact_string();
  j["psi_d"] = r.psi_d.to_string();
  j["functional"] = r.functional_path ? detail::json(r.functional_path->to_string(out)) : detail::json(nullptr);
  j["eps_hat"] = r.eps_hat ? detail::json(rational_to_string(*r.eps_hat)) : detail::json(nullptr);
  detail::json table = detail::json::array();
  for (const auto& row : r.table)
    table.push_back({{"eps", rational_to_string(row.eps)},
                     {"OV", row.ov.to_exact_string()},
                     {"OV_decimal", ext_json(row.ov)},
                     {"predicted", row.predicted.to_exact_string()},
                     {"agrees", row.agrees}});
  j["table"] = table;
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  return j.dump(2);
}

std::string pricing_text(const PricingReport& r, const EliminationOutput& out) {
  std::ostringstream os;
  os << "instance: " << r.instance << "\n";
  os << "space: " << to_string(r.space) << (r.in_U ? " (in U)" : "") << "\n";
  if (r.coords) {
    os << "coordinates: alpha0 = " << rational_to_string(r.coords->alpha0);
    for (std::size_t k = 0; k < r.coords->alpha.size(); ++k)
      os << ", alpha" << k + 1 << " = " << rational_to_string(r.coords->alpha[k]);
    os << "\n";
  }
  os << "OV(b): " << r.ov_b.to_exact_string() << "\n";
  os << "psi(d): " << r.psi_d.to_string() << "\n";
  if (r.functional_path) os << "functional: " << r.functional_path->to_string(out) << "\n";
  if (r.eps_hat) os << "eps_hat: " << rational_to_string(*r.eps_hat) << "\n";
  if (!r.table.empty()) {
    os << "eps | OV(b+eps d) | OV(b)+eps psi(d) | agrees\n";
    for (const auto& row : r.table)
      os << rational_to_string(row.eps) << " | " << row.ov.to_exact_string() << " | " << row.predicted.to_exact_string()
         << " | " << (row.agrees ? "yes" : "no") << "\n";
  }
  os << "verdict: " << to_string(r.verdict) << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string dp_json(const DpVerdict& v) {
  detail::json j;
  j["instance"] = v.instance;
  j["dp1"] = check_json(v.dp1);
  j["dp2"] = check_json(v.dp2);
  j["multiplier_bound"] = v.multiplier_bound.value.to_exact_string();
  j["multiplier_bound_certified"] = v.multiplier_bound.certified;
  j["sufficient_DP"] = v.sufficient_DP;
  j["sd_certificate"] = v.sd_certificate;
  detail::json spaces = detail::json::array();
  for (const auto& s : v.spaces)
    spaces.push_back({{"space", to_string(s.space)}, {"SD", to_string(s.sd)}, {"DP", to_string(s.dp)}, {"basis", s.basis}});
  j["spaces"] = spaces;
  j["notes"] = v.notes;
  return j.dump(2);
}

std::string dp_text(const DpVerdict& v) {
  std::ostringstream os;
  os << "instance: " << v.instance << "\n";
  auto check = [&](const char* name, const DpCheck& c) {
    os << name << ": " << to_string(c.status) << "\n";
    for (const auto& e : c.evidence) os << "  " << e << "\n";
  };
  check("DP.1", v.dp1);
  check("DP.2", v.dp2);
  os << "multiplier_bound: " << v.multiplier_bound.value.to_exact_string()
     << (v.multiplier_bound.certified ? "" : " (uncertified)") << "\n";
  os << "sufficient_DP: " << (v.sufficient_DP ? "true" : "false") << "\n";
  os << "sd_certificate: " << (v.sd_certificate ? "true" : "false") << "\n";
  for (const auto& s : v.spaces)
    os << "space " << to_string(s.space) << ": SD " << to_string(s.sd) << ", DP " << to_string(s.dp) << " (" << s.basis
       << ")\n";
  for (const auto& n : v.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace silp
