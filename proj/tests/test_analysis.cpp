#include "doctest.h"

#include "corpus.hpp"
#include "random_instances.hpp"
#include "silp/analysis.hpp"
#include "silp/errors.hpp"

using namespace silp;
using silp::testing::fixture_path;

namespace {

struct Loaded {
  SilpInstance inst;
  EliminationOutput out;
};

Loaded load(const std::string& name, FmOptions opt = {}) {
  Loaded l{load_instance(fixture_path(name + ".silp")), {}};
  l.out = eliminate(l.inst, opt);
  return l;
}

Expr E(const char* s) { return parse_expr(s); }

}  // namespace

TEST_CASE("omega on the fixtures") {
  auto p = load("no_primal_solution");
  for (long d : {10L, 100L, 1000L}) {
    auto w = omega(p.out, p.inst.rhs(), d);
    CHECK(w.value == ExtReal(mpq_class(1, d)));
    CHECK(w.attained);
    CHECK(w.witness.fixed.at("i") == d);
  }
  auto g = load("infinite_gap");
  auto w = omega(g.out, g.inst.rhs(), 100);
  CHECK(w.value == ExtReal(1));
  CHECK_FALSE(w.attained);
  auto k = load("limit_dual", {{"x3", "x2", "x1"}});
  CHECK(omega(k.out, k.inst.rhs(), 5).value.is_neg_inf());
}

TEST_CASE("limit-dual analysis") {
  auto k = load("limit_dual", {{"x3", "x2", "x1"}});
  auto r = analyze(k.inst, k.out);
  CHECK(r.feasibility.verdict == Feasibility::Feasible);
  CHECK(r.S.value == ExtReal(0));
  CHECK_FALSE(r.S.attained);
  REQUIRE(r.S.witness);
  CHECK(r.S.witness->row == 2);
  CHECK(r.S.witness->witness.escaping == std::vector<std::string>{"i"});
  CHECK(r.L.value.is_neg_inf());
  CHECK(r.OV.value == ExtReal(0));
  CHECK(r.OV.dominant == Dominant::S);
  CHECK(r.gap == GapClass::NoGap);
  CHECK(r.multiplier_bound.value == ExtReal(1));
  CHECK(r.certified);
  auto w = witness_sequence(r);
  CHECK(w.cls == RowClass::I3);
}

TEST_CASE("infinite gap analysis") {
  auto g = load("infinite_gap");
  auto r = analyze(g.inst, g.out);
  CHECK(r.feasibility.verdict == Feasibility::Feasible);
  CHECK(r.S.value.is_neg_inf());
  CHECK(r.L.value == ExtReal(1));
  CHECK(approx_equal(r.L.numeric, ExtReal(1)));
  CHECK_FALSE(r.L.discrepancy);
  CHECK(r.OV.value == ExtReal(1));
  CHECK(r.OV.dominant == Dominant::L);
  CHECK(r.gap == GapClass::Gap);
  CHECK(r.multiplier_bound.value.is_pos_inf());
  auto w = witness_sequence(r);
  CHECK(w.cls == RowClass::I4);
  REQUIRE(w.coeff_limits.size() == 1);
  CHECK(w.coeff_limits[0] == ExtReal(0));
}

TEST_CASE("product-domain analysis") {
  auto g = load("grid_pricing");
  auto r = analyze(g.inst, g.out);
  CHECK(r.L.value == ExtReal(0));
  CHECK(r.OV.value == ExtReal(0));
  CHECK(r.OV.dominant == Dominant::L);
  CHECK(r.S.value.is_neg_inf());
  auto d = load_direction(fixture_path("grid_pricing_inv_n.dir"), g.inst);
  for (long n : {5L, 10L, 100L}) {
    auto y = g.inst.rhs() + scaled(d.values, mpq_class(2, n));
    auto l = compute_L(g.out, y);
    CHECK(l.value == ExtReal(mpq_class(1, n * n)));
    CHECK(l.certified);
    CHECK(check_feasibility(g.inst, g.out, y).verdict == Feasibility::Feasible);
  }
}

TEST_CASE("no-primal-solution analysis") {
  auto p = load("no_primal_solution");
  auto r = analyze(p.inst, p.out);
  CHECK(p.out.of_class(RowClass::I4).size() == 1);
  CHECK(r.L.value == ExtReal(0));
  CHECK(r.OV.value == ExtReal(0));
  CHECK(r.multiplier_bound.value == ExtReal(1));
}

TEST_CASE("feasibility verdicts") {
  auto inf = load("infeasible");
  auto r = analyze(inf.inst, inf.out);
  CHECK(r.feasibility.verdict == Feasibility::Infeasible);
  CHECK(r.OV.value.is_pos_inf());
  CHECK(r.gap == GapClass::Unknown);
  auto k = load("limit_dual");
  auto f = check_feasibility(k.inst, k.out, k.inst.rhs());
  CHECK(f.verdict == Feasibility::Feasible);
  CHECK(*f.point == std::vector<mpq_class>{0, 0, 0});
  auto lp = load("finite_lp");
  auto rl = analyze(lp.inst, lp.out);
  CHECK(rl.OV.value == ExtReal(mpq_class(7, 5)));
  CHECK(rl.S.attained);
  CHECK(witness_sequence(rl).witness.is_point());
  auto tail = parse_instance("name: t\nvars: x1\nminimize: x1\nblock a i in 1..inf:\n  row: (1/i)*x1 >= 1\n");
  auto to = eliminate(tail);
  // Every truncation is feasible; only S = +inf rules the system out.
  CHECK(check_feasibility(tail, to, tail.rhs()).verdict == Feasibility::Unknown);
  auto rt = analyze(tail, to);
  CHECK(rt.S.value.is_pos_inf());
  CHECK(rt.feasibility.verdict == Feasibility::Infeasible);
}

TEST_CASE("report serialization") {
  auto g = load("infinite_gap");
  auto r = analyze(g.inst, g.out);
  auto j = report_json(r, g.out);
  CHECK(j.find("\"gap_fdsilp\": \"Gap\"") != std::string::npos);
  CHECK(j.find("\"multiplier_bound\": \"inf\"") != std::string::npos);
  CHECK(j.find("\"S\"") != std::string::npos);
  CHECK(report_text(r, g.out).find("OV: 1") != std::string::npos);
}

TEST_CASE("property: omega is nonincreasing in delta") {
  std::mt19937 rng(31);
  int cases = 0;
  while (cases < 1000) {
    for (const auto& name : testing::fixture_names()) {
      auto l = load(name);
      auto y = testing::random_family(l.inst, rng);
      auto ytil = projected(l.out, y);
      mpq_class d1 = testing::random_rational(rng, 0, 50, 3);
      mpq_class d2 = d1 + testing::random_rational(rng, 1, 200, 1);
      CHECK(omega(l.out, ytil, d2).value <= omega(l.out, ytil, d1).value);
      ++cases;
    }
  }
}

TEST_CASE("property: sublinearity and homogeneity of S, L and OV") {
  std::mt19937 rng(37);
  std::vector<Loaded> all;
  for (const auto& name : testing::fixture_names()) all.push_back(load(name));
  AnalysisOptions opt;
  for (int t = 0; t < 100; ++t) {
    auto& l = all[t % all.size()];
    auto y1 = testing::random_family(l.inst, rng), y2 = testing::random_family(l.inst, rng);
    auto s1 = compute_S(l.out, y1, opt), s2 = compute_S(l.out, y2, opt), s12 = compute_S(l.out, y1 + y2, opt);
    auto L1 = compute_L(l.out, y1, opt), L2 = compute_L(l.out, y2, opt), L12 = compute_L(l.out, y1 + y2, opt);
    CHECK(s12.value <= s1.value + s2.value);
    CHECK(L12.value <= L1.value + L2.value);
    ExtReal ov1 = max(s1.value, L1.value), ov2 = max(s2.value, L2.value), ov12 = max(s12.value, L12.value);
    CHECK(ov12 <= ov1 + ov2);
    for (const mpq_class lam : {mpq_class(1, 4), mpq_class(1, 2), mpq_class(3, 4), mpq_class(3)}) {
      CHECK(compute_S(l.out, scaled(y1, lam), opt).value == lam * s1.value);
      CHECK(compute_L(l.out, scaled(y1, lam), opt).value == lam * L1.value);
    }
  }
}

TEST_CASE("property: convex combinations along a shared witness") {
  std::mt19937 rng(41);
  int shared_s = 0, shared_l = 0;
  for (int t = 0; t < 200; ++t) {
    auto l = load(testing::fixture_names()[t % 4]);
    auto y1 = testing::random_family(l.inst, rng), y2 = testing::random_family(l.inst, rng);
    auto L1 = compute_L(l.out, y1), L2 = compute_L(l.out, y2);
    auto S1 = compute_S(l.out, y1), S2 = compute_S(l.out, y2);
    for (const mpq_class lam : {mpq_class(1, 4), mpq_class(1, 2), mpq_class(3, 4)}) {
      auto mix = scaled(y1, lam) + scaled(y2, 1 - lam);
      if (L1.witness && L2.witness && L1.value.is_finite() && L2.value.is_finite() &&
          L1.witness->row == L2.witness->row && L1.witness->witness.fixed == L2.witness->witness.fixed &&
          L1.witness->witness.escaping == L2.witness->witness.escaping) {
        ++shared_l;
        CHECK(compute_L(l.out, mix).value == ExtReal(lam * L1.value.value() + (1 - lam) * L2.value.value()));
      }
      if (S1.witness && S2.witness && S1.value.is_finite() && S2.value.is_finite() &&
          S1.witness->row == S2.witness->row && S1.witness->witness.fixed == S2.witness->witness.fixed &&
          S1.witness->witness.escaping == S2.witness->witness.escaping) {
        ++shared_s;
        CHECK(compute_S(l.out, mix).value == ExtReal(lam * S1.value.value() + (1 - lam) * S2.value.value()));
      }
    }
  }
  CHECK(shared_l > 0);
  CHECK(shared_s > 0);
}

TEST_CASE("property: limits along paths are bounded by S and L") {
  std::mt19937 rng(43);
  for (int t = 0; t < 100; ++t) {
    auto l = load(testing::fixture_names()[t % 4]);
    auto y = testing::random_family(l.inst, rng);
    auto ytil = projected(l.out, y);
    auto S = compute_S(l.out, y);
    auto L = compute_L(l.out, y);
    for (std::size_t h = 0; h < l.out.rows.size(); ++h) {
      const auto& row = l.out.rows[h];
      if (row.cls != RowClass::I3 && row.cls != RowClass::I4) continue;
      const ExtReal& bound = row.cls == RowClass::I3 ? S.value : L.value;
      Expr pen = penalty(l.out, h);
      for (const auto& fam : escape_families(row.domain)) {
        auto pts = fam.rest.truncated(6);
        std::vector<Binding> points;
        if (fam.rest.axes.empty())
          points.emplace_back();
        else if (pts)
          for_each_point(*pts, [&](const Binding& b) {
            points.push_back(b);
            return true;
          });
        for (const auto& p : points) {
          Binding fixed;
          for (const auto& [v, x] : p) fixed[v] = x;
          auto lp = limit_at_infinity(pen, fam.escaping, fixed);
          if (row.cls == RowClass::I4 && !(lp.exists && lp.value == ExtReal(0))) continue;
          auto ly = limit_at_infinity(ytil[h], fam.escaping, fixed);
          if (ly.exists) CHECK(ly.value <= bound);
        }
      }
    }
  }
}

TEST_CASE("property: finite optimal value at b gives finite values at the columns") {
  for (const auto& name : testing::fixture_names()) {
    auto l = load(name);
    auto ov = optimal_value(l.inst, l.out, l.inst.rhs());
    REQUIRE(ov.is_finite());
    for (std::size_t k = 0; k < l.inst.n(); ++k) {
      auto ak = optimal_value(l.inst, l.out, l.inst.column(k));
      CHECK(ak.is_finite());
    }
  }
}

TEST_CASE("property: truncated optima against the analysis") {
  for (const auto& name : testing::fixture_names()) {
    auto l = load(name);
    auto r = analyze(l.inst, l.out);
    auto sw = fdsilp_estimate(l.inst);
    CHECK(sw.monotone);
    CHECK(sw.sup_estimate <= r.OV.value);
    bool equal = approx_equal(sw.sup_estimate, r.OV.value, 1e-6) ||
                 (sw.sup_estimate.is_finite() && r.OV.value.is_finite() &&
                  abs(sw.sup_estimate.value() - r.OV.value.value()) <= mpq_class(1, 1000000));
    CHECK(equal == (r.gap == GapClass::NoGap));
  }
  std::mt19937 rng(47);
  for (int t = 0; t < 200; ++t) {
    auto inst = testing::random_finite_instance(rng, t);
    auto out = eliminate(inst);
    auto r = analyze(inst, out);
    auto lp = solve_exact(truncate(inst, 1));
    CHECK(r.feasibility.verdict != Feasibility::Unknown);
    CHECK(r.OV.value == lp.ov());
    if (r.feasibility.verdict == Feasibility::Feasible) CHECK(r.gap == GapClass::NoGap);
  }
}
