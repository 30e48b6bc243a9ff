#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "silp/errors.hpp"
#include "silp/fm.hpp"

using namespace silp;

namespace {

std::string fixture(const std::string& name) { return std::string(SILP_FIXTURE_DIR) + "/" + name; }
Expr E(const char* s) { return parse_expr(s); }

FmOptions order(std::vector<std::string> o) {
  FmOptions opt;
  opt.order = std::move(o);
  return opt;
}

Expr weight(const StdRow& r, const std::string& block) {
  for (const auto& [ref, w] : r.mult)
    if (!ref.objective && ref.block == block) return w;
  return Expr(0);
}

Binding random_point(const IndexDomain& dom, std::mt19937& rng) {
  Binding b;
  for (const auto& a : dom.axes) {
    long lo = a.lo.get_si();
    long hi = a.hi ? a.hi->get_si() : lo + 500;
    b[a.name] = std::uniform_int_distribution<long>(lo, hi)(rng);
  }
  return b;
}

// Weighted sum of the evaluated source rows must equal the evaluated output row.
void check_reconstruction(const SilpInstance& inst, const EliminationOutput& out, std::mt19937& rng) {
  for (const auto& row : out.rows) {
    for (int t = 0; t < 100; ++t) {
      Binding at = random_point(row.domain, rng);
      mpq_class z = 0, rhs = 0;
      std::vector<mpq_class> x(inst.n(), 0);
      for (const auto& [ref, w] : row.mult) {
        mpq_class wv = w.eval(at);
        CHECK(wv >= 0);
        if (ref.objective) {
          z += wv;
          for (std::size_t k = 0; k < inst.n(); ++k) x[k] -= wv * inst.objective[k];
          continue;
        }
        const ConstraintBlock* b = inst.block(ref.block);
        Binding src;
        for (const auto& [ax, e] : ref.binding) {
          mpq_class v = e.eval(at);
          REQUIRE(v.get_den() == 1);
          src[ax] = v.get_num();
        }
        CHECK(b->domain.contains(src));
        for (std::size_t k = 0; k < inst.n(); ++k) x[k] += wv * b->coeffs[k].eval(src);
        rhs += wv * b->rhs.eval(src);
      }
      CHECK(row.z.eval(at) == z);
      CHECK(row.rhs.eval(at) == rhs);
      for (std::size_t k = 0; k < inst.n(); ++k) CHECK(row.x[k].eval(at) == x[k]);
    }
  }
}

}  // namespace

TEST_CASE("standardize prepends the objective row") {
  auto p = load_instance(fixture("no_primal_solution.silp"));
  auto sys = standardize(p);
  REQUIRE(sys.rows.size() == 2);
  CHECK(sys.rows[0].z == Expr(1));
  CHECK(sys.rows[0].x[0] == Expr(-1));
  CHECK(sys.rows[0].x[1] == Expr(0));
  CHECK(sys.rows[0].rhs == Expr(0));
  CHECK(sys.rows[1].z == Expr(0));
  CHECK(sys.rows[1].x[1] == E("1/i^2"));
  CHECK(sys.rows[1].rhs == E("2/i"));

  auto zero = parse_instance("name: t\nvars: x1\nminimize: 0\nblock a:\n  row: x1 >= 1\n");
  auto zs = standardize(zero);
  CHECK(zs.rows[0].x[0] == Expr(0));
}

TEST_CASE("projection of the limit-dual instance") {
  auto k = load_instance(fixture("limit_dual.silp"));
  auto out = eliminate(k, order({"x3", "x2", "x1"}));
  CHECK(out.eliminated == std::vector<std::string>{"x3", "x2", "x1"});
  CHECK(out.remaining.empty());
  REQUIRE(out.rows.size() == 3);
  for (const auto& r : out.rows) {
    CHECK(r.cls == RowClass::I3);
    CHECK(r.z == Expr(1));
    for (const auto& x : r.x) CHECK(x.is_zero());
    CHECK(r.mult.at(SourceRef::objective_row()) == Expr(1));
  }
  CHECK(out.rows[0].rhs == Expr(-1));
  CHECK(out.rows[0].mult.size() == 2);
  CHECK(weight(out.rows[0], "r1") == Expr(1));

  CHECK(out.rows[1].rhs == Expr(-1));
  CHECK(out.rows[1].mult.size() == 3);
  CHECK(weight(out.rows[1], "r2") == Expr(1));
  CHECK(weight(out.rows[1], "r4") == Expr(1));

  const StdRow& t = out.rows[2];
  CHECK(t.rhs == E("-1/(i*(1+i))"));
  CHECK(t.mult.size() == 4);
  CHECK(weight(t, "r3") == E("1/(i*(1+i))"));
  CHECK(weight(t, "r4") == E("1/(1+i)"));
  CHECK(weight(t, "tail") == E("i/(1+i)"));
  CHECK(out.of_class(RowClass::I4).empty());

  auto fb = fm_bar(out, k.rhs());
  CHECK(fb == std::vector<Expr>{Expr(-1), Expr(-1), E("-1/(i*(1+i))")});
  auto e4 = load_direction(fixture("limit_dual_e4.dir"), k);
  CHECK(fm_bar(out, e4.values) == std::vector<Expr>{Expr(0), Expr(1), E("1/(1+i)")});
  auto bound = multiplier_bound(out);
  CHECK(bound.value == ExtReal(1));
  CHECK(bound.certified);
}

TEST_CASE("projection with an unbounded multiplier") {
  auto g = load_instance(fixture("infinite_gap.silp"));
  auto out = eliminate(g);
  REQUIRE(out.rows.size() == 1);
  const StdRow& r = out.rows[0];
  CHECK(r.cls == RowClass::I4);
  CHECK(r.x[1] == E("1/i"));
  CHECK(r.rhs == Expr(1));
  CHECK(weight(r, "fam") == E("i"));
  CHECK(fm_bar(out, g.rhs()) == std::vector<Expr>{Expr(1)});
  CHECK(multiplier_bound(out).value.is_pos_inf());
  CHECK(out.remaining == std::vector<std::string>{"x2"});
  CHECK(out.remaining_sign[1] == 1);
}

TEST_CASE("projection without primal solution") {
  auto p = load_instance(fixture("no_primal_solution.silp"));
  auto out = eliminate(p);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].cls == RowClass::I4);
  CHECK(out.rows[0].x[1] == E("1/i^2"));
  CHECK(out.rows[0].rhs == E("2/i"));
  CHECK(out.rows[0].mult.size() == 2);
  for (const auto& [ref, w] : out.rows[0].mult) CHECK(w == Expr(1));
  CHECK(multiplier_bound(out).value == ExtReal(1));
}

TEST_CASE("projection over a product domain") {
  auto g = load_instance(fixture("grid_pricing.silp"));
  auto out = eliminate(g);
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].cls == RowClass::I4);
  CHECK(out.rows[0].x[1] == E("1/(m+n)"));
  CHECK(fm_bar(out, g.rhs()) == std::vector<Expr>{E("-1/n^2")});
}

TEST_CASE("elimination errors") {
  auto mixed = parse_instance(
      "name: t\nvars: x1\nminimize: x1\nblock a i in 1..inf:\n  row: (1 - 2/i)*x1 >= 0\n");
  CHECK_THROWS_AS(eliminate(mixed), SignUncertified);
  auto wide = parse_instance(
      "name: t\nvars: x1 x2\nminimize: x1\n"
      "block a i in 1..inf x j in 1..inf x k in 1..inf:\n  row: x1 - x2 >= 1/(i+j+k)\n"
      "block b p in 1..inf x q in 1..inf:\n  row: x2 >= 1/(p+q)\n");
  CHECK_THROWS_AS(eliminate(wide), DimensionCapExceeded);
  FmOptions big;
  big.dim_cap = 6;
  CHECK_NOTHROW(eliminate(wide, big));
}

TEST_CASE("clashing index names are renamed") {
  auto inst = parse_instance(
      "name: t\nvars: x1 x2\nminimize: x2\n"
      "block a i in 1..inf:\n  row: x1 + x2 >= 1/i\n"
      "block b i in 1..inf:\n  row: -x1 + (1/i)*x2 >= -1/i^2\n");
  auto out = eliminate(inst);
  std::mt19937 rng(3);
  check_reconstruction(inst, out, rng);
  bool paired = false;
  for (const auto& r : out.rows)
    if (r.domain.axes.size() == 2) {
      paired = true;
      CHECK(r.domain.axes[0].name != r.domain.axes[1].name);
    }
  CHECK(paired);
}

TEST_CASE("fm-dump is byte stable") {
  auto k = load_instance(fixture("limit_dual.silp"));
  auto a = eliminate(k, order({"x3", "x2", "x1"}));
  auto b = eliminate(load_instance(fixture("limit_dual.silp")), order({"x3", "x2", "x1"}));
  CHECK(fm_dump_text(a) == fm_dump_text(b));
  CHECK(fm_dump_json(a) == fm_dump_json(b));
  std::ifstream in(std::string(SILP_GOLDEN_DIR) + "/limit_dual.fm.txt");
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(fm_dump_text(a) == ss.str());
}

TEST_CASE("property: multiplier reconstruction") {
  std::mt19937 rng(17);
  for (const char* f : {"limit_dual.silp", "infinite_gap.silp", "grid_pricing.silp",
                        "no_primal_solution.silp", "finite_lp.silp", "infeasible.silp"}) {
    auto inst = load_instance(fixture(f));
    check_reconstruction(inst, eliminate(inst), rng);
  }
}

TEST_CASE("property: linearity, positivity and the objective shift") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 4);
  for (const char* f : {"limit_dual.silp", "infinite_gap.silp", "grid_pricing.silp",
                        "no_primal_solution.silp"}) {
    auto inst = load_instance(fixture(f));
    auto out = eliminate(inst);
    RhsFamily y1 = inst.rhs(), y2 = inst.column(0);
    for (int t = 0; t < 5; ++t) {
      mpq_class a(num(rng), den(rng)), b(num(rng), den(rng));
      a.canonicalize();
      b.canonicalize();
      auto lhs = fm_bar(out, scaled(y1, a) + scaled(y2, b));
      auto f1 = fm_bar(out, y1), f2 = fm_bar(out, y2);
      for (std::size_t h = 0; h < lhs.size(); ++h) CHECK(lhs[h] == f1[h].scale(a) + f2[h].scale(b));
      auto shifted = fm_apply(out, a, y1);
      for (std::size_t h = 0; h < lhs.size(); ++h)
        if (out.rows[h].cls == RowClass::I3 || out.rows[h].cls == RowClass::I4)
          CHECK(shifted[h] - f1[h] == Expr(a));
    }
    RhsFamily pos;
    for (const auto& blk : inst.blocks) {
      Expr e(1);
      for (const auto& ax : blk.domain.axes) e = e / (Expr::var(ax.name) * Expr::var(ax.name));
      pos[blk.label] = e;
    }
    auto fp = fm_bar(out, pos);
    for (std::size_t h = 0; h < fp.size(); ++h) {
      auto s = sign_over(fp[h], out.rows[h].domain);
      CHECK((s.sign == Sign::NonNegative || s.sign == Sign::IdenticallyZero));
    }
    RhsFamily zero;
    for (const auto& blk : inst.blocks) zero[blk.label] = Expr(0);
    for (const auto& e : fm_bar(out, zero)) CHECK(e.is_zero());
  }
}

TEST_CASE("property: multipliers do not depend on the right-hand side") {
  for (const char* f : {"limit_dual.silp", "infinite_gap.silp", "grid_pricing.silp",
                        "no_primal_solution.silp", "finite_lp.silp"}) {
    auto inst = load_instance(fixture(f));
    RhsFamily other;
    for (const auto& blk : inst.blocks) other[blk.label] = blk.rhs * Expr(3) + Expr(1);
    auto a = eliminate(inst), b = eliminate(inst.with_rhs(other));
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t h = 0; h < a.rows.size(); ++h) {
      CHECK(a.rows[h].mult == b.rows[h].mult);
      CHECK(a.rows[h].cls == b.rows[h].cls);
    }
  }
}
