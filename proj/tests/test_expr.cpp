#include "doctest.h"

#include <random>

#include "silp/asymptotics.hpp"
#include "silp/errors.hpp"
#include "silp/expr.hpp"

using namespace silp;

namespace {

Expr E(const char* s) { return parse_expr(s); }
mpq_class Q(const char* s) { return mpq_class(s); }

IndexDomain axis(const char* v, long lo, std::optional<long> hi = std::nullopt) {
  IndexDomain d;
  d.axes.push_back({v, lo, hi ? std::optional<mpz_class>(*hi) : std::nullopt});
  return d;
}

}  // namespace

TEST_CASE("eval of closed forms") {
  CHECK(E("1/i^2").eval({{"i", 5}}) == Q("1/25"));
  CHECK(E("1/(m+n)").eval({{"m", 1}, {"n", 1}}) == Q("1/2"));
  CHECK(E("-1/(i*(1+i))").eval({{"i", 5}}) == Q("-1/30"));
  CHECK_THROWS_AS(E("1/i").eval({}), UnboundVariable);
  CHECK_THROWS_AS(E("1/(i-2)").eval({{"i", 2}}), DivisionByZero);
}

TEST_CASE("arith and canonical form") {
  CHECK(E("1/i") + E("1/i") == E("2/i"));
  CHECK(E("1/i^2").scale(-1) == E("-1/i^2"));
  CHECK(E("1/i") * E("1") + E("1") == E("(i+1)/i"));
  CHECK(E("(i^2-1)/(i-1)") == E("i+1"));
  CHECK(E("(2*m*n+2*n)/(4*n)") == E("(m+1)/2"));
  CHECK(E("x/(-y)") == E("-x/y"));
  CHECK_THROWS_AS(E("1/i") / E("0"), DivisionByZero);
  CHECK_THROWS_AS(E("1/(i-i)"), ParseError);
  Expr e = E("(3*i^2 + 6*i)/(9*i*j + 3*j)");
  CHECK(Expr(e.num(), e.den()) == e);
  CHECK(parse_expr(e.to_string()) == e);
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_expr("1 + * 2", 3, 10);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.line == 3);
    CHECK(err.column == 15);
  }
  CHECK_THROWS_AS(E("i^j"), ParseError);
  CHECK_THROWS_AS(E("(i+1"), ParseError);
}

TEST_CASE("multivariate gcd cancels common factors") {
  Expr a = E("(m+n)*(m-2*n)^2/((m-2*n)*(m*n+1))");
  CHECK(a == E("(m+n)*(m-2*n)/(m*n+1)"));
  Expr b = E("(i^3 - j^3)/(i^2 - j^2)");
  CHECK(b == E("(i^2+i*j+j^2)/(i+j)"));
}

TEST_CASE("substitution and derivative") {
  CHECK(E("1/i").substitute("i", E("i+1")) == E("1/(i+1)"));
  CHECK(E("i^2/(i+1)").derivative("i") == E("(i^2+2*i)/(i+1)^2"));
  CHECK(E("m/(m+n)").fix("n", 3) == E("m/(m+3)"));
}

TEST_CASE("limit at infinity") {
  auto l1 = limit_at_infinity(E("1 - d/i"), {"i"}, {{"d", 10}});
  REQUIRE(l1.exists);
  CHECK(l1.value == ExtReal(1));
  auto l2 = limit_at_infinity(E("-1/(i*(1+i))"), {"i"});
  CHECK(l2.value == ExtReal(0));
  auto l3 = limit_at_infinity(E("-1/n^2 + 2/(k*n)"), {"n"}, {{"k", 3}});
  CHECK(l3.value == ExtReal(0));
  auto l4 = limit_at_infinity(E("m/(m+n)"), {"m", "n"});
  CHECK_FALSE(l4.exists);
  auto l5 = limit_at_infinity(E("(i^2+1)/i"), {"i"});
  CHECK(l5.value.is_pos_inf());
  auto l6 = limit_at_infinity(E("1/(m+n)"), {"m", "n"});
  CHECK(l6.exists);
  CHECK(l6.joint_certified);
  CHECK_THROWS_AS(limit_at_infinity(E("1/(k-3)+i"), {"i"}, {{"k", 3}}), DegenerateDenominator);
  CHECK_THROWS_AS(limit_at_infinity(E("1/i + j"), {"i"}), UnboundVariable);
}

TEST_CASE("sign over domains") {
  CHECK(sign_over(E("1/i^2"), axis("i", 1)).sign == Sign::NonNegative);
  CHECK(sign_over(E("-1/i"), axis("i", 5)).sign == Sign::NonPositive);
  auto mixed = sign_over(E("1 - 2/i"), axis("i", 1));
  REQUIRE(mixed.sign == Sign::Mixed);
  CHECK(E("1 - 2/i").eval(*mixed.positive_at) > 0);
  CHECK(E("1 - 2/i").eval(*mixed.negative_at) < 0);
  CHECK(sign_over(E("(i-3)^2"), axis("i", 1)).sign == Sign::NonNegative);
  CHECK_FALSE(sign_over(E("(i-3)^2"), axis("i", 1)).strict);
  CHECK(sign_over(E("(i-3)^2"), axis("i", 4)).strict);
  IndexDomain mn;
  mn.axes = {{"m", 1, std::nullopt}, {"n", 1, std::nullopt}};
  CHECK(sign_over(E("1/(m+n)"), mn).strict);
  CHECK(sign_over(E("m - n"), mn).sign == Sign::Mixed);
  CHECK(sign_over(E("0"), mn).sign == Sign::IdenticallyZero);
}

TEST_CASE("sup over grids") {
  auto s1 = sup_over(E("-1/(i*(1+i))"), axis("i", 5));
  CHECK(s1.value == ExtReal(0));
  CHECK_FALSE(s1.attained);
  CHECK(s1.witness.escaping == std::vector<std::string>{"i"});
  auto s2 = sup_over(E("2/i - 10/i^2"), axis("i", 1));
  CHECK(s2.value == ExtReal(Q("1/10")));
  CHECK(s2.attained);
  CHECK(s2.witness.fixed.at("i") == 10);
  auto s3 = sup_over(E("7/3"), axis("i", 4, 9));
  CHECK(s3.value == ExtReal(Q("7/3")));
  CHECK(s3.attained);
  CHECK(s3.witness.fixed.at("i") == 4);
  auto s4 = sup_over(E("2/i - 1000000000000/i^2"), axis("i", 1));
  CHECK(s4.value == ExtReal(Q("1/1000000000000")));
  IndexDomain mn;
  mn.axes = {{"m", 1, std::nullopt}, {"n", 1, std::nullopt}};
  auto s5 = sup_over(E("-1/n^2 + 2/(5*n) - 100/(m+n)"), mn);
  CHECK(s5.value == ExtReal(Q("1/25")));
  CHECK(s5.certified);
  auto s6 = sup_over(E("i/(1+i)"), axis("i", 5));
  CHECK(s6.value == ExtReal(1));
  CHECK_FALSE(s6.attained);
}

TEST_CASE("sup of values strictly below a threshold") {
  auto g = sup_below(E("-1/(i*(1+i))"), axis("i", 5), ExtReal(0));
  CHECK(g.value == ExtReal(0));
  auto h = sup_below(E("(i-3)^2"), axis("i", 1), ExtReal(1));
  CHECK(h.value == ExtReal(0));
  auto k = sup_below(E("2/i"), axis("i", 1), ExtReal(0));
  CHECK(k.value.is_neg_inf());
}

TEST_CASE("property: canon and arith commute with eval") {
  std::mt19937 rng(7);
  const char* corpus[] = {"1/i", "1/i^2", "(i+1)/i", "-1/(i*(1+i))", "i/(i+j)", "1/(i+j)",
                          "(2*i - j)/(j^2 + 1)", "3/7", "i*j - 2", "(i - j)^2/(i + 2*j)"};
  std::uniform_int_distribution<int> pick(0, 9), val(1, 40), op(0, 3);
  for (int t = 0; t < 1000; ++t) {
    Expr a = E(corpus[pick(rng)]), b = E(corpus[pick(rng)]);
    Binding bind{{"i", val(rng)}, {"j", val(rng)}};
    mpq_class va = a.eval(bind), vb = b.eval(bind);
    switch (op(rng)) {
      case 0:
        CHECK((a + b).eval(bind) == va + vb);
        break;
      case 1:
        CHECK((a - b).eval(bind) == va - vb);
        break;
      case 2:
        CHECK((a * b).eval(bind) == va * vb);
        break;
      default:
        if (!b.is_zero() && vb != 0) CHECK((a / b).eval(bind) == va / vb);
    }
    CHECK(Expr(a.num(), a.den()) == a);
  }
}

TEST_CASE("property: sign and sup soundness on samples") {
  std::mt19937 rng(11);
  const char* corpus[] = {"1/i", "-1/i^2", "(i+1)/i", "-1/(i*(1+i))", "1 - 2/i", "(i-4)^2/i",
                          "2/i - 7/i^2", "i/(i+3)", "(i-10)/(i+1)", "5"};
  std::uniform_int_distribution<int> val(1, 100000);
  IndexDomain dom = axis("i", 1);
  for (const char* s : corpus) {
    Expr e = E(s);
    auto sg = sign_over(e, dom);
    auto sp = sup_over(e, dom);
    for (int t = 0; t < 100; ++t) {
      Binding b{{"i", val(rng)}};
      mpq_class v = e.eval(b);
      if (sg.sign == Sign::NonNegative) CHECK(v >= 0);
      if (sg.sign == Sign::NonPositive) CHECK(v <= 0);
      CHECK(ExtReal(v) <= sp.value);
    }
  }
}

TEST_CASE("property: finite limits agree with large evaluations") {
  // Coefficient families of the fixtures (their tails decay at least like 1/i).
  const char* corpus[] = {"1/i",         "1/i^2",         "(i+1)/i", "-1/(i*(1+i))",
                          "1/(1+i)",     "i/(1+i)",       "1/i - 1/i^2", "-1/i^2 + 1/(5*i)"};
  for (const char* s : corpus) {
    Expr e = E(s);
    auto lim = limit_at_infinity(e, {"i"});
    REQUIRE(lim.exists);
    REQUIRE(lim.value.is_finite());
    mpq_class v = e.eval({{"i", 1000000}});
    mpq_class diff = abs(v - lim.value.value());
    CHECK(diff.get_d() <= 1e-6 * (1 + std::abs(lim.value.to_double())));
  }
}
