#pragma once

#include <random>
#include <string>
#include <vector>

#include "silp/model.hpp"

#ifndef SILP_FIXTURE_DIR
#define SILP_FIXTURE_DIR "fixtures"
#endif

namespace silp::testing {

inline std::string fixture_path(const std::string& name) { return std::string(SILP_FIXTURE_DIR) + "/" + name; }

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names{"limit_dual", "infinite_gap", "grid_pricing",
                                              "no_primal_solution"};
  return names;
}

inline mpq_class random_rational(std::mt19937& rng, int lo = -6, int hi = 6, int den = 4) {
  mpq_class q(std::uniform_int_distribution<int>(lo, hi)(rng), std::uniform_int_distribution<int>(1, den)(rng));
  q.canonicalize();
  return q;
}

/// A bounded closed form over the block's axes.
inline Expr random_family_expr(const ConstraintBlock& b, std::mt19937& rng) {
  static const std::vector<std::string> one{"1", "-1", "1/@", "-1/@", "2/@ - 1/@^2", "@/(@+1)", "-1/(@+1)", "1/@^2"};
  static const std::vector<std::string> two{"1/@2", "-1/@2^2", "1/(@1+@2)", "1", "-1/@1", "@1/(@1+@2)"};
  std::string t;
  if (b.domain.axes.empty()) return Expr(random_rational(rng));
  if (b.domain.axes.size() == 1) {
    t = one[std::uniform_int_distribution<std::size_t>(0, one.size() - 1)(rng)];
    for (std::size_t p; (p = t.find('@')) != std::string::npos;) t.replace(p, 1, b.domain.axes[0].name);
  } else {
    t = two[std::uniform_int_distribution<std::size_t>(0, two.size() - 1)(rng)];
    for (std::size_t p; (p = t.find("@1")) != std::string::npos;) t.replace(p, 2, b.domain.axes[0].name);
    for (std::size_t p; (p = t.find("@2")) != std::string::npos;) t.replace(p, 2, b.domain.axes[1].name);
  }
  return parse_expr(t).scale(random_rational(rng, 1, 4, 2));
}

inline RhsFamily random_family(const SilpInstance& inst, std::mt19937& rng) {
  RhsFamily y;
  for (const auto& b : inst.blocks) y[b.label] = random_family_expr(b, rng);
  return y;
}

/// q0 b + sum q_k a^k with random rational q.
inline RhsFamily random_span_element(const SilpInstance& inst, std::mt19937& rng, mpq_class& q0,
                                     std::vector<mpq_class>& q) {
  q0 = random_rational(rng);
  RhsFamily d = scaled(inst.rhs(), q0);
  q.clear();
  for (std::size_t k = 0; k < inst.n(); ++k) {
    q.push_back(random_rational(rng));
    d = d + scaled(inst.column(k), q.back());
  }
  return d;
}

}  // namespace silp::testing
