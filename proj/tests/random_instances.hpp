#pragma once

#include <random>
#include <string>

#include "silp/model.hpp"

namespace silp::testing {

/// Small finite instance with integer data; every row is a single-point block.
inline SilpInstance random_finite_instance(std::mt19937& rng, int id) {
  std::uniform_int_distribution<int> nvars(2, 3), nrows(3, 8), coef(-3, 3), cost(-2, 2);
  SilpInstance inst;
  inst.name = "random" + std::to_string(id);
  int n = nvars(rng);
  for (int k = 0; k < n; ++k) {
    inst.vars.push_back("x" + std::to_string(k + 1));
    inst.objective.emplace_back(cost(rng));
  }
  int m = nrows(rng);
  for (int r = 0; r < m; ++r) {
    ConstraintBlock b;
    b.label = "r" + std::to_string(r + 1);
    for (int k = 0; k < n; ++k) b.coeffs.emplace_back(mpq_class(coef(rng)));
    b.rhs = Expr(mpq_class(coef(rng)));
    inst.blocks.push_back(b);
  }
  return inst;
}

}  // namespace silp::testing
