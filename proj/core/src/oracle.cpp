#include "silp/oracle.hpp"

#include "silp/errors.hpp"

namespace silp {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "Optimal";
    case LpStatus::Unbounded:
      return "Unbounded";
    default:
      return "Infeasible";
  }
}

ExtReal LpResult::ov() const {
  switch (status) {
    case LpStatus::Optimal:
      return ExtReal(value);
    case LpStatus::Unbounded:
      return ExtReal::neg_inf();
    default:
      return ExtReal::pos_inf();
  }
}

mpz_class truncated_row_count(const SilpInstance& inst, const mpz_class& n) {
  mpz_class total = 0;
  for (const auto& b : inst.blocks) {
    auto dom = b.domain.truncated(n);
    if (dom) total += *dom->count();
  }
  return total;
}

FiniteSystem truncate(const SilpInstance& inst, const mpz_class& n) {
  FiniteSystem fs;
  fs.name = inst.name;
  fs.vars = inst.vars;
  fs.objective = inst.objective;
  for (const auto& b : inst.blocks) {
    auto dom = b.domain.truncated(n);
    if (!dom) continue;
    for_each_point(*dom, [&](const Binding& at) {
      FiniteRow r;
      for (const auto& c : b.coeffs) r.a.push_back(c.eval(at));
      r.rhs = b.rhs.eval(at);
      r.block = b.label;
      r.at = at;
      fs.rows.push_back(std::move(r));
      return true;
    });
  }
  return fs;
}

namespace {

enum class DualStatus { Optimal, Unbounded, Infeasible };

struct DualSolution {
  DualStatus status;
  std::vector<mpq_class> y;   // one per row
  std::vector<mpq_class> pi;  // primal point
};

// Revised simplex for  max b.y  s.t.  sum_j y_j a_j = c,  y >= 0.
// The simplex multipliers at optimality form a primal point x with a_j.x >= b_j.
class DualSimplex {
 public:
  DualSimplex(const FiniteSystem& fs, const std::vector<mpq_class>& c)
      : n_(fs.vars.size()), m_(fs.rows.size()), fs_(fs), sign_(n_, 1), rhs_(n_) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (c[k] < 0) sign_[k] = -1;
      rhs_[k] = c[k] * sign_[k];
    }
  }

  DualSolution run() {
    binv_.assign(n_, std::vector<mpq_class>(n_, 0));
    basis_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      binv_[k][k] = 1;
      basis_[k] = m_ + k;
    }
    xb_ = rhs_;
    phase_ = 1;
    iterate();
    mpq_class infeas = 0;
    for (std::size_t r = 0; r < n_; ++r)
      if (basis_[r] >= m_) infeas += xb_[r];
    if (infeas > 0) return {DualStatus::Infeasible, {}, {}};
    drive_out_artificials();
    phase_ = 2;
    if (!iterate()) return {DualStatus::Unbounded, {}, {}};
    DualSolution sol{DualStatus::Optimal, std::vector<mpq_class>(m_, 0), {}};
    for (std::size_t r = 0; r < n_; ++r)
      if (basis_[r] < m_) sol.y[basis_[r]] = xb_[r];
    auto pi = multipliers();
    for (std::size_t k = 0; k < n_; ++k) sol.pi.push_back(pi[k] * sign_[k]);
    return sol;
  }

 private:
  mpq_class entry(std::size_t j, std::size_t k) const {
    if (j >= m_) return j - m_ == k ? mpq_class(1) : mpq_class(0);
    return fs_.rows[j].a[k] * sign_[k];
  }

  mpq_class cost(std::size_t j) const {
    if (phase_ == 1) return j >= m_ ? mpq_class(-1) : mpq_class(0);
    return j >= m_ ? mpq_class(0) : fs_.rows[j].rhs;
  }

  std::vector<mpq_class> multipliers() const {
    std::vector<mpq_class> pi(n_, 0);
    for (std::size_t r = 0; r < n_; ++r) {
      mpq_class cb = cost(basis_[r]);
      if (cb == 0) continue;
      for (std::size_t k = 0; k < n_; ++k) pi[k] += cb * binv_[r][k];
    }
    return pi;
  }

  std::vector<mpq_class> column(std::size_t j) const {
    std::vector<mpq_class> w(n_, 0);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t k = 0; k < n_; ++k) {
        mpq_class e = entry(j, k);
        if (e != 0) w[r] += binv_[r][k] * e;
      }
    return w;
  }

  void pivot(std::size_t r, std::size_t j, const std::vector<mpq_class>& w) {
    mpq_class p = w[r];
    for (std::size_t k = 0; k < n_; ++k) binv_[r][k] /= p;
    xb_[r] /= p;
    for (std::size_t s = 0; s < n_; ++s) {
      if (s == r || w[s] == 0) continue;
      mpq_class f = w[s];
      for (std::size_t k = 0; k < n_; ++k) binv_[s][k] -= f * binv_[r][k];
      xb_[s] -= f * xb_[r];
    }
    basis_[r] = j;
  }

  // Returns false when the objective is unbounded.
  bool iterate() {
    int degenerate = 0;
    for (long iter = 0;; ++iter) {
      if (iter > 1000000) throw Error("simplex iteration limit reached");
      auto pi = multipliers();
      std::vector<bool> basic(m_ + n_, false);
      for (auto j : basis_) basic[j] = true;
      bool bland = degenerate > 50;
      std::optional<std::size_t> enter;
      mpq_class best = 0;
      std::size_t limit = phase_ == 1 ? m_ + n_ : m_;
      for (std::size_t j = 0; j < limit; ++j) {
        if (basic[j]) continue;
        mpq_class d = cost(j);
        for (std::size_t k = 0; k < n_; ++k) {
          mpq_class e = entry(j, k);
          if (e != 0) d -= pi[k] * e;
        }
        if (d > best) {
          best = d;
          enter = j;
          if (bland) break;
        }
      }
      if (!enter) return true;
      auto w = column(*enter);
      std::optional<std::size_t> leave;
      mpq_class ratio;
      for (std::size_t r = 0; r < n_; ++r) {
        if (w[r] <= 0) continue;
        mpq_class t = xb_[r] / w[r];
        if (!leave || t < ratio || (t == ratio && basis_[r] < basis_[*leave])) {
          leave = r;
          ratio = t;
        }
      }
      if (!leave) return false;
      degenerate = ratio == 0 ? degenerate + 1 : 0;
      pivot(*leave, *enter, w);
    }
  }

  // Replace zero-level artificials by structural columns where possible; the
  // rest sit on redundant equations and stay at zero.
  void drive_out_artificials() {
    for (std::size_t r = 0; r < n_; ++r) {
      if (basis_[r] < m_) continue;
      std::vector<bool> basic(m_, false);
      for (auto j : basis_)
        if (j < m_) basic[j] = true;
      for (std::size_t j = 0; j < m_; ++j) {
        if (basic[j]) continue;
        auto w = column(j);
        if (w[r] != 0) {
          pivot(r, j, w);
          break;
        }
      }
    }
  }

  std::size_t n_, m_;
  const FiniteSystem& fs_;
  std::vector<int> sign_;
  std::vector<mpq_class> rhs_;
  std::vector<std::vector<mpq_class>> binv_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> xb_;
  int phase_ = 1;
};

DualSolution solve_dual(const FiniteSystem& fs, const std::vector<mpq_class>& c) {
  return DualSimplex(fs, c).run();
}

}  // namespace

std::optional<std::vector<mpq_class>> feasible_point(const FiniteSystem& fs) {
  auto d = solve_dual(fs, std::vector<mpq_class>(fs.vars.size(), 0));
  if (d.status != DualStatus::Optimal) return std::nullopt;
  return d.pi;
}

LpResult solve_exact(const FiniteSystem& fs) {
  LpResult res;
  auto d = solve_dual(fs, fs.objective);
  if (d.status == DualStatus::Optimal) {
    res.status = LpStatus::Optimal;
    res.x = d.pi;
    res.duals = d.y;
    res.value = 0;
    for (std::size_t k = 0; k < fs.vars.size(); ++k) res.value += fs.objective[k] * res.x[k];
    return res;
  }
  if (d.status == DualStatus::Unbounded) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  res.status = feasible_point(fs) ? LpStatus::Unbounded : LpStatus::Infeasible;
  return res;
}

TruncationSweep fdsilp_estimate(const SilpInstance& inst, const SweepOptions& opt) {
  TruncationSweep sw;
  std::optional<ExtReal> prev;
  for (const auto& n : opt.schedule) {
    SweepEntry e;
    e.n = n;
    mpz_class rows = truncated_row_count(inst, n);
    if (rows > opt.row_cap) {
      e.skipped = true;
      e.rows = 0;
      sw.entries.push_back(e);
      continue;
    }
    FiniteSystem fs = truncate(inst, n);
    e.rows = fs.rows.size();
    LpResult r = solve_exact(fs);
    e.status = r.status;
    e.value = r.ov();
    if (prev && e.value < *prev) {
      sw.monotone = false;
      throw MonotonicityViolation("N = " + n.get_str() + " gives " + e.value.to_exact_string() +
                                  " after " + prev->to_exact_string());
    }
    prev = e.value;
    sw.sup_estimate = e.value;
    sw.entries.push_back(e);
  }
  return sw;
}

}  // namespace silp
