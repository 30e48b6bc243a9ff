#include "silp/fm.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "json.hpp"
#include "silp/errors.hpp"

namespace silp {

std::string SourceRef::to_string() const {
  if (objective) return "objective";
  std::string s = block;
  if (!binding.empty()) {
    s += "[";
    for (std::size_t k = 0; k < binding.size(); ++k) {
      if (k) s += ", ";
      s += binding[k].first + "=" + binding[k].second.to_string();
    }
    s += "]";
  }
  return s;
}

bool SourceRef::operator<(const SourceRef& o) const {
  if (objective != o.objective) return objective;
  if (block != o.block) return block < o.block;
  if (binding.size() != o.binding.size()) return binding.size() < o.binding.size();
  for (std::size_t k = 0; k < binding.size(); ++k) {
    if (binding[k].first != o.binding[k].first) return binding[k].first < o.binding[k].first;
    std::string a = binding[k].second.to_string(), b = o.binding[k].second.to_string();
    if (a != b) return a < b;
  }
  return false;
}

bool SourceRef::operator==(const SourceRef& o) const { return !(*this < o) && !(o < *this); }

std::string to_string(RowClass c) {
  switch (c) {
    case RowClass::I1:
      return "I1";
    case RowClass::I2:
      return "I2";
    case RowClass::I3:
      return "I3";
    default:
      return "I4";
  }
}

std::vector<std::size_t> EliminationOutput::of_class(RowClass c) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < rows.size(); ++k)
    if (rows[k].cls == c) out.push_back(k);
  return out;
}

std::size_t EliminationOutput::var_index(const std::string& v) const {
  for (std::size_t k = 0; k < vars.size(); ++k)
    if (vars[k] == v) return k;
  throw Error("unknown variable '" + v + "'");
}

StdSystem standardize(const SilpInstance& inst) {
  StdSystem sys;
  sys.name = inst.name;
  sys.vars = inst.vars;
  sys.objective = inst.objective;
  StdRow obj;
  obj.label = "objective";
  obj.z = Expr(1);
  for (const auto& c : inst.objective) obj.x.emplace_back(mpq_class(-c));
  obj.rhs = Expr(0);
  obj.mult[SourceRef::objective_row()] = Expr(1);
  sys.rows.push_back(obj);
  for (const auto& b : inst.blocks) {
    StdRow r;
    r.label = b.label;
    r.domain = b.domain;
    r.z = Expr(0);
    r.x = b.coeffs;
    r.rhs = b.rhs;
    SourceRef ref;
    ref.block = b.label;
    for (const auto& a : b.domain.axes) ref.binding.emplace_back(a.name, Expr::var(a.name));
    r.mult[ref] = Expr(1);
    sys.rows.push_back(r);
  }
  return sys;
}

namespace {

enum class CoefClass { Zero, Pos, Neg, WeakPos, WeakNeg, Bad };

CoefClass classify(const Expr& e, const IndexDomain& dom, const Budget& budget) {
  if (e.is_zero()) return CoefClass::Zero;
  if (e.is_constant()) return e.constant_value() > 0 ? CoefClass::Pos : CoefClass::Neg;
  SignResult s = sign_over(e, dom, budget);
  switch (s.sign) {
    case Sign::IdenticallyZero:
      return CoefClass::Zero;
    case Sign::NonNegative:
      return s.strict ? CoefClass::Pos : CoefClass::WeakPos;
    case Sign::NonPositive:
      return s.strict ? CoefClass::Neg : CoefClass::WeakNeg;
    default:
      return CoefClass::Bad;
  }
}

std::map<std::string, std::string> clash_renames(const IndexDomain& keep, const IndexDomain& other) {
  std::set<std::string> used;
  for (const auto& a : keep.axes) used.insert(a.name);
  for (const auto& a : other.axes) used.insert(a.name);
  std::map<std::string, std::string> ren;
  for (const auto& a : other.axes) {
    if (!keep.has(a.name)) continue;
    for (int k = 2;; ++k) {
      std::string cand = a.name + "_" + std::to_string(k);
      if (!used.count(cand)) {
        used.insert(cand);
        ren[a.name] = cand;
        break;
      }
    }
  }
  return ren;
}

StdRow renamed(const StdRow& r, const std::map<std::string, std::string>& ren) {
  if (ren.empty()) return r;
  StdRow out;
  out.label = r.label;
  out.domain = r.domain;
  for (auto& a : out.domain.axes)
    if (auto it = ren.find(a.name); it != ren.end()) a.name = it->second;
  out.z = r.z.rename(ren);
  for (const auto& c : r.x) out.x.push_back(c.rename(ren));
  out.rhs = r.rhs.rename(ren);
  for (const auto& [ref, w] : r.mult) {
    SourceRef nr = ref;
    for (auto& [ax, e] : nr.binding) e = e.rename(ren);
    out.mult[nr] = w.rename(ren);
  }
  return out;
}

void add_weighted(Multiplier& into, const Multiplier& from, const Expr& w) {
  for (const auto& [ref, v] : from) {
    Expr add = v * w;
    auto it = into.find(ref);
    if (it == into.end())
      into.emplace(ref, add);
    else
      it->second += add;
  }
}

std::string join_labels(const std::string& a, const std::string& b) {
  std::vector<std::string> parts;
  for (const std::string* s : {&a, &b}) {
    std::stringstream ss(*s);
    for (std::string part; std::getline(ss, part, '+');)
      if (std::find(parts.begin(), parts.end(), part) == parts.end()) parts.push_back(part);
  }
  std::string out;
  for (const auto& part : parts) out += (out.empty() ? "" : "+") + part;
  return out;
}

StdRow combine(const StdRow& p, const StdRow& qin, std::size_t var, std::size_t cap) {
  StdRow q = renamed(qin, clash_renames(p.domain, qin.domain));
  StdRow r;
  r.label = join_labels(p.label, q.label);
  r.domain = p.domain;
  for (const auto& a : q.domain.axes) r.domain.axes.push_back(a);
  if (r.domain.axes.size() > cap) throw DimensionCapExceeded(r.domain.axes.size(), cap);
  Expr lp = -q.x[var];  // |c_q|, c_q < 0
  Expr lq = p.x[var];   // |c_p|, c_p > 0
  r.z = lp * p.z + lq * q.z;
  for (std::size_t k = 0; k < p.x.size(); ++k)
    r.x.push_back(k == var ? Expr(0) : lp * p.x[k] + lq * q.x[k]);
  r.rhs = lp * p.rhs + lq * q.rhs;
  add_weighted(r.mult, p.mult, lp);
  add_weighted(r.mult, q.mult, lq);
  return r;
}

/// Substitute a source binding into an Expr written in the source block's axes.
Expr at_binding(const Expr& e, const std::vector<std::pair<std::string, Expr>>& binding) {
  if (binding.empty()) return e;
  std::map<std::string, std::string> tmp;
  for (std::size_t k = 0; k < binding.size(); ++k) tmp[binding[k].first] = "__src" + std::to_string(k);
  Expr r = e.rename(tmp);
  for (std::size_t k = 0; k < binding.size(); ++k)
    r = r.substitute("__src" + std::to_string(k), binding[k].second);
  return r;
}

}  // namespace

EliminationOutput eliminate(const StdSystem& sys, const FmOptions& opt) {
  const std::size_t n = sys.vars.size();
  for (const auto& v : opt.order)
    if (std::find(sys.vars.begin(), sys.vars.end(), v) == sys.vars.end())
      throw ValidationError("UnknownVariable", "elimination order names unknown variable '" + v + "'");
  std::vector<StdRow> rows = sys.rows;
  std::vector<bool> done(n, false);
  EliminationOutput out;
  out.instance_name = sys.name;
  out.vars = sys.vars;
  out.objective = sys.objective;

  while (true) {
    // Classify every coefficient of every live variable.
    std::vector<std::vector<CoefClass>> cls(n, std::vector<CoefClass>(rows.size()));
    std::vector<bool> eligible(n, false);
    for (std::size_t k = 0; k < n; ++k) {
      if (done[k]) continue;
      bool pos = false, neg = false, weak = false;
      std::string weak_block;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        CoefClass c = classify(rows[r].x[k], rows[r].domain, opt.budget);
        cls[k][r] = c;
        if (c == CoefClass::Bad) throw SignUncertified(sys.vars[k], rows[r].label);
        if (c == CoefClass::Pos || c == CoefClass::WeakPos) pos = true;
        if (c == CoefClass::Neg || c == CoefClass::WeakNeg) neg = true;
        if ((c == CoefClass::WeakPos || c == CoefClass::WeakNeg) && weak_block.empty()) {
          weak = true;
          weak_block = rows[r].label;
        }
      }
      if (pos && neg) {
        if (weak) throw SignUncertified(sys.vars[k], weak_block);
        eligible[k] = true;
      }
    }
    std::optional<std::size_t> pick;
    for (const auto& v : opt.order) {
      std::size_t k = static_cast<std::size_t>(
          std::find(sys.vars.begin(), sys.vars.end(), v) - sys.vars.begin());
      if (eligible[k]) {
        pick = k;
        break;
      }
    }
    if (!pick)
      for (std::size_t k = 0; k < n; ++k)
        if (eligible[k]) {
          pick = k;
          break;
        }
    if (!pick) {
      out.remaining_sign.assign(n, 0);
      for (std::size_t k = 0; k < n; ++k) {
        if (done[k]) continue;
        out.remaining.push_back(sys.vars[k]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
          CoefClass c = cls[k][r];
          if (c == CoefClass::Pos || c == CoefClass::WeakPos) out.remaining_sign[k] = 1;
          if (c == CoefClass::Neg || c == CoefClass::WeakNeg) out.remaining_sign[k] = -1;
        }
      }
      break;
    }
    std::size_t v = *pick;
    std::vector<StdRow> next;
    std::vector<std::size_t> P, N;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      CoefClass c = cls[v][r];
      if (c == CoefClass::Zero)
        next.push_back(rows[r]);
      else if (c == CoefClass::Pos)
        P.push_back(r);
      else
        N.push_back(r);
    }
    for (std::size_t p : P)
      for (std::size_t q : N) next.push_back(combine(rows[p], rows[q], v, opt.dim_cap));
    rows = std::move(next);
    done[v] = true;
    out.eliminated.push_back(sys.vars[v]);
  }

  for (auto& r : rows) {
    if (!r.z.is_zero()) {
      Expr s = r.z;
      r.z = Expr(1);
      for (auto& c : r.x) c /= s;
      r.rhs /= s;
      for (auto& [ref, w] : r.mult) w /= s;
    }
    bool any_x = std::any_of(r.x.begin(), r.x.end(), [](const Expr& e) { return !e.is_zero(); });
    if (r.z.is_zero())
      r.cls = any_x ? RowClass::I2 : RowClass::I1;
    else
      r.cls = any_x ? RowClass::I4 : RowClass::I3;
  }
  out.rows = std::move(rows);
  return out;
}

EliminationOutput eliminate(const SilpInstance& inst, const FmOptions& opt) {
  return eliminate(standardize(inst), opt);
}

std::vector<Expr> fm_apply(const EliminationOutput& out, const mpq_class& r, const RhsFamily& y) {
  std::vector<Expr> res;
  for (const auto& row : out.rows) {
    Expr acc(0);
    for (const auto& [ref, w] : row.mult) {
      if (ref.objective) {
        if (r != 0) acc += w.scale(r);
        continue;
      }
      auto it = y.find(ref.block);
      if (it == y.end()) throw ValidationError("MissingBlock", "no value for block '" + ref.block + "'");
      if (it->second.is_zero()) continue;
      acc += w * at_binding(it->second, ref.binding);
    }
    res.push_back(acc);
  }
  return res;
}

std::vector<Expr> fm_bar(const EliminationOutput& out, const RhsFamily& y) {
  return fm_apply(out, 0, y);
}

BoundResult multiplier_bound(const EliminationOutput& out, const Budget& budget) {
  BoundResult b;
  b.value = ExtReal::neg_inf();
  for (const auto& row : out.rows)
    for (const auto& [ref, w] : row.mult) {
      SupResult s = sup_over(w, row.domain, budget);
      b.value = max(b.value, s.value);
      b.certified = b.certified && s.certified;
    }
  return b;
}

std::string fm_dump_text(const EliminationOutput& out) {
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s.empty() ? std::string("(none)") : s;
  };
  os << "instance: " << out.instance_name << "\n";
  os << "eliminated: " << join(out.eliminated) << "\n";
  os << "remaining: " << join(out.remaining) << "\n";
  for (std::size_t k = 0; k < out.remaining.size(); ++k) {
    std::size_t v = out.var_index(out.remaining[k]);
    int s = out.remaining_sign[v];
    os << "sign " << out.remaining[k] << ": " << (s > 0 ? "+" : s < 0 ? "-" : "0") << "\n";
  }
  for (std::size_t h = 0; h < out.rows.size(); ++h) {
    const StdRow& r = out.rows[h];
    os << "\nrow " << h + 1 << " " << to_string(r.cls) << " " << r.label << "\n";
    os << "  domain: " << (r.domain.axes.empty() ? std::string("single") : r.domain.to_string()) << "\n";
    os << "  z: " << r.z.to_string() << "\n";
    for (const auto& v : out.remaining) os << "  " << v << ": " << r.x[out.var_index(v)].to_string() << "\n";
    os << "  rhs: " << r.rhs.to_string() << "\n";
    os << "  multiplier:\n";
    for (const auto& [ref, w] : r.mult) os << "    " << ref.to_string() << ": " << w.to_string() << "\n";
  }
  return os.str();
}

std::string fm_dump_json(const EliminationOutput& out) {
  nlohmann::ordered_json j;
  j["instance"] = out.instance_name;
  j["eliminated"] = out.eliminated;
  j["remaining"] = out.remaining;
  nlohmann::ordered_json signs = nlohmann::ordered_json::object();
  for (const auto& v : out.remaining) signs[v] = out.remaining_sign[out.var_index(v)];
  j["remaining_sign"] = signs;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : out.rows) {
    nlohmann::ordered_json jr;
    jr["label"] = r.label;
    jr["class"] = to_string(r.cls);
    jr["domain"] = nlohmann::ordered_json::array();
    for (const auto& a : r.domain.axes)
      jr["domain"].push_back(
          {{"index", a.name}, {"lo", a.lo.get_str()}, {"hi", a.hi ? a.hi->get_str() : std::string("inf")}});
    jr["z"] = r.z.to_string();
    nlohmann::ordered_json xs = nlohmann::ordered_json::object();
    for (const auto& v : out.remaining) xs[v] = r.x[out.var_index(v)].to_string();
    jr["x"] = xs;
    jr["rhs"] = r.rhs.to_string();
    jr["multiplier"] = nlohmann::ordered_json::array();
    for (const auto& [ref, w] : r.mult)
      jr["multiplier"].push_back({{"source", ref.to_string()}, {"weight", w.to_string()}});
    j["rows"].push_back(jr);
  }
  return j.dump(2);
}

}  // namespace silp
