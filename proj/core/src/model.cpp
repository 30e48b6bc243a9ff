#include "silp/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "silp/asymptotics.hpp"
#include "silp/errors.hpp"

namespace silp {

const ConstraintBlock* SilpInstance::block(const std::string& label) const {
  for (const auto& b : blocks)
    if (b.label == label) return &b;
  return nullptr;
}

RhsFamily SilpInstance::rhs() const {
  RhsFamily y;
  for (const auto& b : blocks) y[b.label] = b.rhs;
  return y;
}

RhsFamily SilpInstance::column(std::size_t k) const {
  RhsFamily y;
  for (const auto& b : blocks) y[b.label] = b.coeffs.at(k);
  return y;
}

SilpInstance SilpInstance::with_rhs(const RhsFamily& y) const {
  SilpInstance out = *this;
  for (auto& b : out.blocks) b.rhs = y.at(b.label);
  return out;
}

RhsFamily operator+(const RhsFamily& a, const RhsFamily& b) {
  RhsFamily r = a;
  for (const auto& [k, v] : b) r[k] += v;
  return r;
}

RhsFamily operator-(const RhsFamily& a, const RhsFamily& b) {
  RhsFamily r = a;
  for (const auto& [k, v] : b) r[k] -= v;
  return r;
}

RhsFamily scaled(const RhsFamily& a, const mpq_class& q) {
  RhsFamily r;
  for (const auto& [k, v] : a) r[k] = v.scale(q);
  return r;
}

bool operator==(const ConstraintBlock& a, const ConstraintBlock& b) {
  return a.label == b.label && a.domain == b.domain && a.coeffs == b.coeffs && a.rhs == b.rhs;
}

bool operator==(const SilpInstance& a, const SilpInstance& b) {
  return a.name == b.name && a.vars == b.vars && a.objective == b.objective &&
         a.blocks == b.blocks;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

bool is_ident(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

bool is_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
      return false;
  return true;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

struct Line {
  int no;
  int indent;
  std::string text;  // comment stripped, right-trimmed, leading blanks kept out
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  int no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++no;
    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::size_t first = raw.find_first_not_of(" \t\r");
    if (first != std::string_view::npos)
      out.push_back({no, static_cast<int>(first), trim(raw)});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

/// Linear form in decision variables with Expr coefficients plus a constant part.
struct Linear {
  std::vector<Expr> coeffs;
  Expr constant;
};

Linear extract_linear(const Expr& e, const std::vector<std::string>& vars, int line, int col) {
  for (const auto& v : vars)
    if (e.den().degree(v) > 0)
      throw ParseError("decision variable " + v + " may not appear in a denominator", line, col);
  std::set<std::string> dv(vars.begin(), vars.end());
  for (const auto& [m, c] : e.num().terms()) {
    unsigned d = 0;
    for (const auto& [name, p] : m.factors())
      if (dv.count(name)) d += p;
    if (d > 1) throw ParseError("row is not linear in the decision variables", line, col);
  }
  Linear lin;
  Poly rest = e.num();
  for (const auto& v : vars) {
    Poly c = e.num().coeff(v, 1);
    lin.coeffs.push_back(Expr(c, e.den()));
    rest -= c * Poly::var(v);
  }
  lin.constant = Expr(rest, e.den());
  return lin;
}

IndexDomain parse_axes(const std::string& spec, int line, int col) {
  IndexDomain dom;
  std::string s = trim(spec);
  if (s.empty()) return dom;
  // axes separated by the word "x"
  std::vector<std::string> words = split_ws(s);
  std::vector<std::vector<std::string>> groups(1);
  for (const auto& w : words) {
    if (w == "x") {
      groups.emplace_back();
    } else {
      groups.back().push_back(w);
    }
  }
  for (const auto& g : groups) {
    if (g.size() != 3 || g[1] != "in")
      throw ParseError("expected '<index> in <lo>..<hi>' in block header", line, col);
    if (!is_ident(g[0])) throw ParseError("bad index variable name '" + g[0] + "'", line, col);
    std::size_t dots = g[2].find("..");
    if (dots == std::string::npos) throw ParseError("expected <lo>..<hi>", line, col);
    std::string lo = g[2].substr(0, dots), hi = g[2].substr(dots + 2);
    Axis a;
    a.name = g[0];
    try {
      a.lo = mpz_class(lo);
      if (hi != "inf") a.hi = mpz_class(hi);
    } catch (const std::invalid_argument&) {
      throw ParseError("bounds must be integers or inf", line, col);
    }
    dom.axes.push_back(a);
  }
  dom.validate();
  return dom;
}

std::string coeff_term(const Expr& c, const std::string& var, bool first) {
  std::string sep = first ? "" : " + ";
  if (c.is_constant()) {
    mpq_class q = c.constant_value();
    std::string sign = q < 0 ? (first ? "-" : " - ") : sep;
    mpq_class a = abs(q);
    if (a == 1) return sign + var;
    if (a.get_den() == 1) return sign + a.get_str() + "*" + var;
    return sign + "(" + a.get_str() + ")*" + var;
  }
  return sep + "(" + c.to_string() + ")*" + var;
}

std::string linear_text(const std::vector<Expr>& coeffs, const std::vector<std::string>& vars) {
  std::string s;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    s += coeff_term(coeffs[k], vars[k], s.empty());
  }
  return s.empty() ? "0" : s;
}

}  // namespace

SilpInstance parse_instance(std::string_view text) {
  SilpInstance inst;
  bool have_vars = false, have_obj = false;
  std::string obj_text;
  int obj_line = 0, obj_col = 0;
  auto lines = split_lines(text);
  struct PendingRow {
    std::string text;
    int line, col;
  };
  struct PendingBlock {
    ConstraintBlock blk;
    std::vector<PendingRow> rows;
    int line;
  };
  std::vector<PendingBlock> pending;
  for (const auto& ln : lines) {
    const std::string& t = ln.text;
    int col = ln.indent + 1;
    if (ln.indent > 0) {
      if (t.rfind("row:", 0) != 0)
        throw ParseError("expected 'row:' inside a block", ln.no, col);
      if (pending.empty()) throw ParseError("'row:' outside of a block", ln.no, col);
      pending.back().rows.push_back({t.substr(4), ln.no, col + 4});
      continue;
    }
    if (t.rfind("name:", 0) == 0) {
      inst.name = trim(t.substr(5));
    } else if (t.rfind("vars:", 0) == 0) {
      inst.vars = split_ws(t.substr(5));
      for (const auto& v : inst.vars)
        if (!is_ident(v)) throw ParseError("bad variable name '" + v + "'", ln.no, col + 5);
      if (inst.vars.empty()) throw ParseError("no decision variables", ln.no, col);
      have_vars = true;
    } else if (t.rfind("minimize:", 0) == 0) {
      obj_text = t.substr(9);
      obj_line = ln.no;
      obj_col = col + 9;
      have_obj = true;
    } else if (t.rfind("block", 0) == 0 && t.size() > 5 && std::isspace(static_cast<unsigned char>(t[5]))) {
      if (t.back() != ':') throw ParseError("block header must end with ':'", ln.no, col + static_cast<int>(t.size()));
      std::string body = trim(t.substr(5, t.size() - 6));
      std::size_t sp = body.find_first_of(" \t");
      ConstraintBlock blk;
      blk.label = body.substr(0, sp);
      if (!is_label(blk.label)) throw ParseError("bad block label '" + blk.label + "'", ln.no, col + 6);
      if (sp != std::string::npos) {
        std::string axes = body.substr(sp);
        if (!axes.empty() && trim(axes).front() == '[') {
          std::string a = trim(axes);
          if (a.back() != ']') throw ParseError("unbalanced '['", ln.no, col);
          axes = a.substr(1, a.size() - 2);
        }
        try {
          blk.domain = parse_axes(axes, ln.no, col + 6 + static_cast<int>(sp));
        } catch (const ValidationError& e) {
          throw ParseError(e.what(), ln.no, col);
        }
      }
      pending.push_back({blk, {}, ln.no});
    } else {
      throw ParseError("unrecognized line '" + t + "'", ln.no, col);
    }
  }
  if (!have_vars) throw ParseError("missing 'vars:' line", 1, 1);
  if (!have_obj) throw ParseError("missing 'minimize:' line", 1, 1);

  Linear obj = extract_linear(parse_expr(obj_text, obj_line, obj_col - 1), inst.vars, obj_line, obj_col);
  for (std::size_t k = 0; k < inst.n(); ++k) {
    if (!obj.coeffs[k].is_constant())
      throw ParseError("objective coefficients must be rational constants", obj_line, obj_col);
    inst.objective.push_back(obj.coeffs[k].constant_value());
  }
  for (auto& [blk, rows, header_line] : pending) {
    if (rows.size() != 1)
      throw ParseError("block '" + blk.label + "' needs exactly one 'row:'",
                       rows.empty() ? header_line : rows[1].line, 1);
    const PendingRow& r = rows.front();
    std::string s = r.text;
    std::size_t ge = s.find(">=");
    if (ge == std::string::npos) {
      std::size_t le = s.find("<=");
      if (le != std::string::npos)
        throw ParseError("only '>=' rows are supported; rewrite 'a <= b' as '-a >= -b'", r.line,
                         r.col + static_cast<int>(le));
      std::size_t eq = s.find('=');
      if (eq != std::string::npos)
        throw ParseError("only '>=' rows are supported; write 'a = b' as two rows 'a >= b' and '-a >= -b'",
                         r.line, r.col + static_cast<int>(eq));
      throw ParseError("row needs '>='", r.line, r.col);
    }
    if (s.find("<=") != std::string::npos || s.find('=', ge + 2) != std::string::npos)
      throw ParseError("row has more than one relation", r.line, r.col);
    Expr lhs = parse_expr(s.substr(0, ge), r.line, r.col - 1);
    Expr rhs = parse_expr(s.substr(ge + 2), r.line, r.col + static_cast<int>(ge) + 1);
    Linear lin = extract_linear(lhs, inst.vars, r.line, r.col);
    blk.coeffs = lin.coeffs;
    blk.rhs = rhs - lin.constant;
    for (const auto& v : inst.vars)
      if (blk.rhs.depends_on(v))
        throw ParseError("decision variable " + v + " on the right-hand side", r.line, r.col);
    inst.blocks.push_back(blk);
  }
  for (const auto& d : validate(inst))
    if (d.error) throw ValidationError(d.code, d.message);
  return inst;
}

SilpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  SilpInstance inst = parse_instance(ss.str());
  if (inst.name.empty()) {
    std::string stem = path.substr(path.find_last_of('/') + 1);
    inst.name = stem.substr(0, stem.find('.'));
  }
  return inst;
}

std::string render_instance(const SilpInstance& inst) {
  std::ostringstream os;
  if (!inst.name.empty()) os << "name: " << inst.name << "\n";
  os << "vars:";
  for (const auto& v : inst.vars) os << " " << v;
  os << "\n";
  std::vector<Expr> obj;
  for (const auto& c : inst.objective) obj.emplace_back(c);
  os << "minimize: " << linear_text(obj, inst.vars) << "\n";
  for (const auto& b : inst.blocks) {
    os << "\nblock " << b.label;
    for (std::size_t k = 0; k < b.domain.axes.size(); ++k)
      os << (k == 0 ? " " : " x ") << b.domain.axes[k].to_string();
    os << ":\n  row: " << linear_text(b.coeffs, inst.vars) << " >= " << b.rhs.to_string() << "\n";
  }
  return os.str();
}

std::string instance_json(const SilpInstance& inst) {
  nlohmann::ordered_json j;
  j["name"] = inst.name;
  j["vars"] = inst.vars;
  auto& obj = j["objective"] = nlohmann::ordered_json::array();
  for (const auto& c : inst.objective) obj.push_back(c.get_str());
  auto& blocks = j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : inst.blocks) {
    nlohmann::ordered_json jb;
    jb["label"] = b.label;
    jb["domain"] = nlohmann::ordered_json::array();
    for (const auto& a : b.domain.axes)
      jb["domain"].push_back({{"index", a.name},
                              {"lo", a.lo.get_str()},
                              {"hi", a.hi ? a.hi->get_str() : std::string("inf")}});
    jb["coeffs"] = nlohmann::ordered_json::array();
    for (const auto& c : b.coeffs) jb["coeffs"].push_back(c.to_string());
    jb["rhs"] = b.rhs.to_string();
    blocks.push_back(jb);
  }
  return j.dump(2);
}

std::vector<Diagnostic> validate(const SilpInstance& inst) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string code, std::string msg, std::string blk = "") {
    out.push_back({std::move(code), std::move(msg), std::move(blk), true});
  };
  if (inst.vars.empty()) err("NoVariables", "instance has no decision variables");
  std::set<std::string> dv;
  for (const auto& v : inst.vars)
    if (!dv.insert(v).second) err("DuplicateVariable", "variable '" + v + "' declared twice");
  if (inst.objective.size() != inst.n())
    err("DimensionMismatch", "objective has " + std::to_string(inst.objective.size()) +
                                 " entries for " + std::to_string(inst.n()) + " variables");
  if (inst.blocks.empty()) err("EmptyInstance", "instance has no constraints");
  std::set<std::string> labels;
  for (const auto& b : inst.blocks) {
    if (!labels.insert(b.label).second)
      err("DuplicateLabel", "block label '" + b.label + "' used twice", b.label);
    try {
      b.domain.validate();
    } catch (const ValidationError& e) {
      err(e.code, e.what(), b.label);
    }
    for (const auto& a : b.domain.axes)
      if (dv.count(a.name))
        err("NameClash", "index '" + a.name + "' is also a decision variable", b.label);
    if (b.coeffs.size() != inst.n()) {
      err("DimensionMismatch", "block '" + b.label + "' has " + std::to_string(b.coeffs.size()) +
                                   " coefficients", b.label);
      continue;
    }
    bool escaped = false;
    auto check = [&](const Expr& e, const std::string& what) {
      for (const auto& v : e.free_vars())
        if (!b.domain.has(v)) {
          err("FreeVariableEscape",
              what + " of block '" + b.label + "' uses '" + v + "', which is not an index of the block",
              b.label);
          escaped = true;
        }
    };
    for (std::size_t k = 0; k < inst.n(); ++k) check(b.coeffs[k], "coefficient of " + inst.vars[k]);
    check(b.rhs, "right-hand side");
    if (escaped || b.domain.axes.empty()) continue;
    for (std::size_t k = 0; k < inst.n(); ++k) {
      if (b.coeffs[k].is_constant()) continue;
      SignResult s = sign_over(b.coeffs[k], b.domain);
      if (s.sign == Sign::Mixed)
        out.push_back({"MixedSignWarning",
                       "coefficient of " + inst.vars[k] + " in block '" + b.label +
                           "' changes sign; elimination will not be able to use it",
                       b.label, false});
      else if (s.sign == Sign::Unknown)
        out.push_back({"SignUnknownWarning",
                       "sign of the coefficient of " + inst.vars[k] + " in block '" + b.label +
                           "' could not be certified",
                       b.label, false});
    }
  }
  return out;
}

void check_family(const SilpInstance& inst, const RhsFamily& y, const std::string& what) {
  for (const auto& [label, e] : y)
    if (!inst.block(label)) throw ValidationError("UnknownBlock", what + " names unknown block '" + label + "'");
  for (const auto& b : inst.blocks) {
    auto it = y.find(b.label);
    if (it == y.end()) throw ValidationError("MissingBlock", what + " has no entry for block '" + b.label + "'");
    for (const auto& v : it->second.free_vars())
      if (!b.domain.has(v))
        throw ValidationError("FreeVariableEscape",
                              what + " entry for block '" + b.label + "' uses '" + v + "'");
  }
}

Direction parse_direction(std::string_view text, const SilpInstance& inst) {
  Direction d;
  bool header = false;
  for (const auto& ln : split_lines(text)) {
    const std::string& t = ln.text;
    int col = ln.indent + 1;
    if (!header) {
      if (t.rfind("direction for", 0) != 0 || t.back() != ':')
        throw ParseError("expected 'direction for <instance>:'", ln.no, col);
      d.instance_name = trim(t.substr(13, t.size() - 14));
      header = true;
      continue;
    }
    if (t.rfind("block", 0) != 0) throw ParseError("expected 'block <label>: <expr>'", ln.no, col);
    std::size_t colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("missing ':'", ln.no, col);
    std::string label = trim(t.substr(5, colon - 5));
    if (d.values.count(label)) throw ParseError("block '" + label + "' listed twice", ln.no, col);
    d.values[label] = parse_expr(t.substr(colon + 1), ln.no, col + static_cast<int>(colon));
  }
  if (!header) throw ParseError("empty direction file", 1, 1);
  if (!inst.name.empty() && !d.instance_name.empty() && d.instance_name != inst.name)
    throw ValidationError("DirectionMismatch", "direction is for '" + d.instance_name +
                                                   "', instance is '" + inst.name + "'");
  check_family(inst, d.values, "direction");
  return d;
}

Direction load_direction(const std::string& path, const SilpInstance& inst) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_direction(ss.str(), inst);
}

std::string render_direction(const Direction& d) {
  std::ostringstream os;
  os << "direction for " << d.instance_name << ":\n";
  for (const auto& [label, e] : d.values) os << "block " << label << ": " << e.to_string() << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Span membership

namespace {

/// Index points of a block ordered by distance from the lowest corner.
std::vector<Binding> sample_points(const IndexDomain& dom, long side, std::size_t cap, long offset) {
  std::vector<Binding> pts;
  if (dom.axes.empty()) {
    pts.emplace_back();
    return pts;
  }
  IndexDomain cube;
  for (const auto& a : dom.axes) {
    Axis c = a;
    c.lo = a.lo + offset;
    if (a.hi && c.lo > *a.hi) c.lo = a.lo;
    mpz_class top = c.lo + side - 1;
    c.hi = a.hi && *a.hi < top ? *a.hi : top;
    cube.axes.push_back(c);
  }
  for_each_point(cube, [&](const Binding& b) {
    pts.push_back(b);
    return pts.size() < 20000;
  });
  auto dist = [&](const Binding& b) {
    mpz_class s = 0;
    for (const auto& a : cube.axes) s += b.at(a.name) - a.lo;
    return s;
  };
  std::stable_sort(pts.begin(), pts.end(),
                   [&](const Binding& x, const Binding& y) { return dist(x) < dist(y); });
  if (pts.size() > cap) pts.resize(cap);
  return pts;
}

/// Solve A x = r exactly. Returns nullopt if inconsistent; free variables set
/// to zero. rank receives the row rank.
std::optional<std::vector<mpq_class>> gauss(std::vector<std::vector<mpq_class>> a, std::size_t cols,
                                            std::size_t& rank) {
  std::size_t rows = a.size(), r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    mpq_class inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      mpq_class f = a[i][c];
      for (std::size_t k = c; k <= cols; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(c);
    ++r;
  }
  rank = r;
  for (std::size_t i = r; i < rows; ++i)
    if (a[i][cols] != 0) return std::nullopt;
  std::vector<mpq_class> x(cols, mpq_class(0));
  for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = a[i][cols];
  return x;
}

bool residual_zero(const SilpInstance& inst, const RhsFamily& d, const mpq_class& a0,
                   const std::vector<mpq_class>& a) {
  for (const auto& b : inst.blocks) {
    Expr r = d.at(b.label) - b.rhs.scale(a0);
    for (std::size_t k = 0; k < inst.n(); ++k) r -= b.coeffs[k].scale(a[k]);
    if (!r.is_zero()) return false;
  }
  return true;
}

}  // namespace

std::optional<SpanCoordinates> span_membership(const SilpInstance& inst, const RhsFamily& d) {
  check_family(inst, d, "direction");
  const std::size_t n = inst.n(), cols = n + 1;
  auto attempt = [&](long side, std::size_t cap, long offset,
                     std::size_t& rank) -> std::optional<std::optional<SpanCoordinates>> {
    std::vector<std::vector<mpq_class>> rows;
    for (const auto& b : inst.blocks) {
      for (const auto& p : sample_points(b.domain, side, cap, offset)) {
        std::vector<mpq_class> row(cols + 1);
        bool ok = true;
        for (std::size_t k = 0; k < n && ok; ++k) ok = try_eval(b.coeffs[k], p, row[k]);
        ok = ok && try_eval(b.rhs, p, row[n]) && try_eval(d.at(b.label), p, row[cols]);
        if (ok) rows.push_back(std::move(row));
      }
    }
    auto x = gauss(rows, cols, rank);
    if (!x) return std::optional<SpanCoordinates>();  // inconsistent: definitely not in U
    SpanCoordinates sc;
    sc.alpha.assign(x->begin(), x->begin() + static_cast<long>(n));
    sc.alpha0 = (*x)[n];
    if (residual_zero(inst, d, sc.alpha0, sc.alpha)) {
      sc.residual_verified = true;
      return std::optional<SpanCoordinates>(sc);
    }
    if (rank == cols) return std::optional<SpanCoordinates>();  // unique candidate failed
    return std::nullopt;  // rank deficient: resample
  };
  std::size_t rank = 0;
  for (long round = 0; round < 10; ++round) {
    long side = static_cast<long>(n) + 3 + 2 * round;
    std::size_t cap = static_cast<std::size_t>(2 * side);
    if (auto r = attempt(side, cap, round * 7, rank)) return *r;
  }
  // Dense sample fallback.
  if (auto r = attempt(24, 600, 0, rank)) return *r;
  return std::nullopt;
}

}  // namespace silp
