// silp: command-line front end for the analysis engine.
//
// Exit codes: 0 certified result, 1 error, 2 unknown or uncertified,
// 3 pricing fails.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "silp/dual.hpp"
#include "silp/errors.hpp"

namespace {

using namespace silp;
using ojson = nlohmann::ordered_json;

struct RunConfig {
  std::string instance;
  std::string direction;
  std::string space = "all";
  bool json = false;
  long budget_grid = 0;
  std::string delta_max;
  std::size_t dim_cap = 4;
  std::string order;
  std::string schedule;
  std::string eps;
  std::string eps_max;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    auto b = item.find_first_not_of(' ');
    auto e = item.find_last_not_of(' ');
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

mpq_class parse_positive(const std::string& s, const std::string& what) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ValidationError("BadOption", what + ": not a rational number '" + s + "'");
  q.canonicalize();
  if (q <= 0) throw ValidationError("BadOption", what + " must be positive");
  return q;
}

// Flags win over SILP_BUDGET_* variables, which win over the defaults.
void apply_env(RunConfig& cfg, const CLI::App& sub) {
  auto given = [&](const char* flag) {
    const CLI::Option* o = sub.get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  };
  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (!given("--budget-grid"))
    if (auto v = env("SILP_BUDGET_GRID")) cfg.budget_grid = std::stol(*v);
  if (!given("--delta-max"))
    if (auto v = env("SILP_BUDGET_DELTA_MAX")) cfg.delta_max = *v;
  if (!given("--dim-cap"))
    if (auto v = env("SILP_BUDGET_DIM_CAP")) cfg.dim_cap = std::stoul(*v);
  if (!given("--schedule"))
    if (auto v = env("SILP_BUDGET_SCHEDULE")) cfg.schedule = *v;
}

AnalysisOptions analysis_options(const RunConfig& cfg) {
  AnalysisOptions opt;
  if (cfg.budget_grid < 0) throw ValidationError("BadOption", "--budget-grid must be positive");
  if (cfg.budget_grid > 0) {
    opt.budget.total = cfg.budget_grid;
    opt.budget.per_axis = std::min(opt.budget.per_axis, cfg.budget_grid);
  }
  if (!cfg.delta_max.empty())
    opt.delta_schedule = AnalysisOptions::geometric_schedule(parse_positive(cfg.delta_max, "--delta-max"));
  return opt;
}

struct Loaded {
  SilpInstance inst;
  EliminationOutput out;
};

Loaded load(const RunConfig& cfg) {
  Loaded l;
  l.inst = load_instance(cfg.instance);
  for (const auto& d : validate(l.inst))
    if (!d.error) std::cerr << "warning: " << d.code << ": " << d.message << "\n";
  FmOptions fo;
  fo.order = split_list(cfg.order);
  if (cfg.dim_cap == 0) throw ValidationError("BadOption", "--dim-cap must be positive");
  fo.dim_cap = cfg.dim_cap;
  fo.budget = analysis_options(cfg).budget;
  l.out = eliminate(l.inst, fo);
  return l;
}

int cmd_analyze(const RunConfig& cfg) {
  auto l = load(cfg);
  auto r = analyze(l.inst, l.out, analysis_options(cfg));
  std::cout << (cfg.json ? report_json(r, l.out) + "\n" : report_text(r, l.out));
  return r.certified ? 0 : 2;
}

int cmd_fm_dump(const RunConfig& cfg) {
  auto l = load(cfg);
  std::cout << (cfg.json ? fm_dump_json(l.out) + "\n" : fm_dump_text(l.out));
  return 0;
}

int cmd_price(const RunConfig& cfg) {
  auto l = load(cfg);
  AnalysisOptions aopt = analysis_options(cfg);
  auto d = load_direction(cfg.direction, l.inst).values;
  SpaceTag limit = parse_space(cfg.space);
  SpaceTag where = classify_direction(l.inst, d, aopt.budget);
  if (static_cast<int>(where) > static_cast<int>(limit)) {
    if (limit == SpaceTag::U) throw NotInU();
    throw ValidationError("OutsideSpace", "direction lies outside the " + to_string(limit) + " space");
  }
  PricingOptions popt;
  popt.analysis = aopt;
  if (!cfg.eps_max.empty()) popt.eps_max = parse_positive(cfg.eps_max, "--eps-max");
  for (const auto& e : split_list(cfg.eps)) popt.eps_table.push_back(parse_positive(e, "--eps"));
  auto report = analyze(l.inst, l.out, aopt);
  auto r = price_direction(l.inst, l.out, report, d, popt);
  std::cout << (cfg.json ? pricing_json(r, l.out) + "\n" : pricing_text(r, l.out));
  switch (r.verdict) {
    case PriceVerdict::PricedExactly:
    case PriceVerdict::PricedUpToTolerance:
      return 0;
    case PriceVerdict::Fails:
      return 3;
    default:
      return 2;
  }
}

int cmd_dp(const RunConfig& cfg) {
  auto l = load(cfg);
  AnalysisOptions aopt = analysis_options(cfg);
  auto report = analyze(l.inst, l.out, aopt);
  auto v = dp_verdict(l.inst, l.out, report, aopt);
  if (!cfg.direction.empty()) {
    auto d = load_direction(cfg.direction, l.inst).values;
    PricingOptions popt;
    popt.analysis = aopt;
    if (!cfg.eps_max.empty()) popt.eps_max = parse_positive(cfg.eps_max, "--eps-max");
    auto r = price_direction(l.inst, l.out, report, d, popt);
    if (r.verdict == PriceVerdict::Fails) record_dp_failure(v, r.space, "direction " + cfg.direction + " is not priced");
  }
  SpaceTag limit = parse_space(cfg.space);
  std::erase_if(v.spaces, [&](const SpaceVerdict& s) { return static_cast<int>(s.space) > static_cast<int>(limit); });
  std::cout << (cfg.json ? dp_json(v) + "\n" : dp_text(v));
  bool settled = v.dp1.status != DpStatus::Unknown && v.dp2.status != DpStatus::Unknown && v.multiplier_bound.certified;
  return settled ? 0 : 2;
}

int cmd_truncate(const RunConfig& cfg) {
  auto inst = load_instance(cfg.instance);
  SweepOptions sopt;
  if (!cfg.schedule.empty()) {
    sopt.schedule.clear();
    for (const auto& s : split_list(cfg.schedule)) {
      mpz_class n;
      if (n.set_str(s, 10) != 0 || n <= 0) throw ValidationError("BadOption", "--schedule entries must be positive integers");
      sopt.schedule.push_back(n);
    }
  }
  auto sweep = fdsilp_estimate(inst, sopt);
  if (cfg.json) {
    ojson j;
    j["instance"] = inst.name;
    ojson rows = ojson::array();
    for (const auto& e : sweep.entries) {
      ojson row{{"N", e.n.get_str()}, {"rows", e.rows}, {"skipped", e.skipped}};
      if (!e.skipped) {
        row["status"] = to_string(e.status);
        row["OV_N"] = e.value.to_exact_string();
        row["OV_N_decimal"] = e.value.to_string();
      }
      rows.push_back(row);
    }
    j["entries"] = rows;
    j["monotone"] = sweep.monotone;
    j["sup_estimate"] = sweep.sup_estimate.to_exact_string();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "instance: " << inst.name << "\n";
    std::cout << "N | rows | status | OV_N | decimal\n";
    for (const auto& e : sweep.entries) {
      std::cout << e.n.get_str() << " | " << e.rows << " | ";
      if (e.skipped)
        std::cout << "skipped (row cap) | - | -\n";
      else
        std::cout << to_string(e.status) << " | " << e.value.to_exact_string() << " | " << e.value.to_string() << "\n";
    }
    std::cout << "monotone: " << (sweep.monotone ? "yes" : "no") << "\n";
    std::cout << "sup_estimate: " << sweep.sup_estimate.to_exact_string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-infinite linear program analysis"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("instance", cfg.instance, "Instance file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--json", cfg.json, "Emit JSON");
    sub->add_option("--budget-grid", cfg.budget_grid, "Grid points scanned by fallback searches");
    sub->add_option("--delta-max", cfg.delta_max, "Largest penalty weight in the omega schedule");
    sub->add_option("--dim-cap", cfg.dim_cap, "Maximum index axes per eliminated row");
    sub->add_option("--order", cfg.order, "Elimination order, comma separated");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "S, L, OV, feasibility and gap classification");
  common(analyze_cmd);
  auto* dump_cmd = app.add_subcommand("fm-dump", "Projected system after elimination");
  common(dump_cmd);
  auto* price_cmd = app.add_subcommand("price", "Price a perturbation direction");
  common(price_cmd);
  price_cmd->add_option("--direction", cfg.direction, "Direction file")->required()->check(CLI::ExistingFile);
  price_cmd->add_option("--space", cfg.space, "Constraint space: U, bounded or all")
      ->check(CLI::IsMember({"U", "bounded", "all"}));
  price_cmd->add_option("--eps-max", cfg.eps_max, "Largest step tried");
  price_cmd->add_option("--eps", cfg.eps, "Explicit steps, comma separated");
  auto* dp_cmd = app.add_subcommand("dp", "Sufficient conditions for dual pricing");
  common(dp_cmd);
  dp_cmd->add_option("--direction", cfg.direction, "Direction whose pricing failure is recorded")
      ->check(CLI::ExistingFile);
  dp_cmd->add_option("--space", cfg.space, "Largest space reported: U, bounded or all")
      ->check(CLI::IsMember({"U", "bounded", "all"}));
  dp_cmd->add_option("--eps-max", cfg.eps_max, "Largest step tried when pricing --direction");
  auto* trunc_cmd = app.add_subcommand("truncate-check", "Optimal values of finite truncations");
  trunc_cmd->alias("truncate");
  common(trunc_cmd);
  trunc_cmd->add_option("--schedule", cfg.schedule, "Truncation sizes, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    for (auto* sub : {analyze_cmd, dump_cmd, price_cmd, dp_cmd, trunc_cmd}) {
      if (!sub->parsed()) continue;
      apply_env(cfg, *sub);
      if (sub == analyze_cmd) return cmd_analyze(cfg);
      if (sub == dump_cmd) return cmd_fm_dump(cfg);
      if (sub == price_cmd) return cmd_price(cfg);
      if (sub == dp_cmd) return cmd_dp(cfg);
      return cmd_truncate(cfg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
