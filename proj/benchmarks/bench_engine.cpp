#include <benchmark/benchmark.h>

#include "silp/analysis.hpp"

using namespace silp;

namespace {

SilpInstance fixture(const char* name) {
  return load_instance(std::string(SILP_FIXTURE_DIR) + "/" + name + ".silp");
}

void BM_EliminateLimitDual(benchmark::State& state) {
  auto inst = fixture("limit_dual");
  FmOptions opt;
  opt.order = {"x3", "x2", "x1"};
  for (auto _ : state) benchmark::DoNotOptimize(eliminate(inst, opt));
}
BENCHMARK(BM_EliminateLimitDual);

void BM_EliminateGrid(benchmark::State& state) {
  auto inst = fixture("grid_pricing");
  for (auto _ : state) benchmark::DoNotOptimize(eliminate(inst));
}
BENCHMARK(BM_EliminateGrid);

void BM_SupOverRational(benchmark::State& state) {
  Expr e = parse_expr("2/i - 10/i^2");
  IndexDomain dom{{Axis{"i", 1, std::nullopt}}};
  for (auto _ : state) benchmark::DoNotOptimize(sup_over(e, dom));
}
BENCHMARK(BM_SupOverRational);

void BM_SolveTruncation(benchmark::State& state) {
  auto sys = truncate(fixture("limit_dual"), state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_exact(sys));
}
BENCHMARK(BM_SolveTruncation)->Arg(10)->Arg(100)->Arg(1000);

void BM_Analyze(benchmark::State& state) {
  auto inst = fixture("no_primal_solution");
  auto out = eliminate(inst);
  for (auto _ : state) benchmark::DoNotOptimize(analyze(inst, out));
}
BENCHMARK(BM_Analyze);

}  // namespace

BENCHMARK_MAIN();
