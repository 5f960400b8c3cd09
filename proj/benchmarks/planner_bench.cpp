#include <benchmark/benchmark.h>

#include "optbt/bench.hpp"
#include "optbt/logic.hpp"
#include "optbt/planner.hpp"

namespace {

using namespace optbt;

bench::Instance instance_for(const benchmark::State& state) {
  return bench::generate(bench::GenParams::preset("case" + std::to_string(state.range(0))));
}

void BM_Obtea(benchmark::State& state) {
  auto inst = instance_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(planner::obtea(inst.sub_goals, inst.s0, inst.domain));
  state.counters["literals"] = static_cast<double>(inst.domain.literal_count());
  state.counters["actions"] = static_cast<double>(inst.domain.actions().size());
}
BENCHMARK(BM_Obtea)->DenseRange(0, 9)->Unit(benchmark::kMicrosecond);

void BM_Baseline(benchmark::State& state) {
  auto inst = instance_for(state);
  for (auto _ : state) benchmark::DoNotOptimize(planner::bt_expansion_baseline(inst.sub_goals, inst.s0, inst.domain));
}
BENCHMARK(BM_Baseline)->DenseRange(0, 9)->Unit(benchmark::kMicrosecond);

void BM_Simulate(benchmark::State& state) {
  auto inst = instance_for(state);
  auto plan = planner::obtea(inst.sub_goals, inst.s0, inst.domain);
  for (auto _ : state) benchmark::DoNotOptimize(bt::simulate(*plan.tree, inst.s0, inst.domain));
}
BENCHMARK(BM_Simulate)->Arg(0)->Arg(9);

void BM_Generate(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(instance_for(state));
}
BENCHMARK(BM_Generate)->Arg(0)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_OracleSmall(benchmark::State& state) {
  auto p = bench::GenParams::preset("small");
  p.seed = static_cast<std::uint64_t>(state.range(0));
  auto inst = bench::generate(p);
  for (auto _ : state) benchmark::DoNotOptimize(planner::dijkstra_oracle(inst.s0, inst.sub_goals, inst.domain));
}
BENCHMARK(BM_OracleSmall)->Arg(1)->Arg(2);

void BM_ToDnf(benchmark::State& state) {
  auto wff = logic::parse_wff("(a | b) & (c | d) & (e | !f) & !(g & h) & (a | c | e)");
  for (auto _ : state) benchmark::DoNotOptimize(logic::to_dnf(wff));
}
BENCHMARK(BM_ToDnf);

}  // namespace

BENCHMARK_MAIN();
