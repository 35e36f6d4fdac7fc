#include <benchmark/benchmark.h>

#include <random>

#include "mrpath/instance.h"
#include "mrpath/model.h"
#include "mrpath/radio.h"
#include "mrpath/solver.h"

namespace {

using namespace mrpath;

void BM_BoundTables(benchmark::State& state) {
  const Instance inst = generate_instance(Scenario::kA, static_cast<int>(state.range(0)), 3, 1);
  const MilpModel model = build_mp_cua(inst);
  for (auto _ : state) {
    BoundTables tables(model.routing);
    benchmark::DoNotOptimize(tables.fleet(3, 1));
  }
}
BENCHMARK(BM_BoundTables)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const Variant variant = state.range(1) ? Variant::kCollisionAware : Variant::kCollisionUnaware;
  const Instance inst = generate_instance(Scenario::kA, static_cast<int>(state.range(0)), 3, 7);
  const MilpModel model = build_model(inst, variant);
  const BoundTables tables(model.routing);
  for (auto _ : state) {
    const Solution sol = solve(model, {}, &tables);
    benchmark::DoNotOptimize(sol.objective);
    state.counters["bb_nodes"] = static_cast<double>(sol.stats.nodes_explored);
  }
}
BENCHMARK(BM_Solve)->Args({12, 0})->Args({12, 1})->Args({18, 0})->Args({18, 1})
    ->Unit(benchmark::kMillisecond);

void BM_BuildModel(benchmark::State& state) {
  const Instance inst = generate_instance(Scenario::kA, static_cast<int>(state.range(0)), 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(build_mp_ca(inst).constraints.size());
}
BENCHMARK(BM_BuildModel)->Arg(12)->Arg(18);

void BM_Sinr(benchmark::State& state) {
  const RadioParams p;
  const LinkSample serving{LinkState::kLoS, 1.0, 30.0};
  const Interferer interferers[] = {{{LinkState::kNLoS, 1.0, 60.0}, p.side_lobe_gain},
                                    {{LinkState::kLoS, 1.0, 45.0}, p.main_lobe_gain()}};
  for (auto _ : state) benchmark::DoNotOptimize(sinr(serving, interferers, p));
}
BENCHMARK(BM_Sinr);

}  // namespace

BENCHMARK_MAIN();
