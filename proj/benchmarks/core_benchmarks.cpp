#include <benchmark/benchmark.h>

#include "gmfg/estimation.hpp"
#include "gmfg/evaluation.hpp"
#include "gmfg/solver.hpp"

using namespace gmfg;

namespace {

GraphonSpec sbm_spec() {
    SbmGraphon g;
    g.boundaries = {0.7, 1.0};
    g.rates = {{0.9, 0.3}, {0.3, 0.9}};
    return GraphonSpec{g};
}

struct Fixture {
    GameSpec game = build_beach_bar(BeachBarConfig{});
    DiscreteGraphon graphon;
    PolicyProfile pi;
    DistributionFlow flow;
    AggregateField z;

    explicit Fixture(int n_agents)
        : graphon(discretize(sbm_spec(), n_agents, game.horizon)),
          pi(PolicyProfile::uniform(n_agents, game.horizon, game.n_states,
                                    game.n_actions())),
          flow(induce_flow(game, pi)),
          z(compute_aggregates(flow, graphon)) {}
};

void bm_induce_flow(benchmark::State& state) {
    const Fixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(induce_flow(fx.game, fx.pi));
}
BENCHMARK(bm_induce_flow)->Arg(10)->Arg(100);

void bm_compute_aggregates(benchmark::State& state) {
    const Fixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_aggregates(fx.flow, fx.graphon));
}
BENCHMARK(bm_compute_aggregates)->Arg(10)->Arg(100);

void bm_eval_policy_exact(benchmark::State& state) {
    const Fixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eval_policy_exact(fx.game, fx.pi, fx.z));
}
BENCHMARK(bm_eval_policy_exact)->Arg(10)->Arg(100);

void bm_soft_best_response(benchmark::State& state) {
    const Fixture fx(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(soft_best_response(fx.game, fx.z));
}
BENCHMARK(bm_soft_best_response)->Arg(10)->Arg(100);

void bm_pmd_iteration(benchmark::State& state) {
    const Fixture fx(static_cast<int>(state.range(0)));
    PMDConfig config;
    config.iterations = 1;
    config.lambda = 1.0;
    config.eta = 0.1;
    config.beta = 0.01;
    for (auto _ : state) benchmark::DoNotOptimize(pmd_run(fx.game, fx.graphon, config));
}
BENCHMARK(bm_pmd_iteration)->Arg(10)->Arg(50);

void bm_sample_episodes(benchmark::State& state) {
    const Fixture fx(10);
    const BehaviorPolicySpec behavior;
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_episodes(fx.game, fx.pi, behavior, fx.z, 10,
                                                 static_cast<int>(state.range(0)), 1));
}
BENCHMARK(bm_sample_episodes)->Arg(100)->Arg(300);

}  // namespace

BENCHMARK_MAIN();
