#include <benchmark/benchmark.h>

#include "potlab/bounds.hpp"
#include "potlab/ode_limit.hpp"
#include "potlab/optimal_ratio.hpp"
#include "potlab/policy.hpp"
#include "potlab/secretary.hpp"

using namespace potlab;

static void BM_benchmark_exact_hard(benchmark::State& state) {
    auto hard = Distribution::hard_instance({2000, 20.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(benchmark_exact(hard, 2000));
}
BENCHMARK(BM_benchmark_exact_hard);

static void BM_optimal_thresholds_hard(benchmark::State& state) {
    auto hard = Distribution::hard_instance({2000, 20.0});
    for (auto _ : state)
        benchmark::DoNotOptimize(optimal_thresholds(hard, 2000).g.back());
}
BENCHMARK(BM_optimal_thresholds_hard);

static void BM_kthreshold_value_exact(benchmark::State& state) {
    auto hard = Distribution::hard_instance({2000, 20.0});
    auto sched = ThresholdSchedule::make(2000, {1000, 1000}, {2e-3, 5e-4});
    for (auto _ : state)
        benchmark::DoNotOptimize(kthreshold_value_exact(hard, sched));
}
BENCHMARK(BM_kthreshold_value_exact);

static void BM_key_lower_bound(benchmark::State& state) {
    auto sched = ThresholdSchedule::make(101, {101}, {2.0 / 102});
    for (auto _ : state)
        benchmark::DoNotOptimize(key_lower_bound(101, sched).value);
}
BENCHMARK(BM_key_lower_bound);

static void BM_two_threshold_asymptotic(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(two_threshold_asymptotic(3.21, 0.671, 0.16).value);
}
BENCHMARK(BM_two_threshold_asymptotic);

static void BM_epsilon_n(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(epsilon_n(n, 1e-9).eps_n);
}
BENCHMARK(BM_epsilon_n)->Arg(10)->Arg(50)->Arg(200);

static void BM_simulate_policy(benchmark::State& state) {
    auto d = Distribution::atomic({{0.0, 0.5}, {1.0, 0.5}});
    auto pol = optimal_thresholds(d, 20);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_policy(d, 20, pol, 20000, 7).value);
    state.SetItemsProcessed(state.iterations() * 20000);
}
BENCHMARK(BM_simulate_policy);

static void BM_shoot(benchmark::State& state) {
    ShootParams p;
    p.step = 1e-4;
    for (auto _ : state)
        benchmark::DoNotOptimize(shoot(0.63, p).steps);
}
BENCHMARK(BM_shoot);

static void BM_dp_upper_bound(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(dp_upper_bound(10000).ratio);
}
BENCHMARK(BM_dp_upper_bound);

static void BM_simulate_stsf(benchmark::State& state) {
    auto inst = SecretaryInstance::rank_instance(1000);
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_stsf(inst, 0.2032, 2000, 3).ratio);
    state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_simulate_stsf);

BENCHMARK_MAIN();
