#include "solvgeom/carnot.hpp"
#include "solvgeom/curvature.hpp"
#include "solvgeom/so6_family.hpp"
#include "solvgeom/symmetric.hpp"

#include <benchmark/benchmark.h>

using namespace solvgeom;

static void BM_RicciSo6H(benchmark::State& state) {
    const auto alg = build_so_nH(6);
    for (auto _ : state) benchmark::DoNotOptimize(ricci(alg.base));
}
BENCHMARK(BM_RicciSo6H)->Unit(benchmark::kMillisecond);

static void BM_BuildSo6H(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(build_so_nH(6));
}
BENCHMARK(BM_BuildSo6H)->Unit(benchmark::kMillisecond);

// One restart of the uniform subspace search.
static void BM_SearchRestart(benchmark::State& state) {
    SearchOptions so;
    so.trials = 1;
    const int r = static_cast<int>(state.range(0)), s = static_cast<int>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_uniform(r, s, so));
        ++so.seed;
    }
}
BENCHMARK(BM_SearchRestart)->Args({4, 3})->Args({5, 2})->Args({8, 3})->Unit(benchmark::kMillisecond);

static void BM_SectionalFamily(benchmark::State& state) {
    const auto alg = build_solvmanifold(family_triple(w_of(0.6, 0.48, 0.64)));
    std::mt19937_64 rng(7);
    const Eigen::VectorXd x = random_normal(alg.dim(), 1, rng), y = random_normal(alg.dim(), 1, rng);
    for (auto _ : state) benchmark::DoNotOptimize(sectional(alg, x, y));
}
BENCHMARK(BM_SectionalFamily);

static void BM_EnumerateTwistsSl3H(benchmark::State& state) {
    const auto alg = build_sl_nH(3);
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_twists(alg));
}
BENCHMARK(BM_EnumerateTwistsSl3H)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
