#include "sabinelab/billiards.hpp"
#include "sabinelab/disk.hpp"
#include "sabinelab/sabine.hpp"
#include "sabinelab/specfun.hpp"

#include <benchmark/benchmark.h>

using namespace sabinelab;
using specfun::cplx;

static void BM_Airy(benchmark::State& state) {
    const cplx pts[] = {{0.5, 0.3}, {-4.0, 1.0}, {7.0, -2.0}, {-30.0, 5.0}};
    for (auto _ : state) {
        for (cplx z : pts) benchmark::DoNotOptimize(specfun::airy(z));
    }
}
BENCHMARK(BM_Airy);

static void BM_BesselQuad(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const cplx z(250.0, -0.01 * state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(specfun::bessel_quad_scaled(n, z));
}
BENCHMARK(BM_BesselQuad)->Args({10, 100})->Args({200, 100})->Args({200, 600})->Args({400, 600});

static void BM_SecularNormalized(benchmark::State& state) {
    const disk::SecularProblem p = disk::Transparent{2.0, 1.0};
    const cplx lambda(240.0, -1.1);
    for (auto _ : state) benchmark::DoNotOptimize(disk::secular_normalized(p, 60, lambda));
}
BENCHMARK(BM_SecularNormalized);

static void BM_BilliardStepEllipse(benchmark::State& state) {
    const billiards::ConvexDomain e = billiards::ConvexDomain::ellipse(1.5, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(billiards::billiard_step(e, {0.7, 0.3}));
}
BENCHMARK(BM_BilliardStepEllipse);

static void BM_SabineBoundsDisk(benchmark::State& state) {
    const billiards::ConvexDomain d = billiards::ConvexDomain::disk();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sabine::sabine_bounds(d, reflect::TransparentObstacle{2.0, 1.0}, 4));
    }
}
BENCHMARK(BM_SabineBoundsDisk)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
