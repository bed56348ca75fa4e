#include <benchmark/benchmark.h>

#include "coverlab/fixed_radius.hpp"
#include "coverlab/growth.hpp"
#include "coverlab/rng.hpp"
#include "coverlab/space.hpp"
#include "coverlab/subset_cover.hpp"

using namespace coverlab;

namespace {

void BM_FixedRadiusCircle(benchmark::State& state) {
    const double L = static_cast<double>(state.range(0));
    FixedRadiusConfig cfg{1.0, SeedDistribution::uniform(), Space::circle(L)};
    RngStream rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cover_count(cfg, rng));
}
BENCHMARK(BM_FixedRadiusCircle)->Arg(100)->Arg(1000)->Arg(10000);

void BM_GrowthCoverTimeCircle(benchmark::State& state) {
    const double L = static_cast<double>(state.range(0));
    GrowthParams p{1.0, 1.0, SeedDistribution::uniform(), Space::circle(L)};
    RngStream rng(2);
    for (auto _ : state) {
        const GrowthRealization real = simulate_realization(p, rng);
        benchmark::DoNotOptimize(cover_time_exact(p.space, real, 1.0));
    }
}
BENCHMARK(BM_GrowthCoverTimeCircle)->Arg(100)->Arg(1000)->Arg(10000);

void BM_GrowthCoverTimeNet(benchmark::State& state) {
    const double L = 100.0;
    GrowthParams p{1.0, 1.0, SeedDistribution::uniform(), Space::circle(L)};
    const Net net = epsilon_net(p.space, L / static_cast<double>(state.range(0)));
    RngStream rng(3);
    const GrowthRealization real = simulate_realization(p, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(cover_time_net(p.space, real, net, 1.0));
    state.SetComplexityN(static_cast<long>(net.points.size()));
}
BENCHMARK(BM_GrowthCoverTimeNet)->Arg(64)->Arg(512)->Arg(4096);

void BM_EpsilonNetTorus(benchmark::State& state) {
    const Space t = Space::flat_torus(20.0, 20.0);
    const double eps = 20.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(epsilon_net(t, eps));
}
BENCHMARK(BM_EpsilonNetTorus)->Arg(8)->Arg(32)->Arg(128);

void BM_SubsetCoverSingleton(benchmark::State& state) {
    SubsetSampler sampler(UniformSingleton{static_cast<std::size_t>(state.range(0))});
    RngStream rng(4);
    for (auto _ : state) benchmark::DoNotOptimize(simulate_cover(sampler, rng));
}
BENCHMARK(BM_SubsetCoverSingleton)->Arg(50)->Arg(200)->Arg(1000);

void BM_PointTailQuadratureTorus(benchmark::State& state) {
    GrowthParams p{1.0, 1.0, SeedDistribution::uniform(), Space::flat_torus(8.0, 8.0)};
    const Point s = TorusPos{1.0, 1.0};
    double t = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(point_tail_analytic(p, s, t));
        t = (t < 4.0) ? t + 0.25 : 1.0;
    }
}
BENCHMARK(BM_PointTailQuadratureTorus);

}  // namespace

BENCHMARK_MAIN();
