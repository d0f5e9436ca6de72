#include <benchmark/benchmark.h>

#include "homoeoid/estimate.hpp"
#include "homoeoid/field.hpp"
#include "homoeoid/fibre.hpp"
#include "homoeoid/knapp.hpp"
#include "homoeoid/maximal.hpp"
#include "homoeoid/rng.hpp"
#include "homoeoid/volume.hpp"

namespace homoeoid
{
namespace
{
void BM_PhiloxBlocks(benchmark::State& state)
{
    CounterRng const rng(1, 0);
    std::uint64_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(rng.block(i++));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_PhiloxBlocks);

void BM_AnnulusSampling(benchmark::State& state)
{
    AnnulusSpec const spec(Ellipsoid(Vec::Zero(3), Radii::constant(3, 1)), 1.0 / 64);
    auto const m = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_annulus(spec, m, 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnnulusSampling)->Arg(1 << 16)->Arg(1 << 18);

void BM_IntersectionVolume(benchmark::State& state)
{
    auto const [a, b] = normalised_pair(1, 0.25, Radii::constant(3, 1.0), Radii::constant(3, 1.001),
                                        1.0 / 128, default_cn(3), true);
    for (auto _ : state)
        benchmark::DoNotOptimize(intersection_volume(a, b, 100000, 5));
}
BENCHMARK(BM_IntersectionVolume);

void BM_SharedAverages(benchmark::State& state)
{
    Field const f = random_bump_mixture(3, 4, 2).field();
    AnnulusSpec const spec(Ellipsoid(Vec::Zero(3), Radii::constant(3, 1)), 1.0 / 64);
    for (auto _ : state)
        benchmark::DoNotOptimize(shared_averages(f, spec, default_cn(3), 2000, 1));
}
BENCHMARK(BM_SharedAverages);

void BM_FibreTrace(benchmark::State& state)
{
    Vec x(3);
    x << 0.3, -0.2, 0.4;
    Vec r(3);
    r << 1.1, 0.9, 1.3;
    for (auto _ : state)
        benchmark::DoNotOptimize(trace_fibre(x, Radii(r), {0, 0.05}, 0.01));
}
BENCHMARK(BM_FibreTrace);

void BM_ShellPartialSums(benchmark::State& state)
{
    auto const point = sample_tangency_set(3, 1, 4)[0];
    for (auto _ : state)
        benchmark::DoNotOptimize(shell_partial_sums(point, static_cast<int>(state.range(0)), 500, 2));
}
BENCHMARK(BM_ShellPartialSums)->Arg(256)->Arg(1024);

}  // namespace
}  // namespace homoeoid

BENCHMARK_MAIN();
