#include <benchmark/benchmark.h>

#include "wkam/weakkam.hpp"

using namespace wkam;

namespace {

const ActionKernel& pendulum_kernel(int n, int substeps) {
    static std::map<std::pair<int, int>, ActionKernel> cache;
    auto key = std::make_pair(n, substeps);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache
                 .emplace(key, build_kernel(make_pendulum(1.0), CohomologyClass(0.4),
                                            SpatialGrid(n), substeps))
                 .first;
    return it->second;
}

void BM_BuildKernel(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto model = make_pendulum(1.0);
    for (auto _ : state) {
        auto kernel = build_kernel(model, CohomologyClass(0.4), SpatialGrid(n), 8);
        benchmark::DoNotOptimize(kernel.table.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_BuildKernel)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void BM_MinPlusProduct(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto& kernel = pendulum_kernel(n, 8);
    for (auto _ : state) {
        auto p = minplus_product(kernel.table, kernel.table, kernel.n());
        benchmark::DoNotOptimize(p.data());
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_MinPlusProduct)->Arg(64)->Arg(128)->Arg(256)->Complexity();

void BM_OperatorApply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto& kernel = pendulum_kernel(n, 8);
    GridFunction u(kernel.grid, 0.0);
    for (auto _ : state) {
        u = lax_oleinik(kernel, u);
        u.normalize_min();
        benchmark::DoNotOptimize(u[0]);
    }
}
BENCHMARK(BM_OperatorApply)->Arg(64)->Arg(128)->Arg(256);

void BM_AlphaBracket(benchmark::State& state) {
    const auto& kernel = pendulum_kernel(64, 8);
    for (auto _ : state) {
        auto est = alpha(kernel, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(est.value);
    }
}
BENCHMARK(BM_AlphaBracket)->Arg(64)->Arg(256);

void BM_TruncatedBarrier(benchmark::State& state) {
    const auto& kernel = pendulum_kernel(static_cast<int>(state.range(0)), 8);
    auto est = alpha(kernel, 256);
    for (auto _ : state) {
        auto barrier = truncated_barrier(kernel, est, 8, 24);
        benchmark::DoNotOptimize(barrier.table.data());
    }
}
BENCHMARK(BM_TruncatedBarrier)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
