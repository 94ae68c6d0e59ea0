#include <benchmark/benchmark.h>

#include "ellipboot/edgeworth.hpp"
#include "ellipboot/mixtures.hpp"
#include "ellipboot/moments.hpp"
#include "ellipboot/numcore.hpp"
#include "ellipboot/regions.hpp"
#include "ellipboot/resampling.hpp"

using namespace ellipboot;

namespace {

Sample fixed_sample(int n, int p) {
    const MixtureSpec mix = builtin(p == 2 ? "biv-kurtotic" : "tri-skewed");
    return draw(mix, n, SeedSpec{1234, static_cast<std::uint64_t>(n)});
}

void BM_Chi2Quantile(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(chi2_quantile(5, 0.9));
    }
}
BENCHMARK(BM_Chi2Quantile);

void BM_Cumulants(benchmark::State& state) {
    const Sample s = fixed_sample(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cumulants(s));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cumulants)->Arg(50)->Arg(200)->Arg(800);

void BM_BootPlain(benchmark::State& state) {
    const Sample s = fixed_sample(static_cast<int>(state.range(0)), 2);
    const SeedSpec seed{7, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(boot_squared_norms(s, 200, ResampleMode::Plain, nullptr, seed));
    }
    state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BootPlain)->Arg(20)->Arg(100);

void BM_BootStudentized(benchmark::State& state) {
    const Sample s = fixed_sample(static_cast<int>(state.range(0)), 2);
    const SeedSpec seed{7, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            boot_squared_norms(s, 200, ResampleMode::Studentized, nullptr, seed));
    }
    state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BootStudentized)->Arg(20)->Arg(100);

void BM_BootSmoothed(benchmark::State& state) {
    const Sample s = fixed_sample(static_cast<int>(state.range(0)), 2);
    const Bandwidth bw = bandwidth_matrix(s, 0.9);
    const SeedSpec seed{7, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(boot_squared_norms(s, 200, ResampleMode::Smoothed, &bw, seed));
    }
    state.SetItemsProcessed(state.iterations() * 200);
}
BENCHMARK(BM_BootSmoothed)->Arg(20)->Arg(100);

void BM_BuildBP(benchmark::State& state) {
    const Sample s = fixed_sample(20, 2);
    const SeedSpec seed{7, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_bp(s, 0.9, 1000, seed));
    }
}
BENCHMARK(BM_BuildBP);

void BM_BuildBT(benchmark::State& state) {
    const Sample s = fixed_sample(20, 2);
    const SeedSpec seed{7, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_bt(s, 0.9, 1000, seed));
    }
}
BENCHMARK(BM_BuildBT);

void BM_BuildSBP(benchmark::State& state) {
    const Sample s = fixed_sample(20, 2);
    const SeedSpec seed{7, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_sbp(s, 0.9, 1000, seed));
    }
}
BENCHMARK(BM_BuildSBP);

void BM_BuildAN(benchmark::State& state) {
    const Sample s = fixed_sample(20, 2);
    const SeedSpec seed{7, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_an(s, 0.9, 1000, seed));
    }
}
BENCHMARK(BM_BuildAN);

void BM_BuildRBP(benchmark::State& state) {
    const Sample s = fixed_sample(20, 2);
    const SeedSpec seed{7, 1};
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_rbp(s, 0.9, 200, 100, seed));
    }
}
BENCHMARK(BM_BuildRBP);

void BM_MixtureDraw(benchmark::State& state) {
    const MixtureSpec mix = builtin("tri-bimodal");
    std::uint64_t t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(draw(mix, 100, SeedSpec{9, t++}));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_MixtureDraw);

}  // namespace

BENCHMARK_MAIN();
