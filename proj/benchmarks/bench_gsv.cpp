#include <benchmark/benchmark.h>

#include "gsv/kernels.hpp"
#include "gsv/pricing.hpp"
#include "gsv/rates.hpp"
#include "gsv/sampling.hpp"
#include "gsv/simulate.hpp"

using namespace gsv;

namespace {

ModelSpec model(double H) {
    const auto k = KernelSpec::riemann_liouville(H, 1);
    return ModelSpec{k, VolFunction::bounded_smooth(0.2, 0.5), -0.5, 1.0, 1.0};
}

void BM_HatfWeights(benchmark::State& state) {
    const PathGrid grid(static_cast<std::size_t>(state.range(0)), 1);
    for (auto _ : state) benchmark::DoNotOptimize(HatfOperator(KernelSpec::fbm(0.3, 1), grid).weights().data());
}
BENCHMARK(BM_HatfWeights)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_DrawKernel(benchmark::State& state) {
    const GaussianSampler sampler(KernelSpec::riemann_liouville(0.3, 1), PathGrid(static_cast<std::size_t>(state.range(0)), 1));
    GaussianSample out;
    std::uint64_t i = 0;
    for (auto _ : state) {
        sampler.draw(1, i++, out);
        benchmark::DoNotOptimize(out.vol_path.data());
    }
}
BENCHMARK(BM_DrawKernel)->Arg(64)->Arg(256);

void BM_TailEstimate(benchmark::State& state) {
    const auto m = model(0.75);
    const PathGrid grid(64, 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_tail(m, ScalingParams{0.1, 0.75, 0.75, 0.0}, 0.1, grid, 10000, 3).mean);
}
BENCHMARK(BM_TailEstimate)->Unit(benchmark::kMillisecond);

void BM_TerminalRate(benchmark::State& state) {
    const auto m = model(0.75);
    SolverOptions o;
    o.levels = std::vector<std::size_t>{16, 32, 64, 128};
    o.levels.resize(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(ldp_rate_terminal(m, 0.3, o).value);
}
BENCHMARK(BM_TerminalRate)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_ImpliedVol(benchmark::State& state) {
    const double p = bs_dimensionless_call(0.1, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(implied_vol(0.1, p));
}
BENCHMARK(BM_ImpliedVol);

}  // namespace

BENCHMARK_MAIN();
