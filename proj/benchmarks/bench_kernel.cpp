#include <benchmark/benchmark.h>

#include "kpkit/oscillatory.hpp"

using namespace kpkit;

namespace {

void BM_eval_kernel(benchmark::State& state) {
    KernelEvalSpec spec;
    spec.idx = {int(state.range(0)), 0};
    spec.t = 0.25;
    spec.max_quad_points = 200000;
    for (auto _ : state)
        benchmark::DoNotOptimize(eval_kernel(spec, 1.5, -0.5));
}
BENCHMARK(BM_eval_kernel)->Arg(0)->Arg(1)->Arg(2);

void BM_verify_block(benchmark::State& state) {
    KernelSweepConfig cfg;
    cfg.t_samples = {0.25, 0.0625};
    for (auto _ : state) {
        auto res = verify_kernel_bound({int(state.range(0)), 0}, cfg);
        benchmark::DoNotOptimize(res.s_y);
    }
}
BENCHMARK(BM_verify_block)->Unit(benchmark::kMillisecond)->Arg(0)->Arg(1)->Arg(2);

} // namespace
