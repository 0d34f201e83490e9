#include <benchmark/benchmark.h>

#include "kpkit/evolution.hpp"
#include "kpkit/norms.hpp"
#include "kpkit/random_field.hpp"

using namespace kpkit;

namespace {

PhysicalField sample(int n) {
    Grid2D g = make_grid(16.0, 16.0, n, n);
    SpectrumSpec sp;
    sp.seed = 1;
    return random_field(sp, g);
}

void BM_transform_roundtrip(benchmark::State& state) {
    PhysicalField u = sample(int(state.range(0)));
    for (auto _ : state) {
        PhysicalField back = inverse_transform(forward_transform(u));
        benchmark::DoNotOptimize(back.v.data());
    }
}
BENCHMARK(BM_transform_roundtrip)->Arg(64)->Arg(128)->Arg(256);

void BM_propagate(benchmark::State& state) {
    PhysicalField u = sample(int(state.range(0)));
    SpectralField F = forward_transform(u);
    for (auto _ : state) {
        SpectralField Ft = propagate(F, 0.37, DispersionSign::kp1);
        benchmark::DoNotOptimize(Ft.c.data());
    }
}
BENCHMARK(BM_propagate)->Arg(64)->Arg(128);

void BM_z0_norm(benchmark::State& state) {
    PhysicalField u = sample(int(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(z0_norm(u, 0.05).total);
}
BENCHMARK(BM_z0_norm)->Arg(64)->Arg(128);

void BM_nonlinear_term(benchmark::State& state) {
    PhysicalField u = sample(int(state.range(0)));
    SpectralField F = forward_transform(u);
    SpectralField w = project_Q(F), v = project_lowpass(F);
    for (auto _ : state) {
        auto out = nonlinear_term(w, v, Nonlinearity::kp_quadratic);
        benchmark::DoNotOptimize(out.first.c.data());
    }
}
BENCHMARK(BM_nonlinear_term)->Arg(64)->Arg(128);

} // namespace

BENCHMARK_MAIN();
