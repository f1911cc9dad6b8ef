#include <benchmark/benchmark.h>

#include "trinv/analytics.hpp"
#include "trinv/ar1.hpp"
#include "trinv/kernels.hpp"
#include "trinv/tridiag.hpp"

using namespace trinv;
using kernels::Exec;

namespace {

Exec arg_exec(const benchmark::State& state) {
    return state.range(1) ? Exec::parallel : Exec::serial;
}

void label_exec(benchmark::State& state) {
    state.SetLabel(state.range(1) ? "parallel" : "serial");
}

void BM_materialize(benchmark::State& state) {
    const auto f = inverse_factors(TridiagSpec::make(state.range(0), 1, 3.0, 2.0));
    const Exec exec = arg_exec(state);
    for (auto _ : state) {
        auto m = kernels::materialize_inverse(f, exec);
        benchmark::DoNotOptimize(m.a.data());
    }
    label_exec(state);
    state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}
BENCHMARK(BM_materialize)
    ->Args({1024, 0})
    ->Args({1024, 1})
    ->Args({4096, 0})
    ->Args({4096, 1})
    ->Unit(benchmark::kMillisecond);

void BM_row_sums_direct(benchmark::State& state) {
    const auto f = inverse_factors(TridiagSpec::make(state.range(0), 1, 3.0, 2.0));
    const Exec exec = arg_exec(state);
    for (auto _ : state) {
        auto s = kernels::row_sums_direct(f, exec);
        benchmark::DoNotOptimize(s.data());
    }
    label_exec(state);
}
BENCHMARK(BM_row_sums_direct)->Args({4096, 0})->Args({4096, 1})->Unit(benchmark::kMillisecond);

void BM_trace_direct(benchmark::State& state) {
    const auto f = inverse_factors(TridiagSpec::make(state.range(0), 1, 3.0, 2.0));
    const Exec exec = arg_exec(state);
    for (auto _ : state) {
        double tr = kernels::trace_direct(f, exec);
        benchmark::DoNotOptimize(tr);
    }
    label_exec(state);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_trace_direct)->Args({1 << 20, 0})->Args({1 << 20, 1});

void BM_trace_sq_direct(benchmark::State& state) {
    const auto f = inverse_factors(TridiagSpec::make(state.range(0), 1, 3.0, 2.0));
    const Exec exec = arg_exec(state);
    for (auto _ : state) {
        double tr = kernels::trace_sq_direct(f, exec);
        benchmark::DoNotOptimize(tr);
    }
    label_exec(state);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_trace_sq_direct)->Args({1 << 20, 0})->Args({1 << 20, 1});

// closed forms have no parallel variant; this is the O(1)-ish baseline the
// direct kernels are measured against
void BM_trace_closed(benchmark::State& state) {
    const TridiagSpec s = TridiagSpec::make(state.range(0), 1, 3.0, 2.0);
    for (auto _ : state) {
        double tr = analytics::trace_inverse(s);
        double t2 = analytics::trace_inverse_squared(s);
        benchmark::DoNotOptimize(tr);
        benchmark::DoNotOptimize(t2);
    }
}
BENCHMARK(BM_trace_closed)->Arg(1 << 20)->Arg(1000000);

void BM_mc_mean_a_opt(benchmark::State& state) {
    const auto cfg = ar1::AR1Config::from_gamma(0.95, 0.2, 0.1, 3.0, 200);
    const Exec exec = arg_exec(state);
    for (auto _ : state) {
        auto mc = ar1::mc_mean_a_opt(cfg, state.range(0), 7, exec);
        benchmark::DoNotOptimize(mc.mean);
    }
    label_exec(state);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_mc_mean_a_opt)->Args({256, 0})->Args({256, 1})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
