// Serial reference vs OpenMP kernels on a Polblogs-sized graph.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "edgepp/forward.hpp"
#include "edgepp/schedule.hpp"
#include "edgepp/stats.hpp"
#include "edgepp/synthetic.hpp"

namespace {

using namespace edgepp;

const Graph& graph() {
    static const Graph g = polblogs_scale_standin(42);
    return g;
}

const NoiseSchedule& schedule() {
    static const NoiseSchedule s = baseline_linear_schedule(128, 1e-4, 0.05);
    return s;
}

template <auto Fn>
void run_stat(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(Fn(graph()));
}

void BM_forward_serial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_forward_moments_serial(graph(), schedule(), 16, 1));
}

void BM_forward_parallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(simulate_forward_moments(graph(), schedule(), 16, 1));
}

}  // namespace

BENCHMARK(run_stat<triangle_count_serial>)->Name("triangles/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(run_stat<triangle_count>)->Name("triangles/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(run_stat<square_count_serial>)->Name("squares/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(run_stat<square_count>)->Name("squares/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(run_stat<path_totals_serial>)->Name("paths/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(run_stat<path_totals>)->Name("paths/parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forward_serial)->Name("forward/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_forward_parallel)->Name("forward/parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
