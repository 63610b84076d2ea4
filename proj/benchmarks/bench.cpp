// Microbenchmarks for the hot paths: calibration (the root solve dominated by
// repeated improper integrals), single closed-form evaluations, and a short run
// of the six-equation simulator.

#include <benchmark/benchmark.h>

#include "lucas/calibration.hpp"
#include "lucas/closed_form.hpp"
#include "lucas/foc.hpp"

namespace {

using namespace lucas;

ModelParams reference_params() { return {0.5, 2.0, 0.04, 0.05, 0.1, 0.0, 0.0}; }

void bm_calibrate_off_path(benchmark::State& state) {
    const ModelParams p = reference_params();
    const InitialEndowment e{1.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(calibrate(p, e));
    }
}
BENCHMARK(bm_calibrate_off_path)->Unit(benchmark::kMillisecond);

void bm_z_evaluation(benchmark::State& state) {
    const ModelParams p = reference_params();
    const DerivedConstants c = derive_constants(p);
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(z_at(p, c, 2.0, t));
        t += 0.1;
        if (t > 100.0) t = 0.0;
    }
}
BENCHMARK(bm_z_evaluation);

void bm_integral_tail(benchmark::State& state) {
    const ModelParams p = reference_params();
    const DerivedConstants c = derive_constants(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(F_tail(p, c, 2.0, 50.0));
    }
}
BENCHMARK(bm_integral_tail);

void bm_labor_share_form1(benchmark::State& state) {
    const ModelParams p = reference_params();
    const SolutionPath path = assemble_solution(p, {1.0, 1.0});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            u_form1_at(p, path.constants(), path.calibration(), t, path.tolerances()));
        t += 0.5;
        if (t > 100.0) t = 0.0;
    }
}
BENCHMARK(bm_labor_share_form1)->Unit(benchmark::kMicrosecond);

void bm_simulate_foc_short(benchmark::State& state) {
    const ModelParams p = reference_params();
    const SolutionPath path = assemble_solution(p, {1.0, 1.0});
    const Calibration& cal = path.calibration();
    const StateVector start{1.0, 1.0, cal.c0, cal.u0, cal.lambda0, cal.mu0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_foc(p, path.constants(), start, 10.0));
    }
}
BENCHMARK(bm_simulate_foc_short)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
