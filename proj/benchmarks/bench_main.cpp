#include <benchmark/benchmark.h>

#include "ckomit/response.hpp"
#include "ckomit/stability.hpp"
#include "ckomit/steady_state.hpp"
#include "support.hpp"

using namespace ckomit;
using namespace ckomit::testing;

namespace {

SolverOptions ramp() {
    SolverOptions o;
    o.branch = BranchPolicy::power_ramp;
    return o;
}

void BM_SteadyStateMultistart(benchmark::State& state) {
    const SystemParams p = single_mode();
    for (auto _ : state) benchmark::DoNotOptimize(find_steady_states(p, {}));
}
BENCHMARK(BM_SteadyStateMultistart);

void BM_SteadyStatePowerRamp(benchmark::State& state) {
    const SystemParams p = two_mode(-1.5e6);
    for (auto _ : state) benchmark::DoNotOptimize(follow_power_ramp(p, ramp()));
}
BENCHMARK(BM_SteadyStatePowerRamp);

void BM_ClosedForm(benchmark::State& state) {
    const SystemParams p = two_mode(-1.5e6);
    const SteadyState ss = follow_power_ramp(p, ramp());
    double delta = p.mech[0].frequency;
    for (auto _ : state) {
        benchmark::DoNotOptimize(probe_amplitude_closed_form(ss, p, delta));
        delta += 1.0;
    }
}
BENCHMARK(BM_ClosedForm);

void BM_LinearSolve(benchmark::State& state) {
    const SystemParams p = two_mode(-1.5e6);
    const SteadyState ss = follow_power_ramp(p, ramp());
    double delta = p.mech[0].frequency;
    for (auto _ : state) {
        benchmark::DoNotOptimize(probe_amplitude_linear_solve(ss, p, delta));
        delta += 1.0;
    }
}
BENCHMARK(BM_LinearSolve);

void BM_Spectrum(benchmark::State& state) {
    const SystemParams p = two_mode(-1.5e6);
    const SteadyState ss = follow_power_ramp(p, ramp());
    const double wm = p.mech[0].frequency;
    const auto grid = ProbeGrid::uniform(0.9 * wm, 1.1 * wm, static_cast<std::size_t>(state.range(0)), wm);
    for (auto _ : state) benchmark::DoNotOptimize(spectrum(ss, p, grid));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Spectrum)->Arg(2001)->Arg(20001);

void BM_StabilityAndLyapunov(benchmark::State& state) {
    SystemParams p = two_mode(-1.5e6);
    p.temperature = 0.01;
    const SteadyState ss = follow_power_ramp(p, ramp());
    const Matrix6 a = drift_matrix(ss, p);
    const Matrix6 d = diffusion_matrix(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(is_stable(a));
        benchmark::DoNotOptimize(solve_lyapunov(a, d));
    }
}
BENCHMARK(BM_StabilityAndLyapunov);

} // namespace

BENCHMARK_MAIN();
