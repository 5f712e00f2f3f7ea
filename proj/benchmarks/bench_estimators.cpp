// Copyright 2026 The SqueezeLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Per-scan cost of the estimators and the samplers feeding them.
// All inputs use the default geometry: 900 samples over two periods.

#include <benchmark/benchmark.h>

#include "squeezelab/bounds.hpp"
#include "squeezelab/estimators.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/simulator.hpp"

namespace {

using namespace squeezelab;

const StateParams kState = empirical_family(0.3, 0.4);

void BM_SampleScan(benchmark::State &state) {
    const ScanConfig scan{static_cast<std::size_t>(state.range(0)), 2, PhaseSampling::Equispaced};
    std::uint32_t trial = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_homodyne_scan(kState, scan, 1, trial++));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleScan)->Arg(900)->Arg(10000);

void BM_Fit(benchmark::State &state) {
    const HomodyneScan scan = sample_homodyne_scan(kState, {}, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_estimate(scan));
    }
}
BENCHMARK(BM_Fit);

void BM_MomStep(benchmark::State &state) {
    const HomodyneScan scan = sample_homodyne_scan(kState, {}, 1);
    const auto solver = state.range(0) == 0 ? MomSolver::ClosedForm : MomSolver::LinearSystem;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mom_step(scan, kState, solver));
    }
    state.SetLabel(state.range(0) == 0 ? "closed-form" : "linear-system");
}
BENCHMARK(BM_MomStep)->Arg(0)->Arg(1);

// Full iteration from the fit seed, as run in the Monte Carlo harness.
void BM_MomEstimate(benchmark::State &state) {
    const HomodyneScan scan = sample_homodyne_scan(kState, {}, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mom_estimate(scan));
    }
}
BENCHMARK(BM_MomEstimate);

void BM_Dhd(benchmark::State &state) {
    const DhdBatch batch = sample_dhd(kState, 900, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(dhd_estimate(batch));
    }
}
BENCHMARK(BM_Dhd);

void BM_TraceExtraction(benchmark::State &state) {
    const ScanConfig scan;
    const TemporalMode mode;
    const std::vector<StateParams> windows(scan.n_samples, kState);
    const RawTrace trace = synthesize_trace(windows, mode, scan, TraceGeometry{}, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scan_from_trace(trace, mode, scan));
    }
}
BENCHMARK(BM_TraceExtraction);

void BM_DiscreteFisher(benchmark::State &state) {
    const auto phases = equispaced_phases({900, 2, PhaseSampling::Equispaced});
    for (auto _ : state) {
        benchmark::DoNotOptimize(fisher_homodyne_discrete(kState, phases));
    }
}
BENCHMARK(BM_DiscreteFisher);

void BM_MomTrials(benchmark::State &state) {
    MonteCarloConfig c;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials(kState, Method::MoM, c, 100, 1));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_MomTrials)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
