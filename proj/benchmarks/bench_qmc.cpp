/*
   Copyright 2026 gmsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <benchmark/benchmark.h>

#include <cmath>

#include "gmsim/analysis.hpp"
#include "gmsim/chimera.hpp"
#include "gmsim/oracle.hpp"
#include "gmsim/qmc.hpp"
#include "gmsim/random.hpp"

using namespace gmsim;

static void BM_Sweep(benchmark::State& state) {
    const int L = int(state.range(0));
    const int M = int(state.range(1));
    const ChimeraGraph g = build_diluted_chimera(L, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 1);
    const EffectiveCouplings k = effective_couplings(10.0, 1.79, M, inst);
    const SweepPlan plan = SweepPlan::build(g);
    PathState st = init_state(inst, M, 10.0, 7);
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(sweep(st, k, plan, rng));
    state.SetItemsProcessed(state.iterations() * std::int64_t(g.num_sites()) * M);
}
BENCHMARK(BM_Sweep)->Args({2, 32})->Args({4, 64})->Args({6, 64});

static void BM_TrotterCluster(benchmark::State& state) {
    const int L = int(state.range(0));
    const ChimeraGraph g = build_diluted_chimera(L, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 1);
    const EffectiveCouplings k = effective_couplings(10.0, 1.79, 64, inst);
    const SweepPlan plan = SweepPlan::build(g);
    PathState st = init_state(inst, 64, 10.0, 7);
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(trotter_cluster_update(st, k, plan, rng));
    state.SetItemsProcessed(state.iterations() * std::int64_t(g.num_sites()) * 64);
}
BENCHMARK(BM_TrotterCluster)->Arg(2)->Arg(4);

static void BM_ExactMoments(benchmark::State& state) {
    DisorderInstance inst;
    inst.graph.pattern = "custom";
    inst.graph.n_sites = int(state.range(0));
    inst.id = "bench";
    for (auto _ : state)
        benchmark::DoNotOptimize(exact_thermal_moments(inst, 2.0, 1.3));
}
BENCHMARK(BM_ExactMoments)->Arg(8)->Arg(10)->Arg(12);

static void BM_Histogram(benchmark::State& state) {
    Rng rng(1);
    std::vector<double> samples(std::size_t(state.range(0)));
    for (double& x : samples) x = std::pow(1.0 - rng.uniform(), -1.0 / 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(build_histogram(samples, 60));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Histogram)->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
