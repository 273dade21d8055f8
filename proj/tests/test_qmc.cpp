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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "gmsim/chimera.hpp"
#include "gmsim/errors.hpp"
#include "gmsim/oracle.hpp"
#include "gmsim/qmc.hpp"
#include "gmsim/random.hpp"

using namespace gmsim;

namespace {

DisorderInstance free_sites(int n) {
    DisorderInstance inst;
    inst.graph.pattern = "custom";
    inst.graph.n_sites = n;
    inst.id = "free";
    return inst;
}

DisorderInstance pair_instance(double j) {
    DisorderInstance inst;
    inst.graph.pattern = "custom";
    inst.graph.n_sites = 2;
    inst.graph.edges = {{0, 1}};
    inst.couplings = {j};
    inst.id = "pair";
    return inst;
}

}  // namespace

TEST_CASE("effective couplings match closed forms") {
    const DisorderInstance inst = pair_instance(-1.0);
    const EffectiveCouplings k = effective_couplings(50.0, 1.79, 150, inst);
    // (1/2) ln coth(beta Gamma / M) at beta=50, Gamma=1.79, M=150
    CHECK(std::abs(k.k_trotter - 0.313050) < 1e-4);
    CHECK(k.k_spatial[0] == doctest::Approx(-1.0 / 3.0));
    CHECK(k.k_trotter == doctest::Approx(0.5 * std::log(1.0 / std::tanh(50.0 * 1.79 / 150.0))));
    CHECK(k.k_field.empty());

    const EffectiveCouplings kf = effective_couplings(2.0, 1.0, 8, inst, {0.25, -0.5});
    CHECK(kf.k_field[0] == doctest::Approx(2.0 * 0.25 / 8));
    CHECK(kf.k_field[1] == doctest::Approx(2.0 * -0.5 / 8));
}

TEST_CASE("effective couplings validate inputs") {
    const DisorderInstance inst = pair_instance(-1.0);
    CHECK_THROWS_AS(effective_couplings(-1.0, 1.0, 8, inst), ValidationError);
    CHECK_THROWS_AS(effective_couplings(1.0, 0.0, 8, inst), ValidationError);
    CHECK_THROWS_AS(effective_couplings(1.0, 1.0, 7, inst), ValidationError);  // M must be even
}

TEST_CASE("action changes match local fields under single flips") {
    const ChimeraGraph g = build_diluted_chimera(1, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 3);
    const EffectiveCouplings k = effective_couplings(2.0, 1.2, 8, inst, {});
    PathState st = init_state(inst, 8, 2.0, 17);
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int t = int(rng.below(8));
        const int i = int(rng.below(std::uint64_t(st.N)));
        const double a0 = action_value(st, k, inst.graph);
        st.at(t, i) = -st.at(t, i);
        const double a1 = action_value(st, k, inst.graph);
        st.at(t, i) = -st.at(t, i);
        // flipping twice restores the action exactly
        CHECK(action_value(st, k, inst.graph) == doctest::Approx(a0).epsilon(1e-12));
        CHECK(std::isfinite(a1));
    }
}

TEST_CASE("sweep preserves spin values and counts acceptances") {
    const ChimeraGraph g = build_diluted_chimera(2, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 1);
    const EffectiveCouplings k = effective_couplings(1.0, 1.0, 16, inst);
    const SweepPlan plan = SweepPlan::build(inst.graph);
    PathState st = init_state(inst, 16, 1.0, 9);
    Rng rng(2);
    const std::int64_t acc = sweep(st, k, plan, rng);
    CHECK(acc > 0);
    CHECK(acc <= std::int64_t(16) * inst.num_sites());
    for (auto s : st.spins) CHECK((s == 1 || s == -1));
}

TEST_CASE("two-coloring flips across every edge") {
    for (int L : {1, 2, 3}) {
        const ChimeraGraph g = build_diluted_chimera(L, DilutionSpec::none());
        const SweepPlan plan = SweepPlan::build(g);
        for (const Edge& e : g.edges) CHECK(plan.color[e.first] != plan.color[e.second]);
    }
}

TEST_CASE("free spin matches the finite-M transfer matrix") {
    // one uncoupled site: chain <m_i^2> must agree with the exact 2x2
    // transfer-matrix value at the same M
    const DisorderInstance inst = free_sites(1);
    RunParams p;
    p.beta = 2.0;
    p.gamma = 0.9;
    p.M = 8;
    p.n_sweeps = 1 << 16;
    p.measure_interval = 2;
    p.seed = 31;
    const MomentRecord rec = run_chain(inst, p);
    const double exact = free_spin_correlator(2.0, 0.9, 8);
    CHECK(std::abs(rec.mi2[0] - exact) < 4 * rec.mi2_err[0] + 1e-3);
}

TEST_CASE("Trotter error decreases monotonically") {
    const double beta = 2.0, gamma = 1.3;
    const double continuum = std::tanh(beta * gamma) / (beta * gamma);
    double prev = 1e9;
    for (int M : {8, 16, 32, 64}) {
        const double err = std::abs(free_spin_correlator(beta, gamma, M) - continuum);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("chain moments satisfy the moment inequalities") {
    const ChimeraGraph g = build_diluted_chimera(1, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 8);
    RunParams p;
    p.beta = 4.0;
    p.gamma = 1.0;
    p.M = 16;
    p.n_sweeps = 1 << 14;
    p.seed = 12;
    const MomentRecord rec = run_chain(inst, p);
    // m^4 <= m^2 pointwise for |m| <= 1, and m4 >= m2^2 by Cauchy-Schwarz
    CHECK(rec.m4 >= rec.m2 * rec.m2 - 3 * (rec.m4_err + rec.m2_err));
    CHECK(rec.m4 <= rec.m2 + 3 * (rec.m4_err + rec.m2_err));
    CHECK(rec.m_abs <= 1.0);
    CHECK(rec.m2 >= 0.0);
    CHECK(rec.n_meas > 0);
}

TEST_CASE("runs are deterministic for a fixed seed") {
    const ChimeraGraph g = build_diluted_chimera(1, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 2);
    RunParams p;
    p.beta = 2.0;
    p.gamma = 1.5;
    p.M = 8;
    p.n_sweeps = 1 << 12;
    p.seed = 77;
    const MomentRecord a = run_chain(inst, p);
    const MomentRecord b = run_chain(inst, p);
    CHECK(a.m2 == b.m2);
    CHECK(a.m4 == b.m4);
    p.seed = 78;
    const MomentRecord c = run_chain(inst, p);
    CHECK(a.m2 != c.m2);
}

TEST_CASE("cluster updates leave the stationary distribution unchanged") {
    const DisorderInstance inst = free_sites(1);
    RunParams p;
    p.beta = 1.5;
    p.gamma = 1.0;
    p.M = 16;
    p.n_sweeps = 1 << 15;
    p.measure_interval = 2;
    p.seed = 5;
    const MomentRecord plain = run_chain(inst, p);
    p.cluster_updates = true;
    p.seed = 6;
    const MomentRecord clustered = run_chain(inst, p);
    const double tol = 4 * (plain.mi2_err[0] + clustered.mi2_err[0]) + 1e-3;
    CHECK(std::abs(plain.mi2[0] - clustered.mi2[0]) < tol);
}

TEST_CASE("blocking stderr tracks iid scaling") {
    Rng rng(1);
    std::vector<double> series(4096);
    for (double& v : series) v = rng.uniform();
    const double est = blocking_stderr(series);
    const double iid = std::sqrt(1.0 / 12.0 / series.size());
    CHECK(est == doctest::Approx(iid).epsilon(0.35));
}

TEST_CASE("run_chain_samples returns the requested count of full configurations") {
    const ChimeraGraph g = build_diluted_chimera(1, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(g, "qmc-six-level", 4);
    RunParams p;
    p.beta = 1.0;
    p.gamma = 1.0;
    p.M = 8;
    p.n_thermalize = 64;
    p.measure_interval = 4;
    p.seed = 3;
    const auto samples = run_chain_samples(inst, p, 25);
    REQUIRE(samples.size() == 25);
    for (const auto& s : samples) {
        REQUIRE(int(s.size()) == inst.num_sites());
        for (auto v : s) CHECK((v == 1 || v == -1));
    }
}
