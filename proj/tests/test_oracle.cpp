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
#include <numeric>
#include <vector>

#include "doctest.h"
#include "gmsim/chimera.hpp"
#include "gmsim/errors.hpp"
#include "gmsim/oracle.hpp"

using namespace gmsim;

namespace {

DisorderInstance custom_instance(int n, std::vector<Edge> edges, std::vector<double> couplings) {
    DisorderInstance inst;
    inst.graph.pattern = "custom";
    inst.graph.n_sites = n;
    inst.graph.edges = std::move(edges);
    inst.couplings = std::move(couplings);
    inst.id = "custom";
    return inst;
}

}  // namespace

TEST_CASE("single spin mean matches the closed form") {
    for (double c : {-0.7, -0.1, 0.0, 0.3, 1.2}) {
        for (double gamma : {0.2, 1.0, 2.5}) {
            const double beta = 1.7;
            const double e = std::sqrt(c * c + gamma * gamma);
            const double expected = -(c / e) * std::tanh(beta * e);
            CHECK(single_spin_mean_z(c, gamma, beta) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    // at c = 0 the z magnetization vanishes by symmetry
    CHECK(single_spin_mean_z(0.0, 1.0, 3.0) == doctest::Approx(0.0));
}

TEST_CASE("two uncoupled classical spins give m2 = 1/2") {
    const DisorderInstance inst = custom_instance(2, {}, {});
    const ExactMoments em = classical_limit_moments(inst, 1.0);
    CHECK(em.m2 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(em.chi_loc[0] == doctest::Approx(1.0));
    CHECK(em.chi_loc[1] == doctest::Approx(1.0));
}

TEST_CASE("infinite temperature limit gives m2 = 1/N") {
    for (int n : {1, 2, 3, 4}) {
        const DisorderInstance inst = custom_instance(n, {}, {});
        const ExactMoments em = exact_thermal_moments(inst, 1e-9, 1.0);
        CHECK(em.m2 == doctest::Approx(1.0 / n).epsilon(1e-6));
    }
}

TEST_CASE("quantum oracle agrees with classical limit at tiny Gamma") {
    const DisorderInstance inst =
        custom_instance(3, {{0, 1}, {1, 2}}, {-0.6, -0.2});
    const double beta = 2.3;
    const ExactMoments q = exact_thermal_moments(inst, beta, 1e-6, {0.1, -0.05, 0.0});
    const ExactMoments c = classical_limit_moments(inst, beta, {0.1, -0.05, 0.0});
    CHECK(std::abs(q.m2 - c.m2) < 1e-6);
    CHECK(std::abs(q.mean_m - c.mean_m) < 1e-6);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(q.chi_loc[i] - c.chi_loc[i]) < 1e-6);
}

TEST_CASE("free spin correlator converges to the Kubo closed form") {
    // continuum limit of <m_i^2> for H = -Gamma s^x: tanh(beta Gamma)/(beta Gamma)
    for (double beta : {0.8, 2.0}) {
        for (double gamma : {0.5, 1.79}) {
            const double continuum = std::tanh(beta * gamma) / (beta * gamma);
            CHECK(std::abs(free_spin_correlator(beta, gamma, 4096) - continuum) < 1e-6);
        }
    }
}

TEST_CASE("oracle chi_loc matches the free spin limit") {
    const DisorderInstance inst = custom_instance(1, {}, {});
    const double beta = 1.4, gamma = 0.9;
    const ExactMoments em = exact_thermal_moments(inst, beta, gamma);
    CHECK(em.chi_loc[0] ==
          doctest::Approx(std::tanh(beta * gamma) / (beta * gamma)).epsilon(1e-10));
}

TEST_CASE("thermal z distribution is normalized and matches enumeration at Gamma = 0") {
    const DisorderInstance inst = custom_instance(3, {{0, 1}, {0, 2}}, {-1.0, -0.4});
    const std::vector<double> p = thermal_z_distribution(inst, 1.5, 1e-8, {0.2, 0.0, -0.1});
    REQUIRE(p.size() == 8);
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
    // classical weights: E = sum J s s + sum c s with bit set -> spin -1
    std::vector<double> w(8);
    double z = 0;
    for (int cfg = 0; cfg < 8; ++cfg) {
        double s[3];
        for (int i = 0; i < 3; ++i) s[i] = (cfg >> i) & 1 ? -1.0 : 1.0;
        const double e = -1.0 * s[0] * s[1] - 0.4 * s[0] * s[2] + 0.2 * s[0] - 0.1 * s[2];
        w[cfg] = std::exp(-1.5 * e);
        z += w[cfg];
    }
    for (int cfg = 0; cfg < 8; ++cfg) CHECK(p[cfg] == doctest::Approx(w[cfg] / z).epsilon(1e-5));
}

TEST_CASE("fourth moments obey exact inequalities") {
    const DisorderInstance inst = custom_instance(4, {{0, 1}, {2, 3}}, {-0.8, -0.6});
    const ExactMoments em = exact_thermal_moments(inst, 2.0, 0.7, {}, true);
    REQUIRE(em.m4.has_value());
    CHECK(*em.m4 >= em.m2 * em.m2 - 1e-12);  // Cauchy-Schwarz
    CHECK(*em.m4 <= em.m2 + 1e-12);          // |m| <= 1
    REQUIRE(em.mi4.has_value());
    for (int i = 0; i < 4; ++i) {
        CHECK((*em.mi4)[i] >= em.chi_loc[i] * em.chi_loc[i] - 1e-12);
        CHECK((*em.mi4)[i] <= 1.0 + 1e-12);
    }
}

TEST_CASE("oracle enforces capability limits") {
    const DisorderInstance big = custom_instance(13, {}, {});
    CHECK_THROWS_AS(exact_thermal_moments(big, 1.0, 1.0), CapabilityError);
    const DisorderInstance mid = custom_instance(6, {}, {});
    CHECK_THROWS_AS(exact_thermal_moments(mid, 1.0, 1.0, {}, true), CapabilityError);
    const DisorderInstance huge = custom_instance(21, {}, {});
    CHECK_THROWS_AS(classical_limit_moments(huge, 1.0), CapabilityError);
}

TEST_CASE("spin-flip symmetry: no fields means no magnetization") {
    const DisorderInstance inst = custom_instance(3, {{0, 1}, {1, 2}}, {-0.5, -0.9});
    const ExactMoments em = exact_thermal_moments(inst, 2.0, 1.1);
    CHECK(std::abs(em.mean_m) < 1e-10);
}
