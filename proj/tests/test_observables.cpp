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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gmsim/observables.hpp"
#include "gmsim/random.hpp"

using namespace gmsim;

namespace {

MomentRecord make_record(double m2, double m4) {
    MomentRecord rec;
    rec.instance_id = "synthetic";
    rec.m2 = m2;
    rec.m4 = m4;
    rec.n_meas = 1;
    return rec;
}

}  // namespace

TEST_CASE("jackknife mean reproduces the sample mean") {
    const std::vector<double> v = {1.0, 2.0, 3.0, 4.0};
    const auto [mean, err] = jackknife_mean(v);
    CHECK(mean == doctest::Approx(2.5));
    // delete-one jackknife of the mean equals the usual stderr
    CHECK(err == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)).epsilon(1e-10));
}

TEST_CASE("jackknife error is permutation invariant") {
    std::vector<double> v = {0.3, 1.9, -0.4, 2.2, 0.8, 1.1};
    const auto [m0, e0] = jackknife_mean(v);
    std::reverse(v.begin(), v.end());
    const auto [m1, e1] = jackknife_mean(v);
    CHECK(m0 == doctest::Approx(m1).epsilon(1e-14));
    CHECK(e0 == doctest::Approx(e1).epsilon(1e-14));
}

TEST_CASE("jackknife error scales as n^(-1/2)") {
    Rng rng(13);
    std::vector<double> lx, ly;
    for (int n : {25, 100, 400}) {
        std::vector<double> v(n);
        for (double& x : v) x = rng.uniform();
        lx.push_back(std::log(double(n)));
        ly.push_back(std::log(jackknife_mean(v).second));
    }
    // straight-line slope through the three (ln n, ln err) points
    const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
    double num = 0, den = 0;
    for (int i = 0; i < 3; ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    CHECK(num / den == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("bootstrap stderr agrees with jackknife for iid data") {
    Rng rng(7);
    std::vector<double> v(200);
    for (double& x : v) x = rng.uniform();
    const double jk = jackknife_mean(v).second;
    const double bs = bootstrap_mean_stderr(v, 2000, 99);
    CHECK(bs == doctest::Approx(jk).epsilon(0.2));
}

TEST_CASE("Binder ratio limits") {
    // fully ordered: m4 = m2^2 -> g = 1 for every instance
    std::vector<MomentRecord> ordered;
    for (int i = 0; i < 5; ++i) ordered.push_back(make_record(0.81, 0.81 * 0.81));
    const BinderEstimate go = binder_ratio(ordered);
    CHECK(go.g.value == doctest::Approx(1.0));
    CHECK_FALSE(go.log_defined);

    // Gaussian fluctuations: m4 = 3 m2^2 -> g = 0
    std::vector<MomentRecord> gauss;
    for (int i = 0; i < 5; ++i) gauss.push_back(make_record(0.04, 3 * 0.04 * 0.04));
    const BinderEstimate gg = binder_ratio(gauss);
    CHECK(gg.g.value == doctest::Approx(0.0));
    CHECK(gg.log_defined);
    CHECK(gg.minus_log_1mg == doctest::Approx(0.0));

    // intermediate: -ln(1 - g) matches by construction
    std::vector<MomentRecord> mid = {make_record(0.5, 0.5)};
    const BinderEstimate gm = binder_ratio(mid);
    CHECK(gm.g.value == doctest::Approx(0.5));
    CHECK(gm.minus_log_1mg == doctest::Approx(-std::log(0.5)));
}

TEST_CASE("global susceptibility is beta N m2") {
    std::vector<MomentRecord> recs = {make_record(0.2, 0.1), make_record(0.4, 0.3)};
    const EnsembleEstimate chi = global_susceptibility(recs, 2.0, 32);
    CHECK(chi.value == doctest::Approx(2.0 * 32 * 0.3));
    CHECK(chi.n_instances == 2);
}

TEST_CASE("local nonlinear susceptibility closed forms") {
    MomentRecord rec;
    rec.mi2 = {1.0, 0.04, 0.25, 1.0};
    rec.mi4 = {1.0, 3 * 0.04 * 0.04, 0.0625, 1.0};
    const auto pairs = local_susceptibilities(rec);
    REQUIRE(pairs.size() == 4);
    // frozen site m_i = +-1: chi_loc = 1, chi_nlloc = -(1 - 3) = 2
    CHECK(pairs[0].first == doctest::Approx(1.0));
    CHECK(pairs[0].second == doctest::Approx(2.0));
    // Gaussian site: chi_nlloc = 0 by the fourth-moment identity
    CHECK(pairs[1].second == doctest::Approx(0.0));
    // two-point distribution m_i in {+-a}: chi_nlloc = 2 a^4, a = 0.5
    CHECK(pairs[2].second == doctest::Approx(2 * std::pow(0.5, 4)));
    // a = 1 reduces to the frozen case
    CHECK(pairs[3].second == doctest::Approx(2.0));
}

TEST_CASE("global nonlinear susceptibility pair") {
    const MomentRecord rec = make_record(0.3, 0.1);
    const auto [chi, chi_nl] = global_nl_susceptibility(rec);
    CHECK(chi == doctest::Approx(0.3));
    CHECK(chi_nl == doctest::Approx(-(0.1 - 3 * 0.09)));
}
