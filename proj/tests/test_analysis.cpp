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
#include "gmsim/analysis.hpp"
#include "gmsim/random.hpp"

using namespace gmsim;

namespace {

/// Pareto tail samples P(x) ~ x^(-alpha-1) on x >= 1 via inverse CDF.
std::vector<double> pareto_samples(double alpha, int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out(n);
    for (double& x : out) x = std::pow(1.0 - rng.uniform(), -1.0 / alpha);
    return out;
}

}  // namespace

TEST_CASE("histogram is normalized and excludes non-positive samples") {
    std::vector<double> samples = pareto_samples(2.0, 20000, 1);
    samples.push_back(0.0);
    samples.push_back(-3.0);
    const Histogram h = build_histogram(samples, 40);
    CHECK(h.n_excluded == 2);
    CHECK(h.n_samples == 20000);
    double total = 0;
    long count_total = 0;
    for (std::size_t k = 0; k + 1 < h.edges.size(); ++k) {
        total += h.density[k] * (h.edges[k + 1] - h.edges[k]);
        count_total += h.counts[k];
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
    CHECK(count_total == h.n_samples);
    // geometric centers sit strictly inside their bins
    for (std::size_t k = 0; k + 1 < h.edges.size(); ++k) {
        CHECK(h.center(k) > h.edges[k]);
        CHECK(h.center(k) < h.edges[k + 1]);
        CHECK(h.center(k) == doctest::Approx(std::sqrt(h.edges[k] * h.edges[k + 1])));
    }
}

TEST_CASE("tail slope recovers a planted power law") {
    const double alpha = 1.5;  // density exponent -(alpha + 1) = -2.5
    const Histogram h = build_histogram(pareto_samples(alpha, 100000, 3), 60);
    const SlopeFit fit = fit_tail_slope(h, TailFitPolicy::qmc());
    CHECK(fit.n_points >= 5);
    CHECK(std::abs(fit.slope - (-(alpha + 1))) < 3 * fit.slope_error + 0.05);
}

TEST_CASE("exponent conversions") {
    SlopeFit fit;
    fit.slope = -13.83;
    fit.slope_error = 0.15;
    const ExponentEstimate lin = dz_from_linear_slope(fit);
    CHECK(lin.d_over_zprime == doctest::Approx(12.83));
    CHECK(lin.error == doctest::Approx(0.15));
    CHECK(lin.source == "linear");

    SlopeFit nl;
    nl.slope = -5.0;
    nl.slope_error = 0.2;
    const ExponentEstimate nle = dz_from_nonlinear_slope(nl);
    CHECK(nle.d_over_zprime == doctest::Approx(3 * 4.0));
    CHECK(nle.error == doctest::Approx(3 * 0.2));
    CHECK(nle.source == "nonlinear");
}

TEST_CASE("magnetization curve fits") {
    // exactly linear data
    std::vector<std::pair<double, double>> lin;
    for (double h = -0.2; h <= 0.21; h += 0.05) lin.push_back({h, 0.3 * h});
    const SusceptibilityPair lp = fit_magnetization_curve(lin);
    CHECK(lp.chi == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(lp.chi_nl == doctest::Approx(0.0).scale(1).epsilon(1e-9));

    // m = tanh(2h) = 2h - (8/3) h^3 + O(h^5) on |h| <= 0.2. The neglected
    // h^5 term aliases into the cubic coefficient of a degree-3 fit, so the
    // degree-3 bound is loose while the degree-5 fit is tight.
    std::vector<std::pair<double, double>> th;
    for (double h = -0.2; h <= 0.201; h += 0.02) th.push_back({h, std::tanh(2 * h)});
    const SusceptibilityPair tp3 = fit_magnetization_curve(th, 3);
    CHECK(tp3.chi == doctest::Approx(2.0).epsilon(0.05));
    CHECK(tp3.chi_nl == doctest::Approx(8.0 / 3.0).epsilon(0.10));
    const SusceptibilityPair tp5 = fit_magnetization_curve(th, 5);
    CHECK(tp5.chi == doctest::Approx(2.0).epsilon(0.01));
    CHECK(tp5.chi_nl == doctest::Approx(8.0 / 3.0).epsilon(0.02));
}

TEST_CASE("collapse quality is invariant under common error rescaling of the optimum") {
    // synthetic curves living on a shared master curve
    std::vector<CollapseCurve> curves;
    const double x_c = 1.7, nu = 1.3;
    Rng rng(5);
    for (int L : {4, 8, 16}) {
        CollapseCurve c;
        c.L = L;
        for (double x = 1.5; x <= 1.9; x += 0.02) {
            const double u = std::pow(double(L), 1.0 / nu) * (x - x_c);
            c.x.push_back(x);
            c.y.push_back(std::tanh(u));
            c.err.push_back(0.01);
        }
        curves.push_back(c);
    }
    const CollapseSpec good{x_c, nu, 0.0};
    const CollapseSpec bad{x_c + 0.1, nu, 0.0};
    const double s_good = collapse_quality(curves, good);
    const double s_bad = collapse_quality(curves, bad);
    CHECK(s_good < s_bad);

    // multiplying every error by a constant rescales S by the inverse
    // square, so the argmin (ordering) is unchanged
    std::vector<CollapseCurve> scaled = curves;
    for (auto& c : scaled)
        for (auto& e : c.err) e *= 3.0;
    CHECK(collapse_quality(scaled, good) < collapse_quality(scaled, bad));
    CHECK(collapse_quality(scaled, good) == doctest::Approx(s_good / 9.0).epsilon(1e-6));
}

TEST_CASE("collapse optimization recovers planted parameters") {
    std::vector<CollapseCurve> curves;
    const double x_c = 1.75, nu = 1.4;
    Rng rng(11);
    for (int L : {4, 6, 8, 12}) {
        CollapseCurve c;
        c.L = L;
        for (double x = 1.5; x <= 2.0; x += 0.025) {
            const double u = std::pow(double(L), 1.0 / nu) * (x - x_c);
            // mild deterministic noise via Box-Muller
            const double g =
                std::sqrt(-2 * std::log(1 - rng.uniform())) * std::cos(6.2831853 * rng.uniform());
            c.x.push_back(x);
            c.y.push_back(1.0 / (1.0 + std::exp(-u)) + 0.005 * g);
            c.err.push_back(0.005);
        }
        curves.push_back(c);
    }
    CollapseSearchBox box;
    box.x_c_lo = 1.6;
    box.x_c_hi = 1.9;
    box.nu_lo = 0.7;
    box.nu_hi = 2.5;
    const ScalingFit fit = optimize_collapse(curves, box);
    CHECK(fit.converged);
    CHECK(std::abs(fit.x_c - x_c) < std::max(3 * fit.x_c_error, 0.03));
    CHECK(std::abs(fit.nu - nu) < std::max(3 * fit.nu_error, 0.2));
    CHECK(fit.x_c_error > 0);
    CHECK(fit.nu_error > 0);
}

TEST_CASE("linear extrapolation") {
    // exact straight line y = 2 - 3x
    std::vector<PointWithError> pts;
    for (double x : {0.1, 0.2, 0.3, 0.5}) pts.push_back({x, 2 - 3 * x, 0.01});
    const LinearFit fit = linear_extrapolate(pts);
    CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(fit.slope == doctest::Approx(-3.0).epsilon(1e-9));

    // constant data: the intercept reduces to the weighted mean
    std::vector<PointWithError> flat = {{0.1, 5.0, 0.1}, {0.2, 5.0, 0.1}, {0.4, 5.0, 0.1}};
    const LinearFit ffit = linear_extrapolate(flat);
    CHECK(ffit.intercept == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(ffit.slope == doctest::Approx(0.0).scale(1).epsilon(1e-9));
}

TEST_CASE("dynamical exponent scan recovers a planted z") {
    const double z = 1.0;
    std::vector<BinderPoint> points;
    for (int L : {4, 8, 16}) {
        for (double beta : {2.0, 4.0, 8.0, 16.0, 32.0}) {
            // g depends only on beta / L^z, peaked at ln(beta/L^z) = 0
            const double u = std::log(beta / std::pow(double(L), z));
            points.push_back({L, beta, 0.8 * std::exp(-0.1 * u * u)});
        }
    }
    std::vector<double> grid;
    for (double zz = 0.6; zz <= 1.41; zz += 0.1) grid.push_back(zz);
    const DynamicalZScan scan = scan_dynamical_z(points, grid);
    CHECK_FALSE(scan.coarse_grid);
    CHECK(std::abs(scan.z_star - z) < 0.15);

    // fewer than 5 grid values raises the coarse-grid warning flag
    const DynamicalZScan coarse = scan_dynamical_z(points, {0.8, 1.0, 1.2});
    CHECK(coarse.coarse_grid);
}
