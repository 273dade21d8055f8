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

#include "gmsim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "gmsim/analysis.hpp"
#include "gmsim/grid.hpp"
#include "gmsim/annealer.hpp"
#include "gmsim/chimera.hpp"
#include "gmsim/observables.hpp"
#include "gmsim/oracle.hpp"
#include "gmsim/qmc.hpp"
#include "gmsim/random.hpp"

namespace gmsim {

namespace {

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

CheckResult check_oracle_equivalence(bool quick) {
    CheckResult res{"oracle-equivalence", true, ""};
    const ChimeraGraph cell = build_diluted_chimera(1, DilutionSpec::default_diluted());
    const int n_instances = quick ? 2 : 5;
    const std::vector<double> betas = {2.0, 10.0};
    const std::vector<double> gammas = quick ? std::vector<double>{1.0}
                                             : std::vector<double>{0.5, 1.0, 2.0};
    const std::int64_t sweeps = quick ? (1 << 16) : (1 << 18);

    double sum_bias16 = 0, sum_bias64 = 0;
    int n_bad = 0, n_cells = 0;
    std::string first_bad;
    for (int s = 1; s <= n_instances; ++s) {
        const DisorderInstance inst = sample_disorder(cell, "qmc-six-level", s);
        for (double beta : betas) {
            for (double gamma : gammas) {
                const ExactMoments ex = exact_thermal_moments(inst, beta, gamma);
                RunParams p;
                p.beta = beta;
                p.gamma = gamma;
                p.n_sweeps = sweeps;
                p.seed = derive_seed(0xACCu, {static_cast<std::uint64_t>(s),
                                              static_cast<std::uint64_t>(beta * 16),
                                              static_cast<std::uint64_t>(gamma * 16)});
                p.M = 16;
                const MomentRecord r16 = run_chain(inst, p);
                p.M = 64;
                const MomentRecord r64 = run_chain(inst, p);

                double chi_ex = 0;
                for (double c : ex.chi_loc) chi_ex += c;
                chi_ex /= ex.chi_loc.size();
                double chi16 = 0, chi64 = 0, chi64_err = 0, chi16_err = 0;
                for (std::size_t i = 0; i < r64.mi2.size(); ++i) {
                    chi16 += r16.mi2[i];
                    chi64 += r64.mi2[i];
                    chi64_err += r64.mi2_err[i];
                    chi16_err += r16.mi2_err[i];
                }
                chi16 /= r16.mi2.size();
                chi64 /= r64.mi2.size();
                // site series share one chain, so no sqrt(N) reduction is
                // assumed for the site-averaged error
                chi64_err /= r64.mi2.size();
                chi16_err /= r16.mi2.size();

                // Trotter bias bound at M = 64 from the measured M = 16
                // deviation and the 1/M^2 scaling (conservative 1/9).
                const double d16_m2 = r16.m2 - ex.m2;
                const double d64_m2 = r64.m2 - ex.m2;
                const double d16_chi = chi16 - chi_ex;
                const double d64_chi = chi64 - chi_ex;
                sum_bias16 += std::abs(d16_m2) + std::abs(d16_chi);
                sum_bias64 += std::max(std::abs(d64_m2), r64.m2_err) +
                              std::max(std::abs(d64_chi), chi64_err);
                ++n_cells;

                const double tol_m2 =
                    3 * r64.m2_err + (std::abs(d16_m2) + 3 * r16.m2_err) / 9.0;
                const double tol_chi =
                    3 * chi64_err + (std::abs(d16_chi) + 3 * chi16_err) / 9.0;
                if (std::abs(d64_m2) > tol_m2 || std::abs(d64_chi) > tol_chi) {
                    ++n_bad;
                    if (first_bad.empty())
                        first_bad = "seed " + std::to_string(s) + " beta " + fmt(beta) +
                                    " Gamma " + fmt(gamma) + ": |d m2| " + fmt(std::abs(d64_m2)) +
                                    " vs " + fmt(tol_m2) + ", |d chi| " + fmt(std::abs(d64_chi)) +
                                    " vs " + fmt(tol_chi);
                }
            }
        }
    }
    const double shrink = sum_bias16 / std::max(sum_bias64, 1e-300);
    std::ostringstream os;
    os << n_cells - n_bad << "/" << n_cells << " cells within 3 sigma + Trotter bound; "
       << "bias shrink M16->M64 = " << fmt(shrink, 3) << "x (need >= 3"
       << (quick ? ", reported only at quick size)" : ")");
    if (n_bad > 0) os << "; first failure: " << first_bad;
    // at quick statistics the M = 64 deviation is noise-floored, so the
    // shrink ratio is only meaningful at the full sweep count
    res.pass = (n_bad == 0) && (quick || shrink >= 3.0);
    res.detail = os.str();
    return res;
}

CheckResult check_stationarity(bool quick) {
    CheckResult res{"stationarity", true, ""};
    ChimeraGraph graph;
    graph.pattern = "custom";
    graph.n_sites = 2;
    graph.edges = {{0, 1}};
    DisorderInstance inst;
    inst.graph = graph;
    inst.couplings = {-1.0};
    inst.id = "two-site";

    const int M = 4, N = 2;
    const double beta = 1.0, gamma = 0.8;
    const EffectiveCouplings k = effective_couplings(beta, gamma, M, inst);
    const SweepPlan plan = SweepPlan::build(graph);

    // exact Boltzmann weights of all 2^(N M) = 256 path configurations
    const int n_conf = 1 << (N * M);
    std::vector<double> exact(n_conf);
    double z = 0;
    PathState probe;
    probe.N = N;
    probe.M = M;
    probe.beta = beta;
    probe.spins.resize(N * M);
    for (int c = 0; c < n_conf; ++c) {
        for (int b = 0; b < N * M; ++b) probe.spins[b] = (c >> b) & 1 ? -1 : 1;
        exact[c] = std::exp(-action_value(probe, k, graph));
        z += exact[c];
    }
    for (double& w : exact) w /= z;

    const std::int64_t n_sweeps = quick ? 1000000 : 10000000;
    PathState state = init_state(inst, M, beta, 7);
    Rng rng(derive_seed(7, {0x73746174}));
    std::vector<std::int64_t> counts(n_conf, 0);
    for (std::int64_t s = 0; s < n_sweeps; ++s) {
        sweep(state, k, plan, rng);
        int c = 0;
        for (int b = 0; b < N * M; ++b)
            if (state.spins[b] == -1) c |= 1 << b;
        ++counts[c];
    }
    double tv = 0;
    for (int c = 0; c < n_conf; ++c)
        tv += std::abs(static_cast<double>(counts[c]) / n_sweeps - exact[c]);
    tv *= 0.5;
    const double limit = quick ? 0.03 : 0.01;
    res.pass = tv < limit;
    res.detail = "total variation " + fmt(tv, 3) + " after " + std::to_string(n_sweeps) +
                 " sweeps (need < " + fmt(limit, 2) + ")";
    return res;
}

CheckResult check_exponent_recovery() {
    CheckResult res{"exponent-recovery", true, ""};
    Rng rng(20260826);
    std::ostringstream os;
    bool all_ok = true;
    for (double planted : {2.0, 5.0, 12.0}) {
        for (bool nonlinear : {false, true}) {
            // Pareto tail with density exponent matching the estimator's
            // conversion: linear reads alpha = d/z', nonlinear alpha = d/3z'.
            const double alpha = nonlinear ? planted / 3.0 : planted;
            std::vector<double> samples(100000);
            for (double& s : samples) s = std::pow(1.0 - rng.uniform(), -1.0 / alpha);
            const Histogram h = build_histogram(samples, 60);
            const SlopeFit fit = fit_tail_slope(h, TailFitPolicy::qmc());
            const ExponentEstimate est =
                nonlinear ? dz_from_nonlinear_slope(fit) : dz_from_linear_slope(fit);
            const bool ok = std::abs(est.d_over_zprime - planted) <= 2.0 * est.error;
            all_ok = all_ok && ok;
            os << (nonlinear ? "nl" : "lin") << " " << fmt(planted, 3) << " -> "
               << fmt(est.d_over_zprime, 3) << "(" << fmt(est.error, 2) << ")"
               << (ok ? " ok; " : " FAIL; ");
        }
    }
    res.pass = all_ok;
    res.detail = os.str();
    return res;
}

namespace {

struct TrendPoint {
    double gamma = 0;
    double g4 = 0, g6 = 0;     // Binder ratio per size
    double dz = 0, dz_err = 0; // linear d/z' from the L = 6 chi_loc histogram
};

}  // namespace

CheckResult check_griffiths_trend() {
    CheckResult res{"griffiths-trend", true, ""};
    const std::vector<double> gammas = {1.55, 1.65, 1.75, 1.79, 1.845, 1.895, 1.95};
    const double beta = 20.0;
    const int n_instances = 50;
    const std::int64_t sweeps = 1 << 17;

    std::vector<TrendPoint> points(gammas.size());
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) points[gi].gamma = gammas[gi];

    // the sweep takes hours; checkpoint each (instance, beta, Gamma) cell so
    // an interrupted or repeated run resumes instead of recomputing
    const char* cache_env = std::getenv("GMSIM_VERIFY_CACHE");
    const std::string cache = cache_env ? cache_env : "/tmp/gmsim-verify-cache";

    for (int L : {4, 6}) {
        const ChimeraGraph graph = build_diluted_chimera(L, DilutionSpec::default_diluted());
        GridSpec spec;
        for (int s = 0; s < n_instances; ++s)
            spec.instances.push_back(sample_disorder(graph, "qmc-six-level", 1000 + s));
        spec.betas = {beta};
        spec.gammas = gammas;
        spec.M = 64;
        spec.n_sweeps = sweeps;
        spec.master_seed = 0x4746ULL + static_cast<std::uint64_t>(L);
        spec.checkpoint_dir = cache + "/L" + std::to_string(L);
        const GridResult grid = run_grid(spec);
        if (!grid.failures.empty()) {
            res.pass = false;
            res.detail = "grid failures: " + grid.failures.front();
            return res;
        }
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            std::vector<MomentRecord> records;
            std::vector<double> chi_pool;
            for (const MomentRecord& r : grid.records) {
                if (std::abs(r.gamma - gammas[gi]) > 1e-12) continue;
                records.push_back(r);
                if (L == 6)
                    for (double v : r.mi2) chi_pool.push_back(v);
            }
            const BinderEstimate binder = binder_ratio(records);
            (L == 4 ? points[gi].g4 : points[gi].g6) = binder.g.value;
            if (L == 6) {
                const Histogram h = build_histogram(chi_pool, 40);
                const SlopeFit fit = fit_tail_slope(h, TailFitPolicy::qmc());
                const ExponentEstimate est = dz_from_linear_slope(fit);
                points[gi].dz = est.d_over_zprime;
                points[gi].dz_err = est.error;
            }
        }
    }

    // (a) Binder crossing: sign change of g4 - g6 inside the window
    bool crossing = false;
    double cross_at = 0;
    for (std::size_t gi = 1; gi < points.size(); ++gi) {
        const double d0 = points[gi - 1].g4 - points[gi - 1].g6;
        const double d1 = points[gi].g4 - points[gi].g6;
        if (d0 * d1 <= 0) {
            crossing = true;
            cross_at = 0.5 * (points[gi - 1].gamma + points[gi].gamma);
            break;
        }
    }

    // (b) d/z' non-increasing (within 1 combined sigma) as Gamma decreases
    // from 1.95 toward the crossing region; checked over Gamma >= 1.70
    bool monotone = true;
    for (std::size_t gi = 2; gi + 1 < points.size(); ++gi) {
        if (points[gi].gamma < 1.70) continue;
        const double slack = combined(points[gi].dz_err, points[gi + 1].dz_err);
        if (points[gi].dz > points[gi + 1].dz + slack) monotone = false;
    }

    // (c) estimate at 1.79 at least 3 combined sigma below the one at 1.895
    const TrendPoint* p179 = nullptr;
    const TrendPoint* p1895 = nullptr;
    for (const auto& p : points) {
        if (std::abs(p.gamma - 1.79) < 1e-9) p179 = &p;
        if (std::abs(p.gamma - 1.895) < 1e-9) p1895 = &p;
    }
    const double sep_sigma =
        (p1895->dz - p179->dz) / combined(p179->dz_err, p1895->dz_err);
    const bool separated = sep_sigma >= 3.0;

    std::ostringstream os;
    os << "crossing " << (crossing ? "at Gamma ~ " + fmt(cross_at, 3) : "NOT FOUND")
       << "; d/z' trend " << (monotone ? "non-increasing" : "NOT monotone") << " [";
    for (const auto& p : points)
        os << fmt(p.gamma, 4) << ":" << fmt(p.dz, 3) << "(" << fmt(p.dz_err, 2) << ") ";
    os << "]; separation 1.79 vs 1.895 = " << fmt(sep_sigma, 3) << " sigma (need >= 3)";
    res.pass = crossing && monotone && separated;
    res.detail = os.str();
    return res;
}

CheckResult check_collapse_recovery() {
    CheckResult res{"collapse-recovery", true, ""};
    // synthetic Binder-like curves with planted x_c = 1.75, nu = 1.4
    const double x_c = 1.75, nu = 1.4;
    Rng rng(31337);
    std::vector<CollapseCurve> curves;
    for (int L : {4, 6, 8, 12}) {
        CollapseCurve c;
        c.L = L;
        for (double g = 1.5; g <= 2.001; g += 0.025) {
            const double x = std::pow(L, 1.0 / nu) * (g - x_c);
            const double noise = 0.01;
            // smooth monotone master curve
            const double y = 1.0 / (1.0 + std::exp(x)) +
                             noise * std::sqrt(-2.0 * std::log(rng.uniform())) *
                                 std::cos(6.283185307179586 * rng.uniform());
            c.x.push_back(g);
            c.y.push_back(y);
            c.err.push_back(noise);
        }
        curves.push_back(std::move(c));
    }
    CollapseSearchBox box;
    box.x_c_lo = 1.6;
    box.x_c_hi = 1.9;
    box.nu_lo = 0.7;
    box.nu_hi = 2.5;
    const ScalingFit fit = optimize_collapse(curves, box);
    // quoted-error floors at the headline uncertainties 1.75(4), 1.4(2)
    const bool xc_ok = std::abs(fit.x_c - x_c) <= std::max(fit.x_c_error, 0.04);
    const bool nu_ok = std::abs(fit.nu - nu) <= std::max(fit.nu_error, 0.2);

    // planted z = 1 Binder surface: g = G(beta / L^z)
    std::vector<BinderPoint> zpoints;
    for (int L : {4, 8, 16}) {
        for (double lb = -1.0; lb <= 3.001; lb += 0.5) {
            const double beta = std::pow(L, 1.0) * std::exp(lb);
            const double x = std::log(beta / L);
            zpoints.push_back({L, beta, std::exp(-0.25 * x * x - 0.3)});
        }
    }
    std::vector<double> z_grid;
    for (double zv = 0.6; zv <= 1.41; zv += 0.2) z_grid.push_back(zv);
    const DynamicalZScan scan = scan_dynamical_z(zpoints, z_grid);
    const bool z_ok = std::abs(scan.z_star - 1.0) <= 0.2 + 1e-9;

    res.pass = xc_ok && nu_ok && z_ok;
    res.detail = "x_c " + fmt(fit.x_c, 4) + "(" + fmt(fit.x_c_error, 2) + ") nu " +
                 fmt(fit.nu, 3) + "(" + fmt(fit.nu_error, 2) + ") vs planted 1.75/1.4; z* " +
                 fmt(scan.z_star, 3) + " vs planted 1.0 +- one grid step";
    return res;
}

CheckResult check_schedule_mapping() {
    CheckResult res{"schedule-mapping", true, ""};
    const Schedule sched = Schedule::dwave_like();
    const BetaGamma bg = map_s_to_beta_gamma(sched, 0.386, 12.0);
    res.pass = std::abs(bg.beta - 2.49) <= 0.01 && std::abs(bg.gamma - 1.37) <= 0.01;
    res.detail = "s* = 0.386, T = 12 mK -> beta " + fmt(bg.beta, 5) + " (want 2.49 +- 0.01), Gamma " +
                 fmt(bg.gamma, 5) + " (want 1.37 +- 0.01)";
    return res;
}

CheckResult check_calibration_efficacy() {
    CheckResult res{"calibration-efficacy", true, ""};
    // zero-coupling biased device at a late pause point, where the thermal
    // response is steep enough for +-0.05 biases to show up clearly
    const ChimeraGraph graph = build_diluted_chimera(3, DilutionSpec::default_diluted());
    DisorderInstance inst;
    inst.graph = graph;
    inst.couplings.assign(graph.edges.size(), 0.0);
    inst.id = "zero-coupling";
    DeviceModel dev = DeviceModel::make(inst, 99, 0.05, 0.0);
    dev.T_phys_mK = 8.0;
    const Schedule sched = Schedule::dwave_like();
    const int n = dev.num_sites();

    auto site_means_100_runs = [&](const DeviceModel& d) {
        const ProtocolParams prot = ProtocolParams::standard(0.95, 100);
        std::vector<double> mean(n, 0.0);
        for (int run = 0; run < 100; ++run) {
            const auto samples = sample_apq(d, sched, prot, {}, DeviceBackend::Auto, 1000 + run);
            const DeviceMoments mom = magnetization_moments(samples);
            for (int i = 0; i < n; ++i) mean[i] += mom.site_mean[i];
        }
        for (double& v : mean) v /= 100.0;
        return mean;
    };

    const std::vector<double> before = site_means_100_runs(dev);
    int n_broken = 0;
    for (double v : before)
        if (std::abs(v) > 0.1) ++n_broken;
    const double broken_frac = static_cast<double>(n_broken) / n;

    const ProtocolParams cal_prot = ProtocolParams::standard(0.95, 2000);
    const CalibrationResult cal = calibrate_flux_bias(dev, sched, cal_prot, 0.05, -0.05, 20);
    dev.flux_corrections = cal.flux;
    const std::vector<double> after = site_means_100_runs(dev);
    double worst = 0;
    for (double v : after) worst = std::max(worst, std::abs(v));

    res.pass = broken_frac >= 0.25 && worst < 0.05;
    res.detail = "before: " + fmt(100.0 * broken_frac, 3) + "% of qubits with |<s_i>| > 0.1 " +
                 "(need >= 25%); after 20 bisection rounds: max |<s_i>| = " + fmt(worst, 3) +
                 " over 100 runs (need < 0.05)";
    return res;
}

CheckResult check_device_pipeline(bool quick) {
    CheckResult res{"device-pipeline", true, ""};
    const Schedule sched = Schedule::dwave_like();

    // (i) oracle-backed field sweep vs fluctuation-dissipation on N = 8
    const ChimeraGraph cell = build_diluted_chimera(1, DilutionSpec::default_diluted());
    const DisorderInstance inst = sample_disorder(cell, "dwave-six-level", 4);
    DeviceModel dev;
    dev.instance = inst;
    dev.biases.assign(8, 0.0);
    dev.flux_corrections.assign(8, 0.0);
    dev.seed = 11;
    const double s_star = 0.386;
    const ProtocolParams prot = ProtocolParams::standard(s_star, quick ? 20000 : 100000);
    std::vector<double> h_grid;
    for (double h : {-0.12, -0.09, -0.06, -0.03, 0.03, 0.06, 0.09, 0.12}) h_grid.push_back(h);
    const FieldSweepResult sweep =
        field_sweep_susceptibility(dev, sched, prot, h_grid, DeviceBackend::Oracle);
    const BetaGamma bg = map_s_to_beta_gamma(sched, s_star, dev.T_phys_mK);
    const ExactMoments ex = exact_thermal_moments(inst, bg.beta, bg.gamma);
    const double chi_fd = bg.beta * 8 * ex.m2;  // d<m>/dh = beta N <m^2>_tau-avg
    const double rel = std::abs(sweep.chi - chi_fd) / chi_fd;

    // (ii) peak-position extrapolation over small sizes. The scanned
    // quantity is the connected susceptibility beta N (<m^2> - <|m|>^2),
    // which peaks between the disordered side (finite fluctuations) and the
    // ordered side (|m| saturates, fluctuations die).
    std::vector<double> s_scan;
    for (double s = 0.30; s <= 0.581; s += 0.04) s_scan.push_back(s);
    std::vector<PointWithError> peak_points;
    std::ostringstream peaks;
    for (int L : {2, 3, 4}) {
        const ChimeraGraph g = build_diluted_chimera(L, DilutionSpec::default_diluted());
        const DisorderInstance gi = sample_disorder(g, "dwave-six-level", 40 + L);
        DeviceModel d;
        d.instance = gi;
        d.biases.assign(g.num_sites(), 0.0);
        d.flux_corrections.assign(g.num_sites(), 0.0);
        d.seed = 60 + L;
        std::vector<double> chis;
        for (double s : s_scan) {
            const ProtocolParams ps = ProtocolParams::standard(s, quick ? 200 : 400);
            const auto samples = sample_apq(d, sched, ps, {}, DeviceBackend::Qmc);
            const DeviceMoments mom = magnetization_moments(samples);
            const BetaGamma bgs = map_s_to_beta_gamma(sched, s, d.T_phys_mK);
            chis.push_back(bgs.beta * g.num_sites() * (mom.m2 - mom.m_abs * mom.m_abs));
        }
        // quadratic refinement around the grid maximum
        std::size_t k = std::max_element(chis.begin(), chis.end()) - chis.begin();
        double s_peak = s_scan[k];
        if (k > 0 && k + 1 < chis.size()) {
            const double denom = chis[k - 1] - 2 * chis[k] + chis[k + 1];
            if (denom < 0)
                s_peak += 0.5 * (s_scan[1] - s_scan[0]) * (chis[k - 1] - chis[k + 1]) / denom;
        }
        s_peak = std::clamp(s_peak, s_scan.front(), s_scan.back());
        peak_points.push_back({1.0 / L, s_peak, 0.5 * (s_scan[1] - s_scan[0])});
        peaks << "L" << L << ":" << fmt(s_peak, 3) << " ";
    }
    const LinearFit extrap = linear_extrapolate(peak_points);
    const bool sc_ok = extrap.intercept >= s_scan.front() && extrap.intercept <= s_scan.back() &&
                       extrap.intercept_error > 0 && std::isfinite(extrap.intercept_error);

    res.pass = rel <= 0.05 && sc_ok;
    res.detail = "field-sweep chi " + fmt(sweep.chi, 4) + " vs FD " + fmt(chi_fd, 4) +
                 " (rel dev " + fmt(100 * rel, 2) + "%, need <= 5%); peaks " + peaks.str() +
                 "-> s_c = " + fmt(extrap.intercept, 4) + " +- " + fmt(extrap.intercept_error, 2) +
                 (sc_ok ? " inside scan window" : " OUTSIDE scan window");
    return res;
}

std::vector<CheckResult> quick_battery() {
    return {check_oracle_equivalence(true), check_stationarity(true),  check_exponent_recovery(),
            check_collapse_recovery(),      check_schedule_mapping(),  check_calibration_efficacy(),
            check_device_pipeline(true)};
}

std::vector<CheckResult> full_battery() {
    return {check_oracle_equivalence(false),   check_stationarity(false),
            check_exponent_recovery(),         check_griffiths_trend(),
            check_collapse_recovery(),         check_schedule_mapping(),
            check_calibration_efficacy(),      check_device_pipeline(false)};
}

}  // namespace gmsim
