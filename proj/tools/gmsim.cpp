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

// gmsim: pipeline driver. Subcommands: generate (instance files), run
// (record logs, resumable), calibrate (device state), analyze <recipe>
// (CSV outputs), verify <quick|full> (reference battery), report (run
// summary). Exit codes: 0 success, 2 validation error, 3 partial failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gmsim/analysis.hpp"
#include "gmsim/annealer.hpp"
#include "gmsim/chimera.hpp"
#include "gmsim/config.hpp"
#include "gmsim/errors.hpp"
#include "gmsim/grid.hpp"
#include "gmsim/observables.hpp"
#include "gmsim/qmc.hpp"
#include "gmsim/random.hpp"
#include "gmsim/record_io.hpp"
#include "gmsim/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonOpts {
    std::string config_path;
    std::string out_override;
    int workers = 1;
    std::optional<std::uint64_t> seed_override;
    bool resume = false;
};

gmsim::ExperimentConfig load_config(CommonOpts& opts) {
    if (opts.config_path.empty()) throw gmsim::ValidationError("--config is required");
    gmsim::ExperimentConfig cfg = gmsim::ExperimentConfig::from_toml_file(opts.config_path);
    if (!opts.out_override.empty()) cfg.out_dir = opts.out_override;
    if (opts.seed_override) {
        cfg.master_seed = *opts.seed_override;
        cfg.seed_set = true;
    }
    cfg.validate();
    return cfg;
}

std::vector<gmsim::DisorderInstance> make_instances(const gmsim::ExperimentConfig& cfg) {
    const gmsim::DilutionSpec spec = cfg.pattern == "full"
                                         ? gmsim::DilutionSpec::none()
                                         : gmsim::DilutionSpec::default_diluted();
    const gmsim::ChimeraGraph graph = gmsim::build_diluted_chimera(cfg.L, spec);
    std::vector<gmsim::DisorderInstance> out;
    out.reserve(cfg.n_instances);
    for (int i = 0; i < cfg.n_instances; ++i) {
        const std::uint64_t seed =
            gmsim::derive_seed(cfg.master_seed, {0x696e7374ULL, static_cast<std::uint64_t>(i)});
        out.push_back(gmsim::sample_disorder(graph, cfg.distribution_id, seed));
    }
    return out;
}

void write_manifest(const gmsim::ExperimentConfig& cfg, const std::string& step,
                    const std::vector<std::string>& failures) {
    ordered_json j;
    j["tool"] = "gmsim";
    j["version"] = kVersion;
    j["step"] = step;
    j["config_digest"] = cfg.digest_hex();
    j["mode"] = cfg.mode;
    j["failures"] = failures;
    std::ofstream out(fs::path(cfg.out_dir) / ("manifest_" + step + ".json"));
    out << j.dump(2) << '\n';
}

int cmd_generate(CommonOpts& opts) {
    const gmsim::ExperimentConfig cfg = load_config(opts);
    const fs::path dir = fs::path(cfg.out_dir) / "instances";
    fs::create_directories(dir);
    const auto instances = make_instances(cfg);
    for (const auto& inst : instances)
        gmsim::write_instance_file(inst, (dir / (inst.id + ".json")).string());
    write_manifest(cfg, "generate", {});
    std::cout << "wrote " << instances.size() << " instance files to " << dir.string() << "\n";
    return 0;
}

int run_qmc(const gmsim::ExperimentConfig& cfg, const CommonOpts& opts) {
    gmsim::GridSpec spec;
    spec.instances = make_instances(cfg);
    spec.betas = cfg.betas;
    spec.gammas = cfg.gammas;
    spec.M = cfg.M;
    spec.n_sweeps = cfg.n_sweeps;
    spec.n_thermalize = cfg.n_thermalize;
    spec.measure_interval = cfg.measure_interval;
    spec.master_seed = cfg.master_seed;
    spec.cluster_updates = cfg.cluster_updates;
    spec.workers = opts.workers;
    const fs::path ckpt = fs::path(cfg.out_dir) / "checkpoints";
    if (!opts.resume && fs::exists(ckpt)) fs::remove_all(ckpt);
    fs::create_directories(ckpt);
    spec.checkpoint_dir = ckpt.string();

    const gmsim::GridResult result = gmsim::run_grid(spec);
    gmsim::write_records_ndjson(result.records, (fs::path(cfg.out_dir) / "records.ndjson").string());
    write_manifest(cfg, "run", result.failures);
    std::cout << result.records.size() << " records (" << result.n_resumed << " resumed), "
              << result.failures.size() << " failed cells\n";
    return result.failures.empty() ? 0 : 3;
}

int run_device(const gmsim::ExperimentConfig& cfg, const CommonOpts&) {
    const gmsim::Schedule sched = gmsim::Schedule::dwave_like();
    const auto instances = make_instances(cfg);
    std::vector<std::string> failures;
    std::ofstream records(fs::path(cfg.out_dir) / "records.ndjson");
    std::ofstream sweeps(fs::path(cfg.out_dir) / "sweeps.ndjson");
    for (const auto& inst : instances) {
        gmsim::DeviceModel dev = gmsim::DeviceModel::make(
            inst, gmsim::derive_seed(cfg.master_seed, {0x646576ULL, inst.seed}),
            cfg.bias_magnitude, cfg.q);
        dev.T_phys_mK = cfg.T_phys_mK;
        for (double s_star : cfg.s_stars) {
            try {
                const auto prot = gmsim::ProtocolParams::standard(s_star, cfg.n_rep);
                const auto bg = gmsim::map_s_to_beta_gamma(sched, s_star, dev.T_phys_mK);
                const auto samples = gmsim::sample_apq(dev, sched, prot);
                const auto mom = gmsim::magnetization_moments(samples);
                ordered_json j = ordered_json::parse(
                    gmsim::record_to_json(mom.to_record(inst.id, bg.beta, bg.gamma)));
                j["s_star"] = s_star;
                j["t1_us"] = prot.t1_us;
                j["pause_us"] = prot.pause_us;
                j["quench_us"] = prot.quench_us;
                records << j.dump() << '\n';
                if (!cfg.h_grid.empty()) {
                    const auto fsr =
                        gmsim::field_sweep_susceptibility(dev, sched, prot, cfg.h_grid);
                    ordered_json sj;
                    sj["instance"] = inst.id;
                    sj["s_star"] = s_star;
                    sj["beta"] = bg.beta;
                    sj["gamma"] = bg.gamma;
                    sj["chi"] = fsr.chi;
                    sj["chi_nl"] = fsr.chi_nl;
                    sj["saturated"] = fsr.saturated;
                    sweeps << sj.dump() << '\n';
                }
            } catch (const std::exception& e) {
                failures.push_back(inst.id + " s*=" + std::to_string(s_star) + ": " + e.what());
            }
        }
    }
    write_manifest(cfg, "run", failures);
    std::cout << "device run complete, " << failures.size() << " failed cells\n";
    return failures.empty() ? 0 : 3;
}

int cmd_run(CommonOpts& opts) {
    const gmsim::ExperimentConfig cfg = load_config(opts);
    fs::create_directories(cfg.out_dir);
    return cfg.mode == "qmc" ? run_qmc(cfg, opts) : run_device(cfg, opts);
}

int cmd_calibrate(CommonOpts& opts) {
    const gmsim::ExperimentConfig cfg = load_config(opts);
    fs::create_directories(cfg.out_dir);
    const gmsim::Schedule sched = gmsim::Schedule::dwave_like();
    const auto instances = make_instances(cfg);
    const double s_star = cfg.s_stars.empty() ? 0.95 : cfg.s_stars.back();
    std::vector<std::string> failures;
    ordered_json cal_log = ordered_json::array();
    for (const auto& inst : instances) {
        // calibration is defined on the zero-coupling device
        gmsim::DisorderInstance zero = inst;
        std::fill(zero.couplings.begin(), zero.couplings.end(), 0.0);
        gmsim::DeviceModel dev = gmsim::DeviceModel::make(
            zero, gmsim::derive_seed(cfg.master_seed, {0x646576ULL, inst.seed}),
            cfg.bias_magnitude, cfg.q);
        dev.T_phys_mK = cfg.T_phys_mK;
        const auto prot = gmsim::ProtocolParams::standard(s_star, std::max(cfg.n_rep, 1000));
        auto means = [&](const gmsim::DeviceModel& d, std::uint64_t base) {
            const auto prot100 = gmsim::ProtocolParams::standard(s_star, cfg.n_rep);
            std::vector<double> m(d.num_sites(), 0.0);
            for (int r = 0; r < 100; ++r) {
                const auto samples = gmsim::sample_apq(d, sched, prot100, {},
                                                       gmsim::DeviceBackend::Auto, base + r);
                const auto mom = gmsim::magnetization_moments(samples);
                for (std::size_t i = 0; i < m.size(); ++i) m[i] += mom.site_mean[i];
            }
            for (double& v : m) v /= 100.0;
            return m;
        };
        const std::vector<double> before = means(dev, 50000);
        const auto cal = gmsim::calibrate_flux_bias(dev, sched, prot, 0.05, -0.05, 20);
        dev.flux_corrections = cal.flux;
        const std::vector<double> after = means(dev, 90000);
        gmsim::write_device_state(
            dev, (fs::path(cfg.out_dir) / ("device_" + inst.id + ".json")).string());
        ordered_json entry;
        entry["instance"] = inst.id;
        entry["s_star"] = s_star;
        entry["mean_before"] = before;
        entry["mean_after"] = after;
        entry["flux"] = cal.flux;
        for (const auto& f : cal.failures)
            if (!f.empty()) failures.push_back(inst.id + ": " + f);
        cal_log.push_back(entry);
    }
    std::ofstream out(fs::path(cfg.out_dir) / "calibration.json");
    out << cal_log.dump(2) << '\n';
    write_manifest(cfg, "calibrate", failures);
    std::cout << "calibrated " << instances.size() << " device(s), " << failures.size()
              << " bracketing failures\n";
    return failures.empty() ? 0 : 3;
}

int infer_L(const gmsim::MomentRecord& rec) {
    const int n = static_cast<int>(rec.mi2.size());
    const int L = static_cast<int>(std::lround(std::sqrt(n / 8.0)));
    return (L > 0 && 8 * L * L == n) ? L : 0;
}

struct Loaded {
    std::vector<gmsim::MomentRecord> records;
    gmsim::ExperimentConfig cfg;
};

Loaded load_records(CommonOpts& opts) {
    Loaded l{.records = {}, .cfg = load_config(opts)};
    const fs::path path = fs::path(l.cfg.out_dir) / "records.ndjson";
    l.records = gmsim::read_records_ndjson(path.string());
    if (l.records.empty()) throw gmsim::ValidationError("no records in " + path.string());
    return l;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows, const std::string& digest) {
    std::ofstream out(path);
    out << "# gmsim " << kVersion << " config_digest=" << digest << '\n' << header << '\n';
    out.precision(10);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

// Binder curves: one row per (L, beta, gamma) group.
int recipe_binder_curves(const Loaded& l, const fs::path& out) {
    std::map<std::tuple<int, double, double>, std::vector<gmsim::MomentRecord>> groups;
    for (const auto& r : l.records) groups[{infer_L(r), r.beta, r.gamma}].push_back(r);
    std::vector<std::vector<double>> rows;
    for (const auto& [key, recs] : groups) {
        const auto binder = gmsim::binder_ratio(recs);
        rows.push_back({static_cast<double>(std::get<0>(key)), std::get<1>(key), std::get<2>(key),
                        binder.g.value, binder.g.error,
                        binder.log_defined ? binder.minus_log_1mg : std::nan("")});
    }
    write_csv(out, "L,beta,gamma,g,g_err,minus_log_1mg", rows, l.cfg.digest_hex());
    return 0;
}

// Local-susceptibility histogram + tail fit for the largest L, per gamma.
int recipe_chi_histogram(const Loaded& l, const fs::path& csv, const fs::path& fit_json,
                         bool nonlinear) {
    int max_L = 0;
    for (const auto& r : l.records) max_L = std::max(max_L, infer_L(r));
    std::map<double, std::vector<double>> pools;  // gamma -> chi_loc samples
    for (const auto& r : l.records) {
        if (infer_L(r) != max_L) continue;
        for (std::size_t i = 0; i < r.mi2.size(); ++i) {
            if (nonlinear) {
                const double v = -(r.mi4[i] - 3.0 * r.mi2[i] * r.mi2[i]);
                if (v > 0) pools[r.gamma].push_back(v);
            } else {
                pools[r.gamma].push_back(r.mi2[i]);
            }
        }
    }
    std::vector<std::vector<double>> rows;
    ordered_json fits = ordered_json::array();
    for (const auto& [gamma, pool] : pools) {
        try {
            const gmsim::Histogram h = gmsim::build_histogram(pool, 40);
            const gmsim::SlopeFit fit = gmsim::fit_tail_slope(h, gmsim::TailFitPolicy::qmc());
            const gmsim::ExponentEstimate est =
                nonlinear ? gmsim::dz_from_nonlinear_slope(fit) : gmsim::dz_from_linear_slope(fit);
            rows.push_back({gamma, static_cast<double>(h.n_samples), fit.slope, fit.slope_error,
                            est.d_over_zprime, est.error});
            ordered_json fj;
            fj["gamma"] = gamma;
            fj["slope"] = fit.slope;
            fj["slope_error"] = fit.slope_error;
            fj["x_lo"] = fit.x_lo;
            fj["x_hi"] = fit.x_hi;
            fj["n_points"] = fit.n_points;
            fj["policy"] = fit.policy.describe();
            fj["d_over_zprime"] = est.d_over_zprime;
            fj["d_over_zprime_error"] = est.error;
            fj["estimator"] = est.source;
            fits.push_back(fj);
        } catch (const gmsim::ValidationError&) {
            // too few tail bins at this gamma; skipped row
        }
    }
    write_csv(csv, "gamma,n_samples,slope,slope_err,d_over_zprime,d_over_zprime_err", rows,
              l.cfg.digest_hex());
    std::ofstream out(fit_json);
    out << fits.dump(2) << '\n';
    return 0;
}

int recipe_collapse(const Loaded& l, const fs::path& out) {
    std::map<int, std::map<double, std::vector<gmsim::MomentRecord>>> by_L;  // L -> gamma -> recs
    for (const auto& r : l.records) by_L[infer_L(r)][r.gamma].push_back(r);
    if (by_L.size() < 2)
        throw gmsim::ValidationError("collapse recipe needs records from >= 2 sizes");
    std::vector<gmsim::CollapseCurve> curves;
    double g_lo = 1e300, g_hi = -1e300;
    for (const auto& [L, per_gamma] : by_L) {
        gmsim::CollapseCurve c;
        c.L = L;
        for (const auto& [gamma, recs] : per_gamma) {
            const auto binder = gmsim::binder_ratio(recs);
            c.x.push_back(gamma);
            c.y.push_back(binder.g.value);
            c.err.push_back(std::max(binder.g.error, 1e-4));
            g_lo = std::min(g_lo, gamma);
            g_hi = std::max(g_hi, gamma);
        }
        curves.push_back(std::move(c));
    }
    gmsim::CollapseSearchBox box;
    box.x_c_lo = g_lo;
    box.x_c_hi = g_hi;
    box.nu_lo = 0.5;
    box.nu_hi = 3.0;
    const gmsim::ScalingFit fit = gmsim::optimize_collapse(curves, box);
    std::vector<std::vector<double>> rows = {{fit.x_c, fit.x_c_error, fit.nu, fit.nu_error,
                                              fit.quality, fit.converged ? 1.0 : 0.0}};
    write_csv(out, "x_c,x_c_err,nu,nu_err,quality,converged", rows, l.cfg.digest_hex());
    return 0;
}

int recipe_z_scan(const Loaded& l, const fs::path& out) {
    std::map<std::pair<int, double>, std::vector<gmsim::MomentRecord>> groups;
    for (const auto& r : l.records) groups[{infer_L(r), r.beta}].push_back(r);
    std::vector<gmsim::BinderPoint> points;
    for (const auto& [key, recs] : groups) {
        const auto binder = gmsim::binder_ratio(recs);
        if (binder.g.value > 0) points.push_back({key.first, key.second, binder.g.value});
    }
    std::vector<double> z_grid;
    for (double z = 0.5; z <= 2.001; z += 0.125) z_grid.push_back(z);
    const gmsim::DynamicalZScan scan = gmsim::scan_dynamical_z(points, z_grid);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < scan.z_grid.size(); ++k)
        rows.push_back({scan.z_grid[k], scan.mse[k], scan.concave[k] ? 1.0 : 0.0,
                        scan.z_grid[k] == scan.z_star ? 1.0 : 0.0});
    write_csv(out, "z,mse,concave,is_min", rows, l.cfg.digest_hex());
    return 0;
}

int recipe_device_m_hist(const Loaded& l, const fs::path& out) {
    std::vector<double> m2;
    for (const auto& r : l.records) m2.push_back(r.m2);
    const gmsim::Histogram h = gmsim::build_histogram(m2, 30);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < h.density.size(); ++k)
        rows.push_back({h.center(k), h.density[k], static_cast<double>(h.counts[k])});
    write_csv(out, "m2_center,density,count", rows, l.cfg.digest_hex());
    return 0;
}

int recipe_device_chi_hist(CommonOpts& opts, const fs::path& out) {
    const gmsim::ExperimentConfig cfg = load_config(opts);
    const fs::path path = fs::path(cfg.out_dir) / "sweeps.ndjson";
    std::ifstream in(path);
    if (!in) throw gmsim::ValidationError("no field-sweep log at " + path.string());
    std::vector<double> chis;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto j = nlohmann::json::parse(line);
        if (!j.value("saturated", false)) chis.push_back(j.at("chi").get<double>());
    }
    if (chis.empty()) throw gmsim::ValidationError("field-sweep log has no usable entries");
    const gmsim::Histogram h = gmsim::build_histogram(chis, 30);
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < h.density.size(); ++k)
        rows.push_back({h.center(k), h.density[k], static_cast<double>(h.counts[k])});
    write_csv(out, "chi_center,density,count", rows, cfg.digest_hex());
    return 0;
}

int recipe_calibration_contrast(CommonOpts& opts, const fs::path& out) {
    const gmsim::ExperimentConfig cfg = load_config(opts);
    const fs::path path = fs::path(cfg.out_dir) / "calibration.json";
    std::ifstream in(path);
    if (!in) throw gmsim::ValidationError("no calibration log at " + path.string());
    nlohmann::json log;
    in >> log;
    std::vector<std::vector<double>> rows;
    for (const auto& entry : log) {
        const auto before = entry.at("mean_before").get<std::vector<double>>();
        const auto after = entry.at("mean_after").get<std::vector<double>>();
        for (std::size_t i = 0; i < before.size(); ++i)
            rows.push_back({static_cast<double>(i), before[i], after[i]});
    }
    write_csv(out, "qubit,mean_before,mean_after", rows, cfg.digest_hex());
    return 0;
}

int cmd_analyze(CommonOpts& opts, const std::string& recipe) {
    const auto& known = gmsim::known_recipes();
    if (std::find(known.begin(), known.end(), recipe) == known.end())
        throw gmsim::ValidationError("unknown recipe: " + recipe);
    gmsim::ExperimentConfig cfg = load_config(opts);
    const fs::path dir = cfg.out_dir;
    fs::create_directories(dir);
    const fs::path csv = dir / (recipe + ".csv");
    const auto done = [&csv](int rc) {
        if (rc == 0) std::cout << "wrote " << csv.string() << "\n";
        return rc;
    };
    if (recipe == "dfig17") return done(recipe_device_chi_hist(opts, csv));
    if (recipe == "dfig26") return done(recipe_calibration_contrast(opts, csv));
    Loaded l = load_records(opts);
    if (recipe == "fig2a") return done(recipe_binder_curves(l, csv));
    if (recipe == "fig2b") return done(recipe_collapse(l, csv));
    if (recipe == "fig4") return done(recipe_chi_histogram(l, csv, dir / "fig4_fit.json", false));
    if (recipe == "fig9") return done(recipe_chi_histogram(l, csv, dir / "fig9_fit.json", false));
    if (recipe == "fig11") return done(recipe_chi_histogram(l, csv, dir / "fig11_fit.json", true));
    if (recipe == "fig25") return done(recipe_z_scan(l, csv));
    if (recipe == "dfig15") return done(recipe_device_m_hist(l, csv));
    throw gmsim::ValidationError("recipe not wired: " + recipe);
}

int cmd_verify(const std::string& level) {
    if (level != "quick" && level != "full")
        throw gmsim::ValidationError("verify level must be quick or full");
    const auto results = level == "quick" ? gmsim::quick_battery() : gmsim::full_battery();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << ": " << r.detail << "\n";
        all = all && r.pass;
    }
    return all ? 0 : 3;
}

int cmd_report(CommonOpts& opts) {
    const gmsim::ExperimentConfig cfg = load_config(opts);
    const fs::path dir = cfg.out_dir;
    std::cout << "run directory: " << dir.string() << "\n";
    std::cout << "config digest: " << cfg.digest_hex() << " (mode " << cfg.mode << ", L " << cfg.L
              << ", " << cfg.n_instances << " instances)\n";
    const fs::path rec = dir / "records.ndjson";
    if (fs::exists(rec)) {
        const auto records = gmsim::read_records_ndjson(rec.string());
        std::map<std::pair<double, double>, int> cells;
        for (const auto& r : records) ++cells[{r.beta, r.gamma}];
        std::cout << records.size() << " records over " << cells.size() << " (beta, gamma) cells\n";
    } else {
        std::cout << "no records yet (run `gmsim run` first)\n";
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() > 4 && name.substr(name.size() - 4) == ".csv")
            std::cout << "analysis output: " << name << "\n";
        if (name.rfind("manifest_", 0) == 0) std::cout << "manifest: " << name << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Griffiths-McCoy simulation pipeline"};
    app.require_subcommand(1);
    CommonOpts opts;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "TOML config file");
        cmd->add_option("--workers", opts.workers, "worker threads");
        cmd->add_option("--seed", opts.seed_override, "override master seed");
        cmd->add_option("--out", opts.out_override, "override output directory");
        cmd->add_flag("--resume", opts.resume, "resume from checkpoints");
    };

    auto* generate = app.add_subcommand("generate", "write disorder instance files");
    add_common(generate);
    auto* run = app.add_subcommand("run", "run the configured grid");
    add_common(run);
    auto* calibrate = app.add_subcommand("calibrate", "flux-bias calibration of the device");
    add_common(calibrate);
    auto* analyze = app.add_subcommand("analyze", "produce figure-recipe CSVs");
    std::string recipe;
    analyze->add_option("recipe", recipe, "recipe name (fig2a, fig4, ..., dfig26)")->required();
    add_common(analyze);
    auto* verify = app.add_subcommand("verify", "run the reference battery");
    std::string level = "quick";
    verify->add_option("level", level, "quick or full");
    add_common(verify);
    auto* report = app.add_subcommand("report", "summarize a run directory");
    add_common(report);

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(opts);
        if (run->parsed()) return cmd_run(opts);
        if (calibrate->parsed()) return cmd_calibrate(opts);
        if (analyze->parsed()) return cmd_analyze(opts, recipe);
        if (verify->parsed()) return cmd_verify(level);
        if (report->parsed()) return cmd_report(opts);
    } catch (const gmsim::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const gmsim::CapabilityError& e) {
        std::cerr << "capability error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
