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

#include "gmsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gmsim/chimera.hpp"
#include "gmsim/errors.hpp"
#include "gmsim/toml.hpp"

namespace gmsim {

const std::vector<std::string>& known_recipes() {
    static const std::vector<std::string> recipes = {
        "fig2a",   // Binder curves -ln(1-g) vs Gamma per size
        "fig2b",   // Binder scaling collapse
        "fig4",    // local-susceptibility histogram + tail fit
        "fig9",    // d/z' vs Gamma, linear estimator
        "fig11",   // d/z' vs Gamma, nonlinear estimator
        "fig25",   // dynamical-exponent scan
        "dfig15",  // device magnetization histogram
        "dfig17",  // device susceptibility histogram + tail fit
        "dfig26",  // calibration before/after site means
    };
    return recipes;
}

ExperimentConfig ExperimentConfig::from_toml_string(const std::string& text,
                                                    const std::string& origin) {
    const toml::Document doc = toml::Document::parse_string(text, origin);
    ExperimentConfig cfg;
    cfg.mode = doc.get_string("experiment.mode", cfg.mode);
    cfg.out_dir = doc.get_string("experiment.out_dir", cfg.out_dir);
    if (doc.contains("experiment.master_seed")) {
        cfg.master_seed = static_cast<std::uint64_t>(doc.at("experiment.master_seed").as_int());
        cfg.seed_set = true;
    }
    cfg.L = static_cast<int>(doc.get_int("lattice.L", cfg.L));
    cfg.pattern = doc.get_string("lattice.pattern", cfg.pattern);
    cfg.distribution_id = doc.get_string("disorder.distribution_id", cfg.distribution_id);
    cfg.n_instances = static_cast<int>(doc.get_int("disorder.n_instances", cfg.n_instances));
    if (doc.contains("grid.betas")) cfg.betas = doc.at("grid.betas").as_double_array();
    if (doc.contains("grid.gammas")) cfg.gammas = doc.at("grid.gammas").as_double_array();
    if (doc.contains("grid.s_stars")) cfg.s_stars = doc.at("grid.s_stars").as_double_array();
    cfg.M = static_cast<int>(doc.get_int("run.M", cfg.M));
    cfg.n_sweeps = doc.get_int("run.n_sweeps", cfg.n_sweeps);
    cfg.n_thermalize = doc.get_int("run.n_thermalize", cfg.n_thermalize);
    cfg.measure_interval = static_cast<int>(doc.get_int("run.measure_interval", cfg.measure_interval));
    cfg.cluster_updates = doc.get_bool("run.cluster_updates", cfg.cluster_updates);
    cfg.n_rep = static_cast<int>(doc.get_int("run.n_rep", cfg.n_rep));
    cfg.q = doc.get_double("run.q", cfg.q);
    cfg.bias_magnitude = doc.get_double("run.bias_magnitude", cfg.bias_magnitude);
    cfg.T_phys_mK = doc.get_double("run.T_phys_mK", cfg.T_phys_mK);
    if (doc.contains("run.h_grid")) cfg.h_grid = doc.at("run.h_grid").as_double_array();
    if (doc.contains("analysis.recipes")) cfg.recipes = doc.at("analysis.recipes").as_string_array();
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_toml_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_toml_string(buf.str(), path);
}

void ExperimentConfig::validate() const {
    auto bad = [](const std::string& field, const std::string& what) {
        throw ValidationError("config: " + field + ": " + what);
    };
    if (mode != "qmc" && mode != "device-sim") bad("experiment.mode", "must be qmc or device-sim");
    if (!seed_set) bad("experiment.master_seed", "required (no wall-clock default)");
    if (out_dir.empty()) bad("experiment.out_dir", "must be non-empty");
    if (L < 1) bad("lattice.L", "must be >= 1");
    if (pattern != "full" && pattern != "default-diluted")
        bad("lattice.pattern", "must be full or default-diluted");
    try {
        distribution_support(distribution_id);
    } catch (const ValidationError&) {
        bad("disorder.distribution_id", "unknown distribution");
    }
    if (n_instances < 1) bad("disorder.n_instances", "must be >= 1");
    for (double b : betas)
        if (b <= 0) bad("grid.betas", "entries must be > 0");
    if (mode == "qmc") {
        // device-sim derives (beta, gamma) from s_stars; betas only apply here
        if (betas.empty()) bad("grid.betas", "must be non-empty in qmc mode");
        if (gammas.empty()) bad("grid.gammas", "must be non-empty in qmc mode");
        for (double g : gammas)
            if (g <= 0) bad("grid.gammas", "entries must be > 0");
    } else {
        if (s_stars.empty()) bad("grid.s_stars", "must be non-empty in device-sim mode");
        for (double s : s_stars)
            if (s <= 0 || s >= 1) bad("grid.s_stars", "entries must be in (0, 1)");
    }
    if (M < 2 || M % 2 != 0) bad("run.M", "must be even and >= 2");
    if (n_sweeps < 1) bad("run.n_sweeps", "must be >= 1");
    if (measure_interval < 1) bad("run.measure_interval", "must be >= 1");
    if (n_rep < 2) bad("run.n_rep", "must be >= 2");
    if (q < 0 || q > 1) bad("run.q", "must be in [0, 1]");
    if (T_phys_mK <= 0) bad("run.T_phys_mK", "must be > 0");
    for (const std::string& r : recipes) {
        const auto& known = known_recipes();
        if (std::find(known.begin(), known.end(), r) == known.end())
            bad("analysis.recipes", "unknown recipe: " + r);
    }
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os.precision(17);
    os << "mode=" << mode << ";seed=" << master_seed << ";L=" << L << ";pattern=" << pattern
       << ";dist=" << distribution_id << ";inst=" << n_instances << ";M=" << M
       << ";sweeps=" << n_sweeps << ";therm=" << n_thermalize << ";meas=" << measure_interval
       << ";cluster=" << cluster_updates << ";nrep=" << n_rep << ";q=" << q
       << ";bias=" << bias_magnitude << ";T=" << T_phys_mK << ";betas=";
    for (double b : betas) os << b << ',';
    os << ";gammas=";
    for (double g : gammas) os << g << ',';
    os << ";sstars=";
    for (double s : s_stars) os << s << ',';
    os << ";hgrid=";
    for (double h : h_grid) os << h << ',';
    os << ";recipes=";
    for (const auto& r : recipes) os << r << ',';
    return os.str();
}

std::uint64_t ExperimentConfig::digest() const {
    const std::string c = canonical();
    std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string ExperimentConfig::digest_hex() const {
    std::ostringstream os;
    os << std::hex << digest();
    return os.str();
}

}  // namespace gmsim
