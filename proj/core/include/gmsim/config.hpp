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

#ifndef GMSIM_CONFIG_HPP
#define GMSIM_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gmsim {

/// One experiment = lattice + disorder ensemble + parameter grid + engine
/// settings + analysis recipes. Parsed from a TOML file; every derived
/// output embeds digest_hex() so results can be traced to their settings.
struct ExperimentConfig {
    // [experiment]
    std::string mode = "qmc";  // "qmc" | "device-sim"
    std::string out_dir = "out";
    std::uint64_t master_seed = 0;
    bool seed_set = false;  // no wall-clock default: the seed must be given

    // [lattice]
    int L = 4;
    std::string pattern = "default-diluted";  // or "full"

    // [disorder]
    std::string distribution_id = "qmc-six-level";
    int n_instances = 10;

    // [grid]
    std::vector<double> betas;
    std::vector<double> gammas;   // qmc mode
    std::vector<double> s_stars;  // device-sim mode

    // [run]
    int M = 64;
    std::int64_t n_sweeps = 1 << 16;
    std::int64_t n_thermalize = -1;  // -1: n_sweeps / 4
    int measure_interval = 8;
    bool cluster_updates = false;
    int n_rep = 100;          // device reads per session
    double q = 0.0;           // quench-distortion strength
    double bias_magnitude = 0.05;
    double T_phys_mK = 12.0;
    std::vector<double> h_grid;  // device field sweep

    // [analysis]
    std::vector<std::string> recipes;

    static ExperimentConfig from_toml_file(const std::string& path);
    static ExperimentConfig from_toml_string(const std::string& text,
                                             const std::string& origin = "<string>");

    /// Throws ValidationError with a dotted field path on the first problem.
    void validate() const;

    /// FNV-1a over the canonical serialization; stable across runs.
    std::uint64_t digest() const;
    std::string digest_hex() const;
    std::string canonical() const;
};

/// Recipe names accepted by the analyze command.
const std::vector<std::string>& known_recipes();

}  // namespace gmsim

#endif
