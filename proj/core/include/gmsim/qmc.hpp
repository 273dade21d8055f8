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

#ifndef GMSIM_QMC_HPP
#define GMSIM_QMC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gmsim/chimera.hpp"
#include "gmsim/random.hpp"

namespace gmsim {

/// Couplings of the classical action obtained from the path-integral
/// mapping of H = sum_edges J sigma^z sigma^z + sum_i h_i sigma^z
///                - Gamma sum_i sigma^x
/// at inverse temperature beta with M imaginary-time slices.
///
/// Boltzmann weight is exp(-A) with
///   A = sum_t [ sum_edges k_spatial s_i(t) s_j(t) + sum_i k_field_i s_i(t) ]
///       - k_trotter sum_i sum_t s_i(t) s_i(t+1),
/// periodic along t. k_spatial = beta J / M, k_field = beta h / M,
/// k_trotter = (1/2) ln coth(beta Gamma / M) > 0.
struct EffectiveCouplings {
    double beta = 0;
    double gamma = 0;
    int M = 0;
    double k_trotter = 0;
    std::vector<double> k_spatial;  // per edge, aligned with graph.edges
    std::vector<double> k_field;    // per site; empty means all zero
};

EffectiveCouplings effective_couplings(double beta, double gamma, int M,
                                       const DisorderInstance& instance,
                                       const std::vector<double>& fields = {});

/// N x M array of +-1, slice-major: spins[t*N + i].
struct PathState {
    int N = 0;
    int M = 0;
    double beta = 0;
    std::vector<std::int8_t> spins;

    std::int8_t& at(int t, int i) { return spins[std::size_t(t) * N + i]; }
    std::int8_t at(int t, int i) const { return spins[std::size_t(t) * N + i]; }
    double magnetization() const;
};

enum class InitKind { Random, Ordered };

PathState init_state(const DisorderInstance& instance, int M, double beta, std::uint64_t seed,
                     InitKind init = InitKind::Random);

/// Per-site neighbor lists plus the two-coloring used for the fixed sweep
/// order. The Chimera graph is bipartite; color(i) = (partition + row + col)
/// mod 2 flips across every edge.
struct SweepPlan {
    int N = 0;
    std::vector<int> offsets;    // CSR into nbr_site / nbr_edge
    std::vector<int> nbr_site;
    std::vector<int> nbr_edge;
    std::vector<std::uint8_t> color;

    static SweepPlan build(const ChimeraGraph& graph);
};

/// One sweep = one Metropolis proposal per space-time site, in two-color
/// order (all sites with color == t mod 2 parity first, then the rest).
/// M must be even so the coloring is consistent around the Trotter ring.
/// Returns the number of accepted flips.
std::int64_t sweep(PathState& state, const EffectiveCouplings& k, const SweepPlan& plan, Rng& rng);

/// Optional cluster move: per spatial site, Swendsen-Wang bonds along its
/// Trotter ring, each cluster flipped with a Metropolis test on the spatial
/// field it sees. Helps at large k_trotter. Returns flipped-cluster count.
std::int64_t trotter_cluster_update(PathState& state, const EffectiveCouplings& k,
                                    const SweepPlan& plan, Rng& rng);

/// Action of a configuration (for tests and tiny-system enumerations).
double action_value(const PathState& state, const EffectiveCouplings& k, const ChimeraGraph& graph);

/// Thermal averages of one chain, with blocking error bars.
struct MomentRecord {
    std::string instance_id;
    double beta = 0;
    double gamma = 0;
    int M = 0;
    std::int64_t n_meas = 0;
    double m_abs = 0, m2 = 0, m4 = 0;
    std::vector<double> mi2, mi4;      // per site
    double m_abs_err = 0, m2_err = 0, m4_err = 0;
    std::vector<double> mi2_err;       // per site
};

struct RunParams {
    double beta = 1;
    double gamma = 1;
    int M = 64;
    std::int64_t n_sweeps = 1 << 16;
    std::int64_t n_thermalize = -1;     // -1 -> n_sweeps / 4
    int measure_interval = 8;
    std::uint64_t seed = 0;
    InitKind init = InitKind::Random;
    bool cluster_updates = false;       // interleave one cluster pass per sweep
    std::vector<double> fields;         // per-site longitudinal fields, optional
};

MomentRecord run_chain(const DisorderInstance& instance, const RunParams& params);

/// Same chain but returning raw z-basis configurations (one Trotter slice
/// per measurement). Used as the large-N thermal-sampling backend.
std::vector<std::vector<std::int8_t>> run_chain_samples(const DisorderInstance& instance,
                                                        const RunParams& params, int n_samples);

/// Blocking (binning) analysis: stderr of the mean of a correlated series,
/// block size doubled until the estimate plateaus.
double blocking_stderr(const std::vector<double>& series);

}  // namespace gmsim

#endif
