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

#include "gmsim/qmc.hpp"

#include <cmath>
#include <cstdlib>

#include "gmsim/errors.hpp"

namespace gmsim {

EffectiveCouplings effective_couplings(double beta, double gamma, int M,
                                       const DisorderInstance& instance,
                                       const std::vector<double>& fields) {
    if (beta <= 0) throw ValidationError("effective_couplings: beta must be > 0");
    if (M < 2 || M % 2 != 0)
        throw ValidationError("effective_couplings: M must be even and >= 2");
    if (gamma <= 0)
        throw ValidationError("effective_couplings: Gamma must be > 0 (use the classical oracle for Gamma = 0)");
    const double x = beta * gamma / M;
    if (!std::isfinite(x) || x <= 0) throw ValidationError("effective_couplings: beta*Gamma/M out of range");

    EffectiveCouplings k;
    k.beta = beta;
    k.gamma = gamma;
    k.M = M;
    // (1/2) ln coth(x); tanh underflows to x itself for tiny x, so this is
    // stable down to denormals, and decays like e^{-2x} for large x.
    k.k_trotter = -0.5 * std::log(std::tanh(x));
    if (!std::isfinite(k.k_trotter))
        throw ValidationError("effective_couplings: k_trotter overflow at beta*Gamma/M = " + std::to_string(x));
    k.k_spatial.reserve(instance.couplings.size());
    for (double J : instance.couplings) k.k_spatial.push_back(beta * J / M);
    if (!fields.empty()) {
        if (static_cast<int>(fields.size()) != instance.num_sites())
            throw ValidationError("effective_couplings: fields size mismatch");
        k.k_field.reserve(fields.size());
        for (double h : fields) k.k_field.push_back(beta * h / M);
    }
    return k;
}

double PathState::magnetization() const {
    std::int64_t s = 0;
    for (std::int8_t v : spins) s += v;
    return static_cast<double>(s) / (static_cast<double>(N) * M);
}

PathState init_state(const DisorderInstance& instance, int M, double beta, std::uint64_t seed,
                     InitKind init) {
    if (M < 2) throw ValidationError("init_state: M must be >= 2");
    PathState st;
    st.N = instance.num_sites();
    st.M = M;
    st.beta = beta;
    st.spins.resize(std::size_t(st.N) * M, 1);
    if (init == InitKind::Random) {
        Rng rng(derive_seed(seed, {0x696e6974ULL /*"init"*/}));
        for (auto& s : st.spins) s = rng.coin() ? 1 : -1;
    }
    return st;
}

SweepPlan SweepPlan::build(const ChimeraGraph& graph) {
    SweepPlan plan;
    plan.N = graph.num_sites();
    std::vector<int> degree(plan.N, 0);
    for (const Edge& e : graph.edges) {
        ++degree[e.first];
        ++degree[e.second];
    }
    plan.offsets.assign(plan.N + 1, 0);
    for (int i = 0; i < plan.N; ++i) plan.offsets[i + 1] = plan.offsets[i] + degree[i];
    plan.nbr_site.resize(plan.offsets[plan.N]);
    plan.nbr_edge.resize(plan.offsets[plan.N]);
    std::vector<int> fill(plan.offsets.begin(), plan.offsets.end() - 1);
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const auto [a, b] = graph.edges[e];
        plan.nbr_site[fill[a]] = b;
        plan.nbr_edge[fill[a]++] = static_cast<int>(e);
        plan.nbr_site[fill[b]] = a;
        plan.nbr_edge[fill[b]++] = static_cast<int>(e);
    }
    plan.color.resize(plan.N);
    const int L = graph.L;
    if (L > 0 && graph.n_sites == 0) {
        for (int i = 0; i < plan.N; ++i) {
            const int cell = i / 8, partition = (i % 8) / 4;
            const int row = cell / L, col = cell % L;
            plan.color[i] = static_cast<std::uint8_t>((partition + row + col) & 1);
        }
    } else {
        // custom graph: parity coloring; the scan order stays valid for
        // Metropolis even when the graph is not bipartite under it
        for (int i = 0; i < plan.N; ++i) plan.color[i] = static_cast<std::uint8_t>(i & 1);
    }
    return plan;
}

namespace {

// Local action contribution of space-time site (i, t): s * (spatial field +
// longitudinal field - k_trotter * (temporal neighbors)).
inline double local_action(const PathState& st, const EffectiveCouplings& k, const SweepPlan& plan,
                           int t, int i) {
    const int N = st.N, M = st.M;
    const std::int8_t* slice = st.spins.data() + std::size_t(t) * N;
    double field = 0;
    for (int n = plan.offsets[i]; n < plan.offsets[i + 1]; ++n)
        field += k.k_spatial[plan.nbr_edge[n]] * slice[plan.nbr_site[n]];
    if (!k.k_field.empty()) field += k.k_field[i];
    const int tm = (t == 0) ? M - 1 : t - 1;
    const int tp = (t == M - 1) ? 0 : t + 1;
    const double temporal = st.spins[std::size_t(tm) * N + i] + st.spins[std::size_t(tp) * N + i];
    return slice[i] * (field - k.k_trotter * temporal);
}

}  // namespace

std::int64_t sweep(PathState& state, const EffectiveCouplings& k, const SweepPlan& plan, Rng& rng) {
    if (state.M % 2 != 0) throw ValidationError("sweep: M must be even for the two-coloring order");
    std::int64_t accepted = 0;
    const int N = state.N, M = state.M;
    for (int phase = 0; phase < 2; ++phase) {
        for (int t = 0; t < M; ++t) {
            const int want = (phase + t) & 1;
            for (int i = 0; i < N; ++i) {
                if (plan.color[i] != want) continue;
                const double dA = -2.0 * local_action(state, k, plan, t, i);
                // Ties (dA == 0) are broken by a fair coin. Accepting them
                // outright would make zero-cost flips deterministic, and on
                // degenerate configurations (e.g. a field-free Trotter ring)
                // the composed sweep then cycles instead of mixing: the
                // target distribution stays invariant but the chain is no
                // longer ergodic over it.
                const bool accept = dA == 0 ? rng.coin()
                                            : (dA < 0 || rng.uniform() < std::exp(-dA));
                if (accept) {
                    state.spins[std::size_t(t) * N + i] = -state.spins[std::size_t(t) * N + i];
                    ++accepted;
                }
            }
        }
    }
    return accepted;
}

std::int64_t trotter_cluster_update(PathState& state, const EffectiveCouplings& k,
                                    const SweepPlan& plan, Rng& rng) {
    const int N = state.N, M = state.M;
    const double p_bond = -std::expm1(-2.0 * k.k_trotter);
    std::int64_t flipped = 0;
    std::vector<std::uint8_t> bond(M);       // bond t: between slices t and t+1 (mod M)
    std::vector<double> field(M);
    for (int i = 0; i < N; ++i) {
        for (int t = 0; t < M; ++t) {
            const std::int8_t* slice = state.spins.data() + std::size_t(t) * N;
            double f = 0;
            for (int n = plan.offsets[i]; n < plan.offsets[i + 1]; ++n)
                f += k.k_spatial[plan.nbr_edge[n]] * slice[plan.nbr_site[n]];
            if (!k.k_field.empty()) f += k.k_field[i];
            field[t] = f;
            const int tp = (t == M - 1) ? 0 : t + 1;
            const std::int8_t a = state.at(t, i), b = state.at(tp, i);
            bond[t] = (a == b && rng.uniform() < p_bond) ? 1 : 0;
        }
        // walk clusters around the ring
        int start = 0;
        while (start < M && bond[(start + M - 1) % M]) ++start;
        if (start == M) {
            // single cluster spanning the whole ring
            double sum = 0;
            for (int t = 0; t < M; ++t) sum += state.at(t, i) * field[t];
            const double delta = -2.0 * sum;  // field term +sum -> -sum
            if (delta <= 0 || rng.uniform() < std::exp(-delta)) {
                for (int t = 0; t < M; ++t) state.at(t, i) = -state.at(t, i);
                ++flipped;
            }
            continue;
        }
        int t = start, done = 0;
        while (done < M) {
            double sum = 0;
            int len = 0;
            int u = t;
            for (;;) {
                sum += state.at(u, i) * field[u];
                ++len;
                if (!bond[u]) break;
                u = (u + 1) % M;
            }
            // Action field term is +sum; flip maps it to -sum.
            const double delta = -2.0 * sum;
            if (delta <= 0 || rng.uniform() < std::exp(-delta)) {
                int v = t;
                for (int n = 0; n < len; ++n) {
                    state.at(v, i) = -state.at(v, i);
                    v = (v + 1) % M;
                }
                ++flipped;
            }
            done += len;
            t = (u + 1) % M;
        }
    }
    return flipped;
}

double action_value(const PathState& state, const EffectiveCouplings& k, const ChimeraGraph& graph) {
    const int N = state.N, M = state.M;
    double a = 0;
    for (int t = 0; t < M; ++t) {
        const std::int8_t* slice = state.spins.data() + std::size_t(t) * N;
        for (std::size_t e = 0; e < graph.edges.size(); ++e)
            a += k.k_spatial[e] * slice[graph.edges[e].first] * slice[graph.edges[e].second];
        if (!k.k_field.empty())
            for (int i = 0; i < N; ++i) a += k.k_field[i] * slice[i];
        const int tp = (t == M - 1) ? 0 : t + 1;
        const std::int8_t* next = state.spins.data() + std::size_t(tp) * N;
        for (int i = 0; i < N; ++i) a -= k.k_trotter * slice[i] * next[i];
    }
    return a;
}

double blocking_stderr(const std::vector<double>& series) {
    const std::size_t n = series.size();
    if (n < 2) return 0;
    std::vector<double> data(series);
    double best = 0;
    while (data.size() >= 16) {
        double s = 0, s2 = 0;
        for (double v : data) {
            s += v;
            s2 += v * v;
        }
        const double nb = static_cast<double>(data.size());
        const double var = (s2 - s * s / nb) / (nb - 1);
        const double err = std::sqrt(std::max(0.0, var) / nb);
        best = std::max(best, err);
        // halve: average consecutive pairs
        std::vector<double> half;
        half.reserve(data.size() / 2);
        for (std::size_t j = 0; j + 1 < data.size(); j += 2) half.push_back(0.5 * (data[j] + data[j + 1]));
        data.swap(half);
    }
    return best;
}

namespace {

struct ChainDriver {
    const DisorderInstance& instance;
    const RunParams& params;
    SweepPlan plan;
    EffectiveCouplings k;
    PathState state;
    Rng rng;
    std::int64_t n_thermalize;
    std::int64_t n_measurements;

    explicit ChainDriver(const DisorderInstance& inst, const RunParams& p)
        : instance(inst),
          params(p),
          plan(SweepPlan::build(inst.graph)),
          k(effective_couplings(p.beta, p.gamma, p.M, inst, p.fields)),
          state(init_state(inst, p.M, p.beta, p.seed, p.init)),
          rng(derive_seed(p.seed, {0x636861696eULL /*"chain"*/})) {
        n_thermalize = p.n_thermalize >= 0 ? p.n_thermalize : p.n_sweeps / 4;
        if (n_thermalize >= p.n_sweeps)
            throw ValidationError("run_chain: n_thermalize must be < n_sweeps");
        if (p.measure_interval < 1) throw ValidationError("run_chain: measure_interval must be >= 1");
        n_measurements = (p.n_sweeps - n_thermalize) / p.measure_interval;
    }

    void step() {
        sweep(state, k, plan, rng);
        if (params.cluster_updates) trotter_cluster_update(state, k, plan, rng);
    }
};

}  // namespace

MomentRecord run_chain(const DisorderInstance& instance, const RunParams& params) {
    ChainDriver chain(instance, params);
    const int N = chain.state.N, M = chain.state.M;

    MomentRecord rec;
    rec.instance_id = instance.id;
    rec.beta = params.beta;
    rec.gamma = params.gamma;
    rec.M = M;
    rec.mi2.assign(N, 0);
    rec.mi4.assign(N, 0);
    rec.mi2_err.assign(N, 0);

    std::vector<double> series_mabs, series_m2, series_m4;
    series_m2.reserve(chain.n_measurements);
    const std::int64_t block_len = std::max<std::int64_t>(1, chain.n_measurements / 128);
    std::vector<double> site_sum(N, 0);             // running sum of m_i^2
    std::vector<double> block_cur(N, 0);            // current block sum of m_i^2
    std::vector<double> block_s(N, 0), block_s2(N, 0);
    std::int64_t in_block = 0, n_blocks = 0;
    std::vector<std::int32_t> site_spin_sum(N);

    for (std::int64_t s = 0; s < params.n_sweeps; ++s) {
        chain.step();
        if (s < chain.n_thermalize) continue;
        if ((s - chain.n_thermalize) % params.measure_interval != 0) continue;
        if (rec.n_meas == chain.n_measurements) break;

        std::fill(site_spin_sum.begin(), site_spin_sum.end(), 0);
        for (int t = 0; t < M; ++t) {
            const std::int8_t* slice = chain.state.spins.data() + std::size_t(t) * N;
            for (int i = 0; i < N; ++i) site_spin_sum[i] += slice[i];
        }
        double total = 0;
        for (int i = 0; i < N; ++i) total += site_spin_sum[i];
        const double m = total / (static_cast<double>(N) * M);
        const double m2 = m * m;
        series_mabs.push_back(std::abs(m));
        series_m2.push_back(m2);
        series_m4.push_back(m2 * m2);
        for (int i = 0; i < N; ++i) {
            const double mi = static_cast<double>(site_spin_sum[i]) / M;
            const double mi2 = mi * mi;
            site_sum[i] += mi2;
            rec.mi4[i] += mi2 * mi2;
            block_cur[i] += mi2;
        }
        ++rec.n_meas;
        if (++in_block == block_len) {
            for (int i = 0; i < N; ++i) {
                const double bm = block_cur[i] / block_len;
                block_s[i] += bm;
                block_s2[i] += bm * bm;
                block_cur[i] = 0;
            }
            in_block = 0;
            ++n_blocks;
        }
    }

    const double n = static_cast<double>(rec.n_meas);
    double sa = 0, s2 = 0, s4 = 0;
    for (double v : series_mabs) sa += v;
    for (double v : series_m2) s2 += v;
    for (double v : series_m4) s4 += v;
    rec.m_abs = sa / n;
    rec.m2 = s2 / n;
    rec.m4 = s4 / n;
    rec.m_abs_err = blocking_stderr(series_mabs);
    rec.m2_err = blocking_stderr(series_m2);
    rec.m4_err = blocking_stderr(series_m4);
    for (int i = 0; i < N; ++i) {
        rec.mi2[i] = site_sum[i] / n;
        rec.mi4[i] /= n;
        if (n_blocks >= 2) {
            const double nb = static_cast<double>(n_blocks);
            const double var = (block_s2[i] - block_s[i] * block_s[i] / nb) / (nb - 1);
            rec.mi2_err[i] = std::sqrt(std::max(0.0, var) / nb);
        }
    }
    return rec;
}

std::vector<std::vector<std::int8_t>> run_chain_samples(const DisorderInstance& instance,
                                                        const RunParams& params, int n_samples) {
    ChainDriver chain(instance, params);
    const int N = chain.state.N;
    std::vector<std::vector<std::int8_t>> samples;
    samples.reserve(n_samples);
    for (std::int64_t s = 0; static_cast<int>(samples.size()) < n_samples; ++s) {
        chain.step();
        if (s < chain.n_thermalize) continue;
        if ((s - chain.n_thermalize) % params.measure_interval != 0) continue;
        samples.emplace_back(chain.state.spins.begin(), chain.state.spins.begin() + N);
    }
    return samples;
}

}  // namespace gmsim
