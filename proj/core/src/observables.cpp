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

#include "gmsim/observables.hpp"

#include <cmath>

#include "gmsim/errors.hpp"
#include "gmsim/random.hpp"

namespace gmsim {

std::pair<double, double> jackknife_mean(const std::vector<double>& per_instance) {
    const std::size_t n = per_instance.size();
    if (n == 0) throw ValidationError("jackknife_mean: empty input");
    double sum = 0;
    for (double v : per_instance) sum += v;
    const double mean = sum / n;
    if (n < 2) return {mean, 0.0};
    // delete-one means; for the plain mean the jackknife reduces to the
    // usual stderr, kept in this form so the same code serves ratios later
    double ss = 0;
    for (double v : per_instance) {
        const double loo = (sum - v) / (n - 1);
        ss += (loo - mean) * (loo - mean);
    }
    const double err = std::sqrt((n - 1.0) / n * ss);
    return {mean, err};
}

double bootstrap_mean_stderr(const std::vector<double>& per_instance, int n_resamples,
                             std::uint64_t seed) {
    const std::size_t n = per_instance.size();
    if (n < 2) return 0;
    Rng rng(derive_seed(seed, {0x626f6f74ULL /*"boot"*/}));
    double s = 0, s2 = 0;
    for (int r = 0; r < n_resamples; ++r) {
        double acc = 0;
        for (std::size_t j = 0; j < n; ++j) acc += per_instance[rng.below(n)];
        const double mean = acc / n;
        s += mean;
        s2 += mean * mean;
    }
    const double var = (s2 - s * s / n_resamples) / (n_resamples - 1);
    return std::sqrt(std::max(0.0, var));
}

BinderEstimate binder_ratio(const std::vector<MomentRecord>& records) {
    if (records.empty()) throw ValidationError("binder_ratio: no records");
    std::vector<double> g_per;
    g_per.reserve(records.size());
    for (const auto& rec : records) {
        if (rec.m2 <= 0) throw ValidationError("binder_ratio: record with <m^2> <= 0");
        g_per.push_back(0.5 * (3.0 - rec.m4 / (rec.m2 * rec.m2)));
    }
    BinderEstimate out;
    auto [mean, err] = jackknife_mean(g_per);
    out.g.value = mean;
    out.g.error = err;
    out.g.n_instances = static_cast<int>(records.size());
    out.g.beta = records.front().beta;
    out.g.gamma = records.front().gamma;
    if (mean < 1.0) {
        out.minus_log_1mg = -std::log1p(-mean);
        out.log_defined = true;
    }
    return out;
}

EnsembleEstimate global_susceptibility(const std::vector<MomentRecord>& records, double beta, int N) {
    if (beta <= 0 || N <= 0) throw ValidationError("global_susceptibility: beta and N must be positive");
    if (records.empty()) throw ValidationError("global_susceptibility: no records");
    std::vector<double> per;
    per.reserve(records.size());
    for (const auto& rec : records) per.push_back(beta * N * rec.m2);
    auto [mean, err] = jackknife_mean(per);
    EnsembleEstimate est;
    est.value = mean;
    est.error = err;
    est.n_instances = static_cast<int>(records.size());
    est.beta = beta;
    est.gamma = records.front().gamma;
    return est;
}

std::vector<std::pair<double, double>> local_susceptibilities(const MomentRecord& record) {
    if (record.mi2.empty() || record.mi2.size() != record.mi4.size())
        throw ValidationError("local_susceptibilities: record lacks per-site moments");
    std::vector<std::pair<double, double>> out;
    out.reserve(record.mi2.size());
    for (std::size_t i = 0; i < record.mi2.size(); ++i) {
        const double chi = record.mi2[i];
        const double chi_nl = -(record.mi4[i] - 3.0 * chi * chi);
        out.emplace_back(chi, chi_nl);
    }
    return out;
}

std::pair<double, double> global_nl_susceptibility(const MomentRecord& record) {
    const double chi = record.m2;
    return {chi, -(record.m4 - 3.0 * chi * chi)};
}

}  // namespace gmsim
