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

#include "gmsim/annealer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "gmsim/analysis.hpp"
#include "gmsim/errors.hpp"
#include "gmsim/oracle.hpp"
#include "gmsim/random.hpp"

namespace gmsim {

namespace {

constexpr double kPlanck = 6.62607015e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;    // J/K

// Fritsch-Carlson monotone cubic slopes.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& v) {
    const std::size_t n = x.size();
    std::vector<double> h(n - 1), delta(n - 1), d(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        h[k] = x[k + 1] - x[k];
        delta[k] = (v[k + 1] - v[k]) / h[k];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (delta[k - 1] * delta[k] <= 0) {
            d[k] = 0;
        } else {
            const double w1 = 2 * h[k] + h[k - 1];
            const double w2 = h[k] + 2 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double m = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0) return 0.0;
        if (d0 * d1 < 0 && std::abs(m) > 3 * std::abs(d0)) return 3 * d0;
        return m;
    };
    d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

}  // namespace

Schedule::Schedule(std::vector<double> s, std::vector<double> a_ghz, std::vector<double> b_ghz)
    : s_(std::move(s)), a_(std::move(a_ghz)), b_(std::move(b_ghz)) {
    if (s_.size() < 2 || s_.size() != a_.size() || s_.size() != b_.size())
        throw ValidationError("Schedule: need >= 2 rows with matching columns");
    for (std::size_t k = 0; k < s_.size(); ++k) {
        if (s_[k] < -1e-12 || s_[k] > 1 + 1e-12)
            throw ValidationError("Schedule: s outside [0, 1]");
        if (k > 0 && s_[k] <= s_[k - 1])
            throw ValidationError("Schedule: s must be strictly increasing");
    }
    constexpr double tol = 1e-9;  // allow flat segments
    for (std::size_t k = 1; k < s_.size(); ++k) {
        if (a_[k] > a_[k - 1] + tol) throw ValidationError("Schedule: A(s) must be non-increasing");
        if (b_[k] < b_[k - 1] - tol) throw ValidationError("Schedule: B(s) must be non-decreasing");
    }
    da_ = pchip_slopes(s_, a_);
    db_ = pchip_slopes(s_, b_);
}

double Schedule::eval(const std::vector<double>& v, const std::vector<double>& d, double s) const {
    if (s < s_.front() - 1e-12 || s > s_.back() + 1e-12)
        throw ValidationError("Schedule: s outside table range");
    s = std::clamp(s, s_.front(), s_.back());
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    const std::size_t k = std::min(s_.size() - 2, static_cast<std::size_t>(
                                                      std::max<std::ptrdiff_t>(0, it - s_.begin() - 1)));
    const double h = s_[k + 1] - s_[k];
    const double t = (s - s_[k]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v[k] + (t3 - 2 * t2 + t) * h * d[k] +
           (-2 * t3 + 3 * t2) * v[k + 1] + (t3 - t2) * h * d[k + 1];
}

double Schedule::A(double s) const { return eval(a_, da_, s); }
double Schedule::B(double s) const { return eval(b_, db_, s); }

Schedule Schedule::dwave_like() {
    // A(s) = 1.71 exp(-3.25 (s - 0.386)) tapered to 0 at s = 1;
    // B(s) = 2.49 (s / 0.386)^1.655. Both pass exactly through the pinned
    // knot (0.386, 1.71, 2.49); curves cross between s = 0.34 and 0.36.
    std::vector<double> s, a, b;
    auto push = [&](double sv) {
        s.push_back(sv);
        a.push_back(sv >= 1.0 ? 0.0 : 1.71 * std::exp(-3.25 * (sv - 0.386)));
        b.push_back(2.49 * std::pow(sv / 0.386, 1.655));
    };
    for (double sv = 0.0; sv < 0.3799; sv += 0.02) push(sv);
    push(0.386);
    for (double sv = 0.40; sv < 0.9999; sv += 0.02) push(sv);
    push(1.0);
    return Schedule(std::move(s), std::move(a), std::move(b));
}

Schedule Schedule::from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("Schedule: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("Schedule: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "s,A_GHz,B_GHz")
        throw ValidationError("Schedule: expected header s,A_GHz,B_GHz in " + path);
    std::vector<double> s, a, b;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        double sv, av, bv;
        char c1, c2;
        if (!(row >> sv >> c1 >> av >> c2 >> bv) || c1 != ',' || c2 != ',')
            throw ValidationError("Schedule: bad row in " + path + ": " + line);
        s.push_back(sv);
        a.push_back(av);
        b.push_back(bv);
    }
    return Schedule(std::move(s), std::move(a), std::move(b));
}

void Schedule::to_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("Schedule: cannot write " + path);
    out << "s,A_GHz,B_GHz\n";
    out.precision(12);
    for (std::size_t k = 0; k < s_.size(); ++k)
        out << s_[k] << ',' << a_[k] << ',' << b_[k] << '\n';
}

BetaGamma map_s_to_beta_gamma(const Schedule& schedule, double s_star, double T_phys_mK) {
    if (T_phys_mK <= 0) throw ValidationError("map_s_to_beta_gamma: T_phys must be > 0");
    const double b_ghz = schedule.B(s_star);
    if (b_ghz <= 0) throw ValidationError("map_s_to_beta_gamma: B(s*) must be > 0");
    BetaGamma out;
    out.beta = kPlanck * b_ghz * 1e9 / (4.0 * kBoltzmann * T_phys_mK * 1e-3);
    out.gamma = 2.0 * schedule.A(s_star) / b_ghz;
    return out;
}

ProtocolParams ProtocolParams::standard(double s_star, int n_rep) {
    ProtocolParams p;
    p.s_star = s_star;
    p.t1_us = 1000.0 * s_star;
    p.pause_us = 100.0;
    p.quench_us = 1.0 - s_star;
    p.interval_us = 200.0;
    p.n_rep = n_rep;
    p.validate();
    return p;
}

void ProtocolParams::validate() const {
    if (s_star <= 0 || s_star >= 1) throw ValidationError("ProtocolParams: s* must be in (0, 1)");
    if (t1_us <= 0 || pause_us <= 0 || quench_us <= 0 || interval_us <= 0)
        throw ValidationError("ProtocolParams: all times must be > 0");
    if (n_rep < 1) throw ValidationError("ProtocolParams: n_rep must be >= 1");
}

void DeviceModel::validate() const {
    const int n = instance.num_sites();
    if (static_cast<int>(biases.size()) != n || static_cast<int>(flux_corrections.size()) != n)
        throw ValidationError("DeviceModel: bias/correction arrays must have one entry per site");
    if (T_phys_mK <= 0) throw ValidationError("DeviceModel: T_phys must be > 0");
    if (q < 0 || q > 1) throw ValidationError("DeviceModel: q must be in [0, 1]");
}

DeviceModel DeviceModel::make(DisorderInstance instance, std::uint64_t seed,
                              double bias_magnitude, double q) {
    DeviceModel dev;
    const int n = instance.num_sites();
    dev.instance = std::move(instance);
    dev.seed = seed;
    dev.q = q;
    dev.flux_corrections.assign(n, 0.0);
    Rng rng(derive_seed(seed, {0x62696173}));  // "bias"
    dev.biases.resize(n);
    for (double& b : dev.biases) b = bias_magnitude * (2.0 * rng.uniform() - 1.0);
    dev.validate();
    return dev;
}

void write_device_state(const DeviceModel& device, const std::string& path) {
    nlohmann::ordered_json j;
    j["instance_id"] = device.instance.id;
    j["T_phys_mK"] = device.T_phys_mK;
    j["q"] = device.q;
    j["seed"] = device.seed;
    j["biases"] = device.biases;
    j["flux_corrections"] = device.flux_corrections;
    std::ofstream out(path);
    if (!out) throw ValidationError("write_device_state: cannot write " + path);
    out << j.dump(2) << '\n';
}

DeviceModel read_device_state(const std::string& path, DisorderInstance instance) {
    std::ifstream in(path);
    if (!in) throw ValidationError("read_device_state: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("read_device_state: " + path + ": " + e.what());
    }
    DeviceModel dev;
    dev.instance = std::move(instance);
    dev.T_phys_mK = j.at("T_phys_mK").get<double>();
    dev.q = j.at("q").get<double>();
    dev.seed = j.at("seed").get<std::uint64_t>();
    dev.biases = j.at("biases").get<std::vector<double>>();
    dev.flux_corrections = j.at("flux_corrections").get<std::vector<double>>();
    dev.validate();
    return dev;
}

namespace {

struct ClassicalNeighborhood {
    std::vector<int> offset, nbr;
    std::vector<double> strength;

    explicit ClassicalNeighborhood(const DisorderInstance& inst) {
        const int n = inst.num_sites();
        std::vector<int> degree(n, 0);
        for (const auto& e : inst.graph.edges) {
            ++degree[e.first];
            ++degree[e.second];
        }
        offset.assign(n + 1, 0);
        for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + degree[i];
        nbr.resize(offset[n]);
        strength.resize(offset[n]);
        std::vector<int> cursor(offset.begin(), offset.end() - 1);
        for (std::size_t k = 0; k < inst.graph.edges.size(); ++k) {
            const auto [i, j] = inst.graph.edges[k];
            const double J = inst.couplings[k];
            nbr[cursor[i]] = j;
            strength[cursor[i]++] = J;
            nbr[cursor[j]] = i;
            strength[cursor[j]++] = J;
        }
    }
};

// Greedy single-flip descent of E = sum J s s + sum c s, random visit order,
// repeated until no flip lowers the energy. Flips with an energy gain below
// kDegenerate are treated as degenerate and skipped: a quench cannot resolve
// them, and without the cutoff an arbitrarily small residual field (e.g. the
// ~1e-7 left over after flux calibration) would deterministically polarize
// every relaxed sample.
inline constexpr double kDegenerate = 1e-3;

void greedy_descent(std::vector<std::int8_t>& spins, const ClassicalNeighborhood& nb,
                    const std::vector<double>& c, Rng& rng) {
    const int n = static_cast<int>(spins.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int k = n - 1; k > 0; --k) std::swap(order[k], order[rng.below(k + 1)]);
        for (int i : order) {
            double local = c[i];
            for (int e = nb.offset[i]; e < nb.offset[i + 1]; ++e)
                local += nb.strength[e] * spins[nb.nbr[e]];
            if (spins[i] * local > kDegenerate) {
                spins[i] = -spins[i];
                changed = true;
            }
        }
    }
}

}  // namespace

std::vector<std::vector<std::int8_t>> sample_apq(const DeviceModel& device,
                                                 const Schedule& schedule,
                                                 const ProtocolParams& protocol,
                                                 const std::vector<double>& h_field,
                                                 DeviceBackend backend, std::uint64_t session) {
    device.validate();
    protocol.validate();
    const int n = device.num_sites();
    if (!h_field.empty() && static_cast<int>(h_field.size()) != n)
        throw ValidationError("sample_apq: h_field size mismatch");
    const BetaGamma bg = map_s_to_beta_gamma(schedule, protocol.s_star, device.T_phys_mK);

    // longitudinal part: J s s + (b - f) s - h s
    std::vector<double> c(n);
    for (int i = 0; i < n; ++i)
        c[i] = device.biases[i] - device.flux_corrections[i] - (h_field.empty() ? 0.0 : h_field[i]);

    bool zero_coupling = true;
    for (double J : device.instance.couplings)
        if (J != 0.0) zero_coupling = false;

    Rng rng(derive_seed(device.seed, {0x617071, session}));  // "apq"
    std::vector<std::vector<std::int8_t>> samples;
    samples.reserve(protocol.n_rep);

    if (backend == DeviceBackend::Auto)
        backend = zero_coupling ? DeviceBackend::Oracle
                                : (n <= 12 ? DeviceBackend::Oracle : DeviceBackend::Qmc);

    if (backend == DeviceBackend::Oracle && zero_coupling) {
        // factorized: each qubit is an independent two-level system
        std::vector<double> p_up(n);
        for (int i = 0; i < n; ++i)
            p_up[i] = 0.5 * (1.0 + single_spin_mean_z(c[i], bg.gamma, bg.beta));
        for (int r = 0; r < protocol.n_rep; ++r) {
            std::vector<std::int8_t> s(n);
            for (int i = 0; i < n; ++i) s[i] = rng.uniform() < p_up[i] ? 1 : -1;
            samples.push_back(std::move(s));
        }
    } else if (backend == DeviceBackend::Oracle) {
        if (n > 12) throw CapabilityError("sample_apq: oracle backend limited to N <= 12");
        const std::vector<double> probs =
            thermal_z_distribution(device.instance, bg.beta, bg.gamma, c);
        std::vector<double> cdf(probs.size());
        std::partial_sum(probs.begin(), probs.end(), cdf.begin());
        for (int r = 0; r < protocol.n_rep; ++r) {
            const double u = rng.uniform() * cdf.back();
            const std::size_t idx =
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
            std::vector<std::int8_t> s(n);
            for (int i = 0; i < n; ++i) s[i] = (idx >> i) & 1 ? -1 : 1;
            samples.push_back(std::move(s));
        }
    } else {
        RunParams params;
        params.beta = bg.beta;
        params.gamma = bg.gamma;
        params.M = 64;
        params.n_thermalize = 2000;
        params.measure_interval = 16;
        params.seed = derive_seed(device.seed, {0x716d63, session});
        params.fields = c;
        samples = run_chain_samples(device.instance, params, protocol.n_rep);
    }

    if (device.q > 0) {
        const ClassicalNeighborhood nb(device.instance);
        for (auto& s : samples)
            if (rng.uniform() < device.q) greedy_descent(s, nb, c, rng);
    }
    return samples;
}

DeviceMoments magnetization_moments(const std::vector<std::vector<std::int8_t>>& samples) {
    if (samples.size() < 2) throw ValidationError("magnetization_moments: need >= 2 samples");
    const int n = static_cast<int>(samples.front().size());
    DeviceMoments out;
    out.n_samples = static_cast<long>(samples.size());
    out.site_mean.assign(n, 0.0);
    for (const auto& s : samples) {
        if (static_cast<int>(s.size()) != n)
            throw ValidationError("magnetization_moments: ragged sample set");
        double sum = 0;
        for (int i = 0; i < n; ++i) {
            sum += s[i];
            out.site_mean[i] += s[i];
        }
        const double m = sum / n;
        out.m += m;
        out.m_abs += std::abs(m);
        out.m2 += m * m;
        out.m4 += m * m * m * m;
    }
    const double inv = 1.0 / out.n_samples;
    out.m *= inv;
    out.m_abs *= inv;
    out.m2 *= inv;
    out.m4 *= inv;
    for (double& v : out.site_mean) v *= inv;
    for (double v : out.site_mean) {
        out.mi2 += v * v;
        out.mi4 += v * v * v * v;
    }
    out.mi2 /= n;
    out.mi4 /= n;
    return out;
}

MomentRecord DeviceMoments::to_record(const std::string& instance_id, double beta,
                                      double gamma) const {
    MomentRecord rec;
    rec.instance_id = instance_id;
    rec.beta = beta;
    rec.gamma = gamma;
    rec.M = 0;  // device records carry no Trotter number
    rec.n_meas = n_samples;
    rec.m_abs = m_abs;
    rec.m2 = m2;
    rec.m4 = m4;
    rec.mi2.reserve(site_mean.size());
    for (double v : site_mean) rec.mi2.push_back(v * v);
    // binomial-style errors of the sample means
    const double inv = 1.0 / n_samples;
    rec.m_abs_err = std::sqrt(std::max(0.0, (m2 - m_abs * m_abs)) * inv);
    rec.m2_err = std::sqrt(std::max(0.0, (m4 - m2 * m2)) * inv);
    rec.m4_err = 2.0 * rec.m2_err;
    return rec;
}

FieldSweepResult field_sweep_susceptibility(const DeviceModel& device, const Schedule& schedule,
                                            const ProtocolParams& protocol,
                                            const std::vector<double>& h_grid,
                                            DeviceBackend backend) {
    if (h_grid.size() < 4)
        throw ValidationError("field_sweep_susceptibility: need >= 4 field values");
    const int n = device.num_sites();
    FieldSweepResult out;
    bool all_saturated = true;
    std::uint64_t session = 1;
    for (double h : h_grid) {
        const std::vector<double> h_field(n, h);
        const auto samples = sample_apq(device, schedule, protocol, h_field, backend, session++);
        double m = 0;
        for (const auto& s : samples) {
            double sum = 0;
            for (int i = 0; i < n; ++i) sum += s[i];
            m += sum / n;
        }
        m /= static_cast<double>(samples.size());
        out.curve.emplace_back(h, m);
        if (h != 0 && std::abs(m) < 0.98) all_saturated = false;
    }
    out.saturated = all_saturated;
    if (out.saturated) {
        // flags the degenerate fit: the whole grid is pinned at |m| ~ 1 so
        // the odd-polynomial fit would report noise; keep chi at 0
        out.chi = 0;
        out.chi_nl = 0;
        return out;
    }
    const SusceptibilityPair pair = fit_magnetization_curve(out.curve);
    out.chi = pair.chi;
    out.chi_nl = pair.chi_nl;
    return out;
}

DeviceModel gauge_transform(const DeviceModel& device, const std::vector<int>& eps) {
    const int n = device.num_sites();
    if (static_cast<int>(eps.size()) != n)
        throw ValidationError("gauge_transform: eps size mismatch");
    for (int e : eps)
        if (e != 1 && e != -1) throw ValidationError("gauge_transform: eps entries must be +-1");
    DeviceModel out = device;
    for (std::size_t k = 0; k < out.instance.couplings.size(); ++k) {
        const auto [i, j] = out.instance.graph.edges[k];
        out.instance.couplings[k] *= eps[i] * eps[j];
    }
    for (int i = 0; i < n; ++i) {
        out.biases[i] *= eps[i];
        out.flux_corrections[i] *= eps[i];
    }
    return out;
}

void ungauge_samples(std::vector<std::vector<std::int8_t>>& samples, const std::vector<int>& eps) {
    for (auto& s : samples) {
        if (s.size() != eps.size()) throw ValidationError("ungauge_samples: eps size mismatch");
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::int8_t>(s[i] * eps[i]);
    }
}

CalibrationResult calibrate_flux_bias(const DeviceModel& device, const Schedule& schedule,
                                      const ProtocolParams& protocol, double h_up0,
                                      double h_low0, int n_rep_cal) {
    if (h_up0 <= 0 || h_low0 >= 0)
        throw ValidationError("calibrate_flux_bias: need h_up0 > 0 and h_low0 < 0");
    if (n_rep_cal < 1) throw ValidationError("calibrate_flux_bias: n_rep_cal must be >= 1");
    device.validate();
    const int n = device.num_sites();

    // calibration runs with couplings and applied field forced to zero
    DeviceModel probe = device;
    std::fill(probe.instance.couplings.begin(), probe.instance.couplings.end(), 0.0);

    std::uint64_t session = 0x63616c;  // distinct stream from normal sampling
    auto site_means = [&](const std::vector<double>& flux) {
        probe.flux_corrections = flux;
        const auto samples = sample_apq(probe, schedule, protocol, {}, DeviceBackend::Auto,
                                        session++);
        return magnetization_moments(samples).site_mean;
    };

    CalibrationResult result;
    std::vector<double> up(n, h_up0), low(n, h_low0);
    constexpr int kMaxDoublings = 40;

    // (i)/(ii) expand each bracket edge until it saturates the qubit
    for (int sign : {+1, -1}) {
        std::vector<double>& edge = sign > 0 ? up : low;
        for (int round = 0; round < kMaxDoublings; ++round) {
            const std::vector<double> means = site_means(edge);
            bool pending = false;
            for (int i = 0; i < n; ++i) {
                if (sign * means[i] <= 0.5) {
                    edge[i] *= 2.0;
                    pending = true;
                }
            }
            if (!pending) break;
            if (round == kMaxDoublings - 1)
                for (int i = 0; i < n; ++i)
                    if (sign * means[i] <= 0.5)
                        result.failures.push_back(
                            "qubit " + std::to_string(i) +
                            (sign > 0 ? ": h_up expansion failed to saturate"
                                      : ": h_low expansion failed to saturate"));
        }
    }

    // (iii) bisection: flux above the bias drives the qubit up, so a
    // positive mean means the pivot is too high
    for (int round = 0; round < n_rep_cal; ++round) {
        std::vector<double> pivot(n);
        for (int i = 0; i < n; ++i) pivot[i] = 0.5 * (up[i] + low[i]);
        const std::vector<double> means = site_means(pivot);
        for (int i = 0; i < n; ++i) (means[i] > 0 ? up[i] : low[i]) = pivot[i];
    }
    result.rounds = n_rep_cal;
    result.flux.resize(n);
    result.window.resize(n);
    for (int i = 0; i < n; ++i) {
        result.flux[i] = 0.5 * (up[i] + low[i]);
        result.window[i] = up[i] - low[i];
    }
    return result;
}

}  // namespace gmsim
