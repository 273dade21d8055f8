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

// Simulated analog annealer: anneal schedules, the pause-point -> (beta,
// Gamma) mapping, anneal-pause-quench sampling with a phenomenological
// per-qubit bias + quench-distortion noise model, gauge averaging, field
// sweeps for susceptibilities, and binary-search flux-bias calibration.

#ifndef GMSIM_ANNEALER_HPP
#define GMSIM_ANNEALER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gmsim/chimera.hpp"
#include "gmsim/qmc.hpp"

namespace gmsim {

/// Anneal schedule: tabulated A(s), B(s) in GHz, interpolated with a
/// monotone cubic (PCHIP). A must be non-increasing and B non-decreasing
/// over the table; s strictly increasing within [0, 1].
class Schedule {
  public:
    Schedule(std::vector<double> s, std::vector<double> a_ghz, std::vector<double> b_ghz);

    double A(double s) const;  // GHz
    double B(double s) const;  // GHz
    double s_min() const { return s_.front(); }
    double s_max() const { return s_.back(); }
    const std::vector<double>& knots() const { return s_; }

    /// Bundled synthetic fixture: A decreasing 6 -> 0 GHz, B increasing
    /// 0 -> 12 GHz, A = B crossing near s = 0.36, with the knot at
    /// s = 0.386 pinned exactly to A = 1.71, B = 2.49.
    static Schedule dwave_like();

    /// CSV with header `s,A_GHz,B_GHz`.
    static Schedule from_csv(const std::string& path);
    void to_csv(const std::string& path) const;

  private:
    std::vector<double> s_, a_, b_, da_, db_;  // values + PCHIP slopes
    double eval(const std::vector<double>& v, const std::vector<double>& d, double s) const;
};

struct BetaGamma {
    double beta = 0;
    double gamma = 0;
};

/// Dimensionless simulation parameters of the paused Hamiltonian:
/// beta = h_Planck * B(s*) * 1e9 / (4 k_B T_phys), Gamma = 2 A(s*) / B(s*).
BetaGamma map_s_to_beta_gamma(const Schedule& schedule, double s_star, double T_phys_mK = 12.0);

/// Anneal-pause-quench protocol timings (microseconds). The standard
/// protocol anneals for 1000 s* us, pauses 100 us at s*, quenches in
/// (1 - s*) us, with 200 us between repetitions.
struct ProtocolParams {
    double s_star = 0.36;
    double t1_us = 0;        // anneal ramp
    double pause_us = 100.0;
    double quench_us = 0;
    double interval_us = 200.0;
    int n_rep = 100;

    static ProtocolParams standard(double s_star, int n_rep = 100);
    void validate() const;
};

/// Simulated device: a disorder instance plus static per-qubit longitudinal
/// biases b_i, additive flux corrections f_i, operating temperature, and a
/// quench-distortion strength q (probability a returned sample relaxes to a
/// nearby classical local minimum). Longitudinal part of the device
/// Hamiltonian: sum_ij J s s + sum_i (b_i - f_i) s_i - sum_i h_i s_i.
struct DeviceModel {
    DisorderInstance instance;
    std::vector<double> biases;            // b_i
    std::vector<double> flux_corrections;  // f_i
    double T_phys_mK = 12.0;
    double q = 0.0;
    std::uint64_t seed = 1;

    int num_sites() const { return instance.num_sites(); }
    void validate() const;

    /// Biases drawn i.i.d. uniform on [-bias_magnitude, bias_magnitude],
    /// regenerable from the seed; corrections start at zero.
    static DeviceModel make(DisorderInstance instance, std::uint64_t seed,
                            double bias_magnitude = 0.05, double q = 0.0);
};

void write_device_state(const DeviceModel& device, const std::string& path);
DeviceModel read_device_state(const std::string& path, DisorderInstance instance);

enum class DeviceBackend {
    Auto,    // factorized if J == 0, else oracle if N small enough, else qmc
    Oracle,  // dense thermal state, N <= 12
    Qmc,     // path-integral chain, any N
};

/// One anneal-pause-quench session: n_rep z-basis configurations drawn from
/// the thermal state of the paused Hamiltonian at (beta, Gamma) =
/// map_s_to_beta_gamma(s*), then individually distorted by greedy
/// single-flip descent with probability q. Returns n_rep vectors of N spins.
std::vector<std::vector<std::int8_t>> sample_apq(const DeviceModel& device,
                                                 const Schedule& schedule,
                                                 const ProtocolParams& protocol,
                                                 const std::vector<double>& h_field = {},
                                                 DeviceBackend backend = DeviceBackend::Auto,
                                                 std::uint64_t session = 0);

/// Sample moments of m = (1/N) sum_i s_i plus per-site means/second moments.
struct DeviceMoments {
    double m = 0, m_abs = 0, m2 = 0, m4 = 0;
    double mi2 = 0, mi4 = 0;           // site-averaged <s_i>^2-style moments
    std::vector<double> site_mean;     // <s_i>
    long n_samples = 0;

    MomentRecord to_record(const std::string& instance_id, double beta, double gamma) const;
};

DeviceMoments magnetization_moments(const std::vector<std::vector<std::int8_t>>& samples);

/// Fitted linear and nonlinear susceptibility from a longitudinal field
/// sweep (odd-polynomial fit of uniform m against uniform h).
struct FieldSweepResult {
    double chi = 0;
    double chi_nl = 0;
    bool saturated = false;  // |m| ~ 1 across the whole grid; chi untrustworthy
    std::vector<std::pair<double, double>> curve;  // (h, m) as measured
};

FieldSweepResult field_sweep_susceptibility(const DeviceModel& device, const Schedule& schedule,
                                            const ProtocolParams& protocol,
                                            const std::vector<double>& h_grid,
                                            DeviceBackend backend = DeviceBackend::Auto);

/// Gauge transform eps_i = +-1: J_ij -> eps_i eps_j J_ij, b_i -> eps_i b_i
/// (and f_i -> eps_i f_i). Sampling the transformed device and mapping the
/// configurations back by eps reproduces the original distribution.
DeviceModel gauge_transform(const DeviceModel& device, const std::vector<int>& eps);

/// Map configurations back through a gauge: s_i -> eps_i s_i.
void ungauge_samples(std::vector<std::vector<std::int8_t>>& samples, const std::vector<int>& eps);

struct CalibrationResult {
    std::vector<double> flux;            // recommended f_i (bisection midpoints)
    std::vector<double> window;          // final per-qubit bracket width
    std::vector<std::string> failures;   // per-qubit bracketing diagnostics
    int rounds = 0;
};

/// Binary-search flux calibration. All device calls run with couplings and
/// applied field forced to zero:
///   (i) double h_up until every qubit has mean magnetization > 0.5,
///  (ii) double h_low until every qubit has mean < -0.5,
/// (iii) n_rep_cal bisection rounds, per-qubit bracket update by the sign
///       of that qubit's mean.
/// Does not mutate `device`; callers install result.flux themselves.
CalibrationResult calibrate_flux_bias(const DeviceModel& device, const Schedule& schedule,
                                      const ProtocolParams& protocol, double h_up0,
                                      double h_low0, int n_rep_cal);

}  // namespace gmsim

#endif
