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

#ifndef GMSIM_ORACLE_HPP
#define GMSIM_ORACLE_HPP

#include <optional>
#include <vector>

#include "gmsim/chimera.hpp"

namespace gmsim {

/// Exact references for H = sum_edges J s^z s^z + sum_i c_i s^z - Gamma sum_i s^x.
///
/// m2 and chi_loc are the imaginary-time-averaged (continuum, M -> infinity)
/// counterparts of the path-integral estimators <m^2> and <m_i^2>:
///   m2      = (1/beta^2) int int <T m(tau) m(tau')>,
///   chi_loc = (1/beta^2) int int <T s_i(tau) s_i(tau')>.
/// m4/mi4 are the matching quadruple integrals, available only for small
/// dimensions (2^N <= 32). m_abs has no spectral closed form at Gamma > 0
/// and is provided by the classical oracle only.
struct ExactMoments {
    double m2 = 0;
    std::vector<double> chi_loc;         // per site; doubles as exact <m_i^2>
    std::optional<double> m_abs;
    std::optional<double> m4;
    std::optional<std::vector<double>> mi4;
    double mean_m = 0;                   // equal-time <m>; nonzero only with fields
    double log_partition = 0;            // ln Z, shifted by -beta*E0
};

/// Dense-spectrum thermal averages. N <= 12 (2^N eigendecomposition).
/// with_fourth requests m4/mi4 and needs 2^N <= 32.
ExactMoments exact_thermal_moments(const DisorderInstance& instance, double beta, double gamma,
                                   const std::vector<double>& fields = {},
                                   bool with_fourth = false);

/// Gamma = 0 limit by exhaustive enumeration. N <= 20. All moments exact,
/// including m_abs; chi_loc = mi2 = 1 identically (spins are static).
ExactMoments classical_limit_moments(const DisorderInstance& instance, double beta,
                                     const std::vector<double>& fields = {});

/// Exact finite-M <m_i^2> of a free spin (J = 0): 2x2 transfer matrix of the
/// single-site Trotter ring.
double free_spin_correlator(double beta, double gamma, int M);

/// Equal-time <s^z> of a single spin with H = c s^z - Gamma s^x.
double single_spin_mean_z(double c, double gamma, double beta);

/// Probability of each z-basis configuration under e^{-beta H} (bit i of the
/// index set -> spin -1). N <= 12.
std::vector<double> thermal_z_distribution(const DisorderInstance& instance, double beta,
                                           double gamma, const std::vector<double>& fields = {});

}  // namespace gmsim

#endif
