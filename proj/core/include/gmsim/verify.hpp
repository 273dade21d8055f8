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

// End-to-end verification battery: each check exercises one pillar of the
// pipeline against an independent reference (exact diagonalization,
// enumerated Boltzmann weights, synthetic data with planted parameters, or
// closed-form device arithmetic) and reports one pass/fail line. The same
// checks back both `gmsim verify` and the acceptance test binary.

#ifndef GMSIM_VERIFY_HPP
#define GMSIM_VERIFY_HPP

#include <string>
#include <vector>

namespace gmsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// 1. QMC vs dense-spectrum thermal moments on one Chimera cell, including
///    the Trotter-bias shrink test between M = 16 and M = 64.
CheckResult check_oracle_equivalence(bool quick = false);
/// 2. Empirical configuration distribution of a tiny chain vs the
///    enumerated effective-action Boltzmann distribution (total variation).
CheckResult check_stationarity(bool quick = false);
/// 3. Histogram -> tail fit -> exponent conversion on synthetic power-law
///    ensembles with planted d/z' in {2, 5, 12}, linear and nonlinear paths.
CheckResult check_exponent_recovery();
/// 4. Desk-scale sweep at L in {4, 6}: Binder crossing window, falling
///    d/z' trend, and the 1.79-vs-1.895 separation. Takes hours; only in
///    the full battery.
CheckResult check_griffiths_trend();
/// 5. Collapse optimizer on synthetic curves with planted (x_c, nu) and
///    the dynamical-exponent scan on planted z = 1 data.
CheckResult check_collapse_recovery();
/// 6. Bundled-schedule mapping at the pinned knot: beta = 2.49, Gamma = 1.37.
CheckResult check_schedule_mapping();
/// 7. Flux calibration on a zero-coupling biased device: broken before,
///    within tolerance after 20 bisection rounds.
CheckResult check_calibration_efficacy();
/// 8. Device field-sweep chi vs the fluctuation-dissipation value, plus the
///    peak-position extrapolation procedure over small sizes.
CheckResult check_device_pipeline(bool quick = false);

/// Checks 1-3 and 5-8 (quick sizes where applicable).
std::vector<CheckResult> quick_battery();
/// All eight checks at full acceptance sizes.
std::vector<CheckResult> full_battery();

}  // namespace gmsim

#endif
