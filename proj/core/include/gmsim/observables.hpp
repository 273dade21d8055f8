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

#ifndef GMSIM_OBSERVABLES_HPP
#define GMSIM_OBSERVABLES_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "gmsim/qmc.hpp"

namespace gmsim {

/// Disorder-averaged estimate with a delete-one jackknife error over
/// instances.
struct EnsembleEstimate {
    double value = 0;
    double error = 0;
    int n_instances = 0;
    double beta = 0;
    double gamma = 0;
    int L = 0;
};

/// Mean and delete-one jackknife stderr of per-instance values.
std::pair<double, double> jackknife_mean(const std::vector<double>& per_instance);

/// Bootstrap stderr of the mean (cross-check path).
double bootstrap_mean_stderr(const std::vector<double>& per_instance, int n_resamples,
                             std::uint64_t seed);

/// Binder ratio: disorder average of (1/2)(3 - <m^4>/<m^2>^2) per instance.
struct BinderEstimate {
    EnsembleEstimate g;
    double minus_log_1mg = 0;   // -ln(1 - g), the resolution-friendly scale
    bool log_defined = false;   // false when g >= 1 within rounding
};
BinderEstimate binder_ratio(const std::vector<MomentRecord>& records);

/// beta * N * [<m^2>].
EnsembleEstimate global_susceptibility(const std::vector<MomentRecord>& records, double beta, int N);

/// Per-site (chi_loc, chi_nlloc) = (<m_i^2>, -(<m_i^4> - 3 <m_i^2>^2)).
std::vector<std::pair<double, double>> local_susceptibilities(const MomentRecord& record);

/// Histogram-stage global pair per instance: (chi, chi_nl) = (<m^2>, -(<m^4> - 3 <m^2>^2)).
/// Distinct from global_susceptibility: no beta*N prefactor (the two uses
/// carry different normalizations and both are needed).
std::pair<double, double> global_nl_susceptibility(const MomentRecord& record);

}  // namespace gmsim

#endif
