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

#ifndef GMSIM_ANALYSIS_HPP
#define GMSIM_ANALYSIS_HPP

#include <string>
#include <vector>

namespace gmsim {

/// Spatial dimension entering d/z' conversions; the diluted Chimera graph
/// is quasi-two-dimensional.
inline constexpr double kSpatialDimension = 2.0;

/// Log-binned normalized density: sum_k P_k * width_k = 1 over the counted
/// (positive) samples.
struct Histogram {
    std::vector<double> edges;     // n_bins + 1, strictly increasing, > 0
    std::vector<double> density;
    std::vector<long> counts;
    long n_samples = 0;            // positive samples counted
    long n_excluded = 0;           // zero/negative samples dropped (reported)

    double center(std::size_t k) const;  // geometric bin center
};

Histogram build_histogram(const std::vector<double>& samples, int n_bins);

/// Fit range policy, serialized along with every SlopeFit so figure recipes
/// stay reproducible. start: start_factor times the peak-bin center.
/// stop: bins with density below density_floor are excluded
/// (1e-4 for QMC-style histograms, 1e-2 for device-style). Bins with fewer
/// than min_count entries are dropped as well.
struct TailFitPolicy {
    double start_factor = 0.8;
    double density_floor = 1e-4;
    long min_count = 2;

    static TailFitPolicy qmc() { return {0.8, 1e-4, 2}; }
    static TailFitPolicy device() { return {0.8, 1e-2, 2}; }
    std::string describe() const;
};

struct SlopeFit {
    double slope = 0;
    double slope_error = 0;
    double x_lo = 0, x_hi = 0;
    int n_points = 0;
    TailFitPolicy policy;
};

/// Weighted least squares on (ln x, ln P) over the policy's bin selection;
/// per-bin weights from multinomial count errors.
SlopeFit fit_tail_slope(const Histogram& hist, const TailFitPolicy& policy);

struct ExponentEstimate {
    double d_over_zprime = 0;
    double error = 0;
    std::string source;        // "linear" or "nonlinear"
    double control = 0;        // Gamma or s*, caller-filled
};

/// ln P(chi_loc) ~ -(d/z' + 1) ln chi_loc  =>  d/z' = -slope - 1.
ExponentEstimate dz_from_linear_slope(const SlopeFit& fit);
/// ln P(chi_nlloc) ~ -(d/3z' + 1) ln chi_nlloc  =>  d/z' = 3(-slope - 1).
ExponentEstimate dz_from_nonlinear_slope(const SlopeFit& fit);

/// One size's curve for collapse analysis.
struct CollapseCurve {
    int L = 0;
    std::vector<double> x;      // Gamma or s*
    std::vector<double> y;
    std::vector<double> err;
};

/// Rescaling x -> L^{1/nu} (x - x_c), y -> y * L^{y_power}. y_power = 0 for
/// the Binder ratio, -gamma/nu for susceptibility, +beta/nu for |m|.
struct CollapseSpec {
    double x_c = 0;
    double nu = 1;
    double y_power = 0;
};

/// Collapse quality: mean error-normalized squared deviation of each
/// rescaled point from the local-linear master curve built from the other
/// sizes. ~1 for a perfect collapse with faithful errors.
double collapse_quality(const std::vector<CollapseCurve>& curves, const CollapseSpec& spec);

struct ScalingFit {
    double x_c = 0, x_c_error = 0;
    double nu = 0, nu_error = 0;
    double y_power = 0, y_power_error = 0;  // only when optimized
    bool y_power_fitted = false;
    double quality = 0;                     // S at the optimum
    bool converged = true;
};

struct CollapseSearchBox {
    double x_c_lo = 0, x_c_hi = 0;
    double nu_lo = 0.1, nu_hi = 5.0;
    bool fit_y_power = false;
    double y_power_lo = -3.0, y_power_hi = 3.0;
};

/// Nelder-Mead minimization of collapse_quality over (x_c, nu[, y_power]),
/// parameter errors from the S_min + 1 contour.
ScalingFit optimize_collapse(const std::vector<CollapseCurve>& curves, const CollapseSearchBox& box);

struct LinearFit {
    double intercept = 0, intercept_error = 0;
    double slope = 0, slope_error = 0;
};

struct PointWithError {
    double x = 0, y = 0, err = 0;  // err = 0 means unit weight
};

/// Weighted straight-line fit; intercept is the x = 0 extrapolation.
LinearFit linear_extrapolate(const std::vector<PointWithError>& points);

struct BinderPoint {
    int L = 0;
    double beta = 0;
    double g = 0;
};

struct DynamicalZScan {
    double z_star = 0;
    std::vector<double> z_grid;
    std::vector<double> mse;
    std::vector<bool> concave;   // fitted a < 0 per z
    bool coarse_grid = false;    // warning flag: fewer than 5 z values
};

/// For each z: quadratic fit of ln g against ln(beta / L^z); returns the
/// MSE-minimizing z and the whole MSE curve.
DynamicalZScan scan_dynamical_z(const std::vector<BinderPoint>& points,
                                const std::vector<double>& z_grid);

struct SusceptibilityPair {
    double chi = 0;
    double chi_nl = 0;
};

/// Odd polynomial fit m ~ chi h - chi_nl h^3 (+ c5 h^5 with degree 5).
SusceptibilityPair fit_magnetization_curve(const std::vector<std::pair<double, double>>& points,
                                           int degree = 3);

}  // namespace gmsim

#endif
