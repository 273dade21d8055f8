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

#include "gmsim/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "gmsim/errors.hpp"

namespace gmsim {

double Histogram::center(std::size_t k) const { return std::sqrt(edges[k] * edges[k + 1]); }

Histogram build_histogram(const std::vector<double>& samples, int n_bins) {
    if (n_bins < 1) throw ValidationError("build_histogram: n_bins must be >= 1");
    Histogram h;
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    for (double s : samples) {
        if (s <= 0 || !std::isfinite(s)) {
            ++h.n_excluded;
            continue;
        }
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        ++h.n_samples;
    }
    if (h.n_samples == 0) throw ValidationError("build_histogram: no positive samples");
    if (lo == hi) {
        // all mass at one value: widen so the single bin has finite width
        lo *= 0.5;
        hi *= 2.0;
    }
    h.edges.resize(n_bins + 1);
    const double lf = std::log(lo), ratio = (std::log(hi) - lf) / n_bins;
    for (int k = 0; k <= n_bins; ++k) h.edges[k] = std::exp(lf + ratio * k);
    h.edges.front() = lo;
    h.edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double s : samples) {
        if (s <= 0 || !std::isfinite(s)) continue;
        int k = static_cast<int>((std::log(s) - lf) / ratio);
        k = std::clamp(k, 0, n_bins - 1);
        ++h.counts[k];
    }
    h.density.resize(n_bins);
    for (int k = 0; k < n_bins; ++k)
        h.density[k] = h.counts[k] / (static_cast<double>(h.n_samples) * (h.edges[k + 1] - h.edges[k]));
    return h;
}

std::string TailFitPolicy::describe() const {
    std::ostringstream os;
    os << "start_factor=" << start_factor << ",density_floor=" << density_floor
       << ",min_count=" << min_count;
    return os.str();
}

namespace {

// Weighted straight-line fit y = a + b x; weights w = 1/sigma^2.
struct LineFitResult {
    double a = 0, b = 0, a_err = 0, b_err = 0;
};

LineFitResult weighted_line_fit(const std::vector<double>& x, const std::vector<double>& y,
                                const std::vector<double>& w) {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
        sxx += w[i] * x[i] * x[i];
        sxy += w[i] * x[i] * y[i];
    }
    const double det = sw * sxx - sx * sx;
    if (det <= 0 || !std::isfinite(det)) throw ValidationError("line fit: singular design");
    LineFitResult r;
    r.b = (sw * sxy - sx * sy) / det;
    r.a = (sxx * sy - sx * sxy) / det;
    r.a_err = std::sqrt(sxx / det);
    r.b_err = std::sqrt(sw / det);
    return r;
}

}  // namespace

SlopeFit fit_tail_slope(const Histogram& hist, const TailFitPolicy& policy) {
    const std::size_t n = hist.density.size();
    std::size_t peak = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (hist.density[k] > hist.density[peak]) peak = k;
    const double x_start = policy.start_factor * hist.center(peak);

    std::vector<double> lx, ly, w;
    double x_lo = 0, x_hi = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (hist.center(k) < x_start) continue;
        if (hist.counts[k] < policy.min_count) continue;
        if (hist.density[k] < policy.density_floor) continue;
        lx.push_back(std::log(hist.center(k)));
        ly.push_back(std::log(hist.density[k]));
        // multinomial: sigma_lnP ~ 1/sqrt(count)
        w.push_back(static_cast<double>(hist.counts[k]));
        if (x_lo == 0) x_lo = hist.edges[k];
        x_hi = hist.edges[k + 1];
    }
    if (lx.size() < 3) throw ValidationError("fit_tail_slope: fewer than 3 usable bins");
    LineFitResult line = weighted_line_fit(lx, ly, w);
    SlopeFit fit;
    fit.slope = line.b;
    fit.slope_error = line.b_err;
    fit.x_lo = x_lo;
    fit.x_hi = x_hi;
    fit.n_points = static_cast<int>(lx.size());
    fit.policy = policy;
    return fit;
}

ExponentEstimate dz_from_linear_slope(const SlopeFit& fit) {
    ExponentEstimate est;
    est.d_over_zprime = -fit.slope - 1.0;
    est.error = fit.slope_error;
    est.source = "linear";
    return est;
}

ExponentEstimate dz_from_nonlinear_slope(const SlopeFit& fit) {
    ExponentEstimate est;
    est.d_over_zprime = 3.0 * (-fit.slope - 1.0);
    est.error = 3.0 * fit.slope_error;
    est.source = "nonlinear";
    return est;
}

namespace {

struct RescaledPoint {
    double x, y, w;  // w = 1/sigma^2
    int curve;
};

std::vector<RescaledPoint> rescale(const std::vector<CollapseCurve>& curves,
                                   const CollapseSpec& spec) {
    std::vector<RescaledPoint> pts;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        const auto& cv = curves[c];
        const double xs = std::pow(cv.L, 1.0 / spec.nu);
        const double ys = std::pow(cv.L, spec.y_power);
        for (std::size_t i = 0; i < cv.x.size(); ++i) {
            const double sigma = (i < cv.err.size() && cv.err[i] > 0) ? cv.err[i] * ys : 1.0;
            pts.push_back({xs * (cv.x[i] - spec.x_c), cv.y[i] * ys, 1.0 / (sigma * sigma),
                           static_cast<int>(c)});
        }
    }
    return pts;
}

}  // namespace

double collapse_quality(const std::vector<CollapseCurve>& curves, const CollapseSpec& spec) {
    if (curves.size() < 2) throw ValidationError("collapse_quality: need at least 2 sizes");
    if (spec.nu <= 0) throw ValidationError("collapse_quality: nu must be > 0");
    std::vector<RescaledPoint> pts = rescale(curves, spec);

    std::vector<double> xs;
    xs.reserve(pts.size());
    for (const auto& p : pts) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    std::vector<double> gaps;
    for (std::size_t i = 1; i < xs.size(); ++i) gaps.push_back(xs[i] - xs[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    const double bandwidth = 1.5 * std::max(gaps[gaps.size() / 2], 1e-12);
    if (xs.back() - xs.front() < 1e-12)
        throw ValidationError("collapse_quality: degenerate x-range after rescaling");

    double s = 0;
    int used = 0;
    for (const auto& p : pts) {
        // local linear master curve from the other curves' points
        double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
        int nn = 0;
        for (const auto& q : pts) {
            if (q.curve == p.curve) continue;
            if (std::abs(q.x - p.x) > bandwidth) continue;
            sw += q.w;
            sx += q.w * q.x;
            sy += q.w * q.y;
            sxx += q.w * q.x * q.x;
            sxy += q.w * q.x * q.y;
            ++nn;
        }
        if (nn < 2) continue;
        const double det = sw * sxx - sx * sx;
        double yhat, var_yhat;
        if (det > 1e-12 * sw * sxx) {
            const double b = (sw * sxy - sx * sy) / det;
            const double a = (sxx * sy - sx * sxy) / det;
            yhat = a + b * p.x;
            var_yhat = (sxx - 2.0 * p.x * sx + p.x * p.x * sw) / det;
        } else {
            yhat = sy / sw;  // collinear x's: weighted mean
            var_yhat = 1.0 / sw;
        }
        const double var = 1.0 / p.w + var_yhat;
        s += (p.y - yhat) * (p.y - yhat) / var;
        ++used;
    }
    if (used == 0) throw ValidationError("collapse_quality: no overlapping points between sizes");
    return s / used;
}

namespace {

// Deterministic Nelder-Mead; good enough for 2-3 smooth parameters.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> start, std::vector<double> step,
                                int max_iter, bool* converged) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> simplex(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += step[i];
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = f(simplex[i]);

    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(n + 1);
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> sx(n + 1);
        std::vector<double> sf(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            sx[i] = simplex[order[i]];
            sf[i] = fv[order[i]];
        }
        simplex = sx;
        fv = sf;
        if (std::abs(fv[n] - fv[0]) < 1e-10 * (1.0 + std::abs(fv[0]))) {
            if (converged) *converged = true;
            return simplex[0];
        }
        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;
        auto blend = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t j = 0; j < n; ++j) p[j] = centroid[j] + t * (centroid[j] - simplex[n][j]);
            return p;
        };
        std::vector<double> xr = blend(1.0);
        const double fr = f(xr);
        if (fr < fv[0]) {
            std::vector<double> xe = blend(2.0);
            const double fe = f(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            std::vector<double> xc = blend(fr < fv[n] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 0; j < n; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    fv[i] = f(simplex[i]);
                }
            }
        }
    }
    if (converged) *converged = false;
    return simplex[0];
}

// Half-width of the S = S_min + 1 interval along one parameter.
double contour_halfwidth(const std::function<double(double)>& s_of_theta, double theta0,
                         double s_min, double scale) {
    auto cross = [&](double dir) {
        double lo = 0, hi = scale;
        // expand until we bracket S_min + 1
        for (int i = 0; i < 40 && s_of_theta(theta0 + dir * hi) < s_min + 1.0; ++i) hi *= 1.7;
        if (s_of_theta(theta0 + dir * hi) < s_min + 1.0) return hi;  // flat: report the reach
        for (int i = 0; i < 50; ++i) {
            const double mid = 0.5 * (lo + hi);
            (s_of_theta(theta0 + dir * mid) < s_min + 1.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    return 0.5 * (cross(+1.0) + cross(-1.0));
}

}  // namespace

ScalingFit optimize_collapse(const std::vector<CollapseCurve>& curves, const CollapseSearchBox& box) {
    auto clamp_spec = [&](const std::vector<double>& p) {
        CollapseSpec spec;
        spec.x_c = std::clamp(p[0], box.x_c_lo, box.x_c_hi);
        spec.nu = std::clamp(p[1], std::max(1e-3, box.nu_lo), box.nu_hi);
        if (box.fit_y_power) spec.y_power = std::clamp(p[2], box.y_power_lo, box.y_power_hi);
        return spec;
    };
    auto objective = [&](const std::vector<double>& p) {
        try {
            return collapse_quality(curves, clamp_spec(p));
        } catch (const ValidationError&) {
            return 1e12;
        }
    };

    std::vector<double> start = {0.5 * (box.x_c_lo + box.x_c_hi), 0.5 * (box.nu_lo + box.nu_hi)};
    std::vector<double> step = {0.1 * (box.x_c_hi - box.x_c_lo), 0.1 * (box.nu_hi - box.nu_lo)};
    if (box.fit_y_power) {
        start.push_back(0.5 * (box.y_power_lo + box.y_power_hi));
        step.push_back(0.1 * (box.y_power_hi - box.y_power_lo));
    }
    bool converged = false;
    std::vector<double> best = nelder_mead(objective, start, step, 500, &converged);
    // restart from the first optimum; cheap insurance omitted — single restart
    best = nelder_mead(objective, best, step, 500, &converged);

    ScalingFit fit;
    CollapseSpec spec = clamp_spec(best);
    fit.x_c = spec.x_c;
    fit.nu = spec.nu;
    fit.y_power = spec.y_power;
    fit.y_power_fitted = box.fit_y_power;
    fit.quality = objective(best);
    fit.converged = converged;

    const double s_min = fit.quality;
    fit.x_c_error = contour_halfwidth(
        [&](double v) {
            auto p = best;
            p[0] = v;
            return objective(p);
        },
        best[0], s_min, 0.05 * (box.x_c_hi - box.x_c_lo) + 1e-6);
    fit.nu_error = contour_halfwidth(
        [&](double v) {
            auto p = best;
            p[1] = v;
            return objective(p);
        },
        best[1], s_min, 0.05 * (box.nu_hi - box.nu_lo) + 1e-6);
    if (box.fit_y_power)
        fit.y_power_error = contour_halfwidth(
            [&](double v) {
                auto p = best;
                p[2] = v;
                return objective(p);
            },
            best[2], s_min, 0.05 * (box.y_power_hi - box.y_power_lo) + 1e-6);
    return fit;
}

LinearFit linear_extrapolate(const std::vector<PointWithError>& points) {
    if (points.size() < 2) throw ValidationError("linear_extrapolate: need at least 2 points");
    std::vector<double> x, y, w;
    for (const auto& p : points) {
        x.push_back(p.x);
        y.push_back(p.y);
        w.push_back(p.err > 0 ? 1.0 / (p.err * p.err) : 1.0);
    }
    LineFitResult line = weighted_line_fit(x, y, w);
    LinearFit fit;
    fit.intercept = line.a;
    fit.intercept_error = line.a_err;
    fit.slope = line.b;
    fit.slope_error = line.b_err;
    return fit;
}

DynamicalZScan scan_dynamical_z(const std::vector<BinderPoint>& points,
                                const std::vector<double>& z_grid) {
    if (points.size() < 3) throw ValidationError("scan_dynamical_z: need at least 3 points");
    if (z_grid.empty()) throw ValidationError("scan_dynamical_z: empty z grid");
    DynamicalZScan scan;
    scan.z_grid = z_grid;
    scan.coarse_grid = z_grid.size() < 5;
    double best = std::numeric_limits<double>::infinity();
    for (double z : z_grid) {
        Eigen::MatrixXd A(points.size(), 3);
        Eigen::VectorXd b(points.size());
        bool usable = true;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].g <= 0 || points[i].beta <= 0 || points[i].L <= 0) {
                usable = false;
                break;
            }
            const double x = std::log(points[i].beta / std::pow(points[i].L, z));
            A(i, 0) = x * x;
            A(i, 1) = x;
            A(i, 2) = 1.0;
            b(i) = std::log(points[i].g);
        }
        if (!usable) throw ValidationError("scan_dynamical_z: g, beta, L must be positive");
        Eigen::Vector3d coeff = (A.transpose() * A).ldlt().solve(A.transpose() * b);
        const double mse = (A * coeff - b).squaredNorm() / points.size();
        scan.mse.push_back(mse);
        scan.concave.push_back(coeff(0) < 0);
        if (mse < best) {
            best = mse;
            scan.z_star = z;
        }
    }
    return scan;
}

SusceptibilityPair fit_magnetization_curve(const std::vector<std::pair<double, double>>& points,
                                           int degree) {
    if (degree != 3 && degree != 5) throw ValidationError("fit_magnetization_curve: degree must be 3 or 5");
    if (points.size() < 4) throw ValidationError("fit_magnetization_curve: need at least 4 field values");
    const int ncol = degree == 3 ? 2 : 3;
    Eigen::MatrixXd A(points.size(), ncol);
    Eigen::VectorXd b(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double h = points[i].first;
        A(i, 0) = h;
        A(i, 1) = h * h * h;
        if (ncol == 3) A(i, 2) = h * h * h * h * h;
        b(i) = points[i].second;
    }
    Eigen::MatrixXd gram = A.transpose() * A;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible()) throw ValidationError("fit_magnetization_curve: rank-deficient design");
    Eigen::VectorXd coeff = lu.solve(A.transpose() * b);
    SusceptibilityPair out;
    out.chi = coeff(0);
    out.chi_nl = -coeff(1);
    return out;
}

}  // namespace gmsim
