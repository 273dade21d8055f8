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

#include "gmsim/oracle.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>

#include "gmsim/errors.hpp"

namespace gmsim {

namespace {

constexpr int kMaxDenseSites = 12;
constexpr int kMaxFourthDim = 32;

inline double spin_of_bit(std::uint32_t state, int i) { return (state >> i) & 1u ? -1.0 : 1.0; }

// Diagonal of the z-part: sum_e J s s + sum_i c_i s.
std::vector<double> z_diagonal(const DisorderInstance& inst, const std::vector<double>& fields) {
    const int N = inst.num_sites();
    const std::uint32_t dim = 1u << N;
    std::vector<double> diag(dim, 0.0);
    for (std::uint32_t s = 0; s < dim; ++s) {
        double e = 0;
        for (std::size_t k = 0; k < inst.graph.edges.size(); ++k) {
            const auto [a, b] = inst.graph.edges[k];
            e += inst.couplings[k] * spin_of_bit(s, a) * spin_of_bit(s, b);
        }
        if (!fields.empty())
            for (int i = 0; i < N; ++i) e += fields[i] * spin_of_bit(s, i);
        diag[s] = e;
    }
    return diag;
}

struct Spectrum {
    Eigen::VectorXd energies;   // ascending
    Eigen::MatrixXd vectors;    // columns are eigenvectors in the z basis
    Eigen::VectorXd weights;    // exp(-beta (E - E0))
    double z = 0;               // sum of weights
};

Spectrum diagonalize(const DisorderInstance& inst, double beta, double gamma,
                     const std::vector<double>& fields) {
    const int N = inst.num_sites();
    if (N > kMaxDenseSites)
        throw CapabilityError("exact_thermal_moments: N = " + std::to_string(N) + " exceeds dense limit " +
                              std::to_string(kMaxDenseSites));
    if (!fields.empty() && static_cast<int>(fields.size()) != N)
        throw ValidationError("oracle: fields size mismatch");
    if (gamma < 0) throw ValidationError("oracle: Gamma must be >= 0");
    const std::uint32_t dim = 1u << N;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    std::vector<double> diag = z_diagonal(inst, fields);
    for (std::uint32_t s = 0; s < dim; ++s) {
        H(s, s) = diag[s];
        for (int i = 0; i < N; ++i) H(s ^ (1u << i), s) -= gamma;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    Spectrum sp;
    sp.energies = solver.eigenvalues();
    sp.vectors = solver.eigenvectors();
    const double e0 = sp.energies(0);
    sp.weights = (-(sp.energies.array() - e0) * beta).exp();
    sp.z = sp.weights.sum();
    return sp;
}

// int_0^beta (beta - u) e^{-u*delta} du, assembled so that both e^{-beta Ea}
// and e^{-beta Eb} stay bounded: wa * K(delta) = [wa (beta delta - 1) + wb] / delta^2.
inline double pair_kernel(double beta, double wa, double wb, double delta) {
    if (std::abs(beta * delta) < 1e-8) return wa * beta * beta * 0.5;
    return (wa * (beta * delta - 1.0) + wb) / (delta * delta);
}

// Time-averaged second moment of a diagonal observable O given its
// eigenbasis matrix representation Om: (2 / (beta^2 Z)) sum_ab Om^2 * kernel.
double averaged_second_moment(const Spectrum& sp, const Eigen::MatrixXd& Om, double beta) {
    const Eigen::Index dim = sp.energies.size();
    double sum = 0;
    for (Eigen::Index a = 0; a < dim; ++a) {
        const double ea = sp.energies(a), wa = sp.weights(a);
        for (Eigen::Index b = 0; b < dim; ++b) {
            const double v = Om(a, b);
            if (v == 0) continue;
            sum += v * v * pair_kernel(beta, wa, sp.weights(b), sp.energies(b) - ea);
        }
    }
    return 2.0 * sum / (beta * beta * sp.z);
}

// Divided difference of f(x) = e^{-beta x} over the given nodes (any order,
// repeats allowed). Near-degenerate node sets use the complete homogeneous
// symmetric series; well-separated sets use the standard recurrence on
// sorted nodes so denominators stay large.
double dd_exp(std::vector<double> nodes, double beta) {
    std::sort(nodes.begin(), nodes.end());
    const int n = static_cast<int>(nodes.size()) - 1;
    const double spread = nodes.back() - nodes.front();
    if (beta * spread <= 4.0) {
        double c = 0;
        for (double x : nodes) c += x;
        c /= nodes.size();
        // f[x0..xn] = e^{-beta c} sum_k (-beta)^{n+k} h_k(x - c) / (n+k)!
        std::vector<long double> h(nodes.size(), 0.0L);  // h[j] = h_k over first j+1 vars
        long double sum = 0.0L, coeff = 1.0L;            // coeff = (-beta)^{n+k}/(n+k)!
        for (int p = 1; p <= n; ++p) coeff *= (-static_cast<long double>(beta)) / p;
        std::vector<long double> y(nodes.size());
        for (std::size_t j = 0; j < nodes.size(); ++j) y[j] = nodes[j] - c;
        // k = 0 term
        sum += coeff;
        std::fill(h.begin(), h.end(), 1.0L);
        for (int k = 1; k <= 64; ++k) {
            coeff *= (-static_cast<long double>(beta)) / (n + k);
            // update h to order k: h[j] = h_k(y_0..y_j) = h_k(y_0..y_{j-1}) + y_j h_{k-1}(y_0..y_j)
            std::vector<long double> hk(nodes.size());
            hk[0] = h[0] * y[0];  // h_k of a single variable = y^k
            for (std::size_t j = 1; j < nodes.size(); ++j) hk[j] = hk[j - 1] + y[j] * h[j];
            h.swap(hk);
            const long double term = coeff * h.back();
            sum += term;
            if (std::abs(static_cast<double>(term)) < 1e-25 * std::abs(static_cast<double>(sum)) && k > 4)
                break;
        }
        return std::exp(-beta * c) * static_cast<double>(sum);
    }
    std::vector<double> lo(nodes.begin(), nodes.end() - 1);
    std::vector<double> hi(nodes.begin() + 1, nodes.end());
    return (dd_exp(std::move(hi), beta) - dd_exp(std::move(lo), beta)) / spread;
}

// Ordered four-point integral: gaps carry energies (Ea, Eb, Ec, Ed, Ea).
inline double four_point_integral(double ea, double eb, double ec, double ed, double beta, double e0) {
    return dd_exp({ea - e0, eb - e0, ec - e0, ed - e0, ea - e0}, beta);
}

// Time-averaged fourth moment of a diagonal observable.
double averaged_fourth_moment(const Spectrum& sp, const Eigen::MatrixXd& Om, double beta) {
    const Eigen::Index dim = sp.energies.size();
    const double e0 = sp.energies(0);
    long double sum = 0;
    for (Eigen::Index a = 0; a < dim; ++a)
        for (Eigen::Index b = 0; b < dim; ++b) {
            if (std::abs(Om(a, b)) < 1e-14) continue;
            for (Eigen::Index c = 0; c < dim; ++c) {
                const double p2 = Om(a, b) * Om(b, c);
                if (std::abs(p2) < 1e-14) continue;
                for (Eigen::Index d = 0; d < dim; ++d) {
                    const double p = p2 * Om(c, d) * Om(d, a);
                    if (std::abs(p) < 1e-16) continue;
                    sum += p * four_point_integral(sp.energies(a), sp.energies(b), sp.energies(c),
                                                   sp.energies(d), beta, e0);
                }
            }
        }
    const double b4 = beta * beta * beta * beta;
    return 24.0 * static_cast<double>(sum) / (b4 * sp.z);
}

Eigen::MatrixXd to_eigenbasis(const Spectrum& sp, const Eigen::VectorXd& diag_op) {
    return sp.vectors.transpose() * diag_op.asDiagonal() * sp.vectors;
}

}  // namespace

ExactMoments exact_thermal_moments(const DisorderInstance& instance, double beta, double gamma,
                                   const std::vector<double>& fields, bool with_fourth) {
    if (beta <= 0) throw ValidationError("oracle: beta must be > 0");
    const int N = instance.num_sites();
    const std::uint32_t dim = 1u << N;
    Spectrum sp = diagonalize(instance, beta, gamma, fields);

    Eigen::VectorXd m_diag(dim);
    for (std::uint32_t s = 0; s < dim; ++s)
        m_diag(s) = (N - 2.0 * std::popcount(s)) / static_cast<double>(N);

    ExactMoments out;
    out.log_partition = std::log(sp.z);
    const Eigen::MatrixXd Om = to_eigenbasis(sp, m_diag);
    out.m2 = averaged_second_moment(sp, Om, beta);
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(dim); ++a)
        out.mean_m += sp.weights(a) * Om(a, a);
    out.mean_m /= sp.z;

    out.chi_loc.resize(N);
    Eigen::VectorXd site_diag(dim);
    for (int i = 0; i < N; ++i) {
        for (std::uint32_t s = 0; s < dim; ++s) site_diag(s) = spin_of_bit(s, i);
        out.chi_loc[i] = averaged_second_moment(sp, to_eigenbasis(sp, site_diag), beta);
    }

    if (with_fourth) {
        if (dim > kMaxFourthDim)
            throw CapabilityError("exact_thermal_moments: fourth moments need 2^N <= " +
                                  std::to_string(kMaxFourthDim));
        out.m4 = averaged_fourth_moment(sp, Om, beta);
        std::vector<double> mi4(N);
        for (int i = 0; i < N; ++i) {
            for (std::uint32_t s = 0; s < dim; ++s) site_diag(s) = spin_of_bit(s, i);
            mi4[i] = averaged_fourth_moment(sp, to_eigenbasis(sp, site_diag), beta);
        }
        out.mi4 = std::move(mi4);
    }
    return out;
}

ExactMoments classical_limit_moments(const DisorderInstance& instance, double beta,
                                     const std::vector<double>& fields) {
    if (beta <= 0) throw ValidationError("oracle: beta must be > 0");
    const int N = instance.num_sites();
    if (N > 20)
        throw CapabilityError("classical_limit_moments: N = " + std::to_string(N) + " exceeds enumeration limit 20");
    const std::uint32_t dim = 1u << N;
    std::vector<double> diag = z_diagonal(instance, fields);
    double e0 = diag[0];
    for (double e : diag) e0 = std::min(e0, e);

    double z = 0, m1 = 0, mabs = 0, m2 = 0, m4 = 0;
    for (std::uint32_t s = 0; s < dim; ++s) {
        const double w = std::exp(-beta * (diag[s] - e0));
        const double m = (N - 2.0 * std::popcount(s)) / static_cast<double>(N);
        z += w;
        m1 += w * m;
        mabs += w * std::abs(m);
        m2 += w * m * m;
        m4 += w * m * m * m * m;
    }
    ExactMoments out;
    out.log_partition = std::log(z);
    out.mean_m = m1 / z;
    out.m_abs = mabs / z;
    out.m2 = m2 / z;
    out.m4 = m4 / z;
    out.chi_loc.assign(N, 1.0);
    out.mi4 = std::vector<double>(N, 1.0);
    return out;
}

double free_spin_correlator(double beta, double gamma, int M) {
    if (gamma <= 0) throw ValidationError("free_spin_correlator: Gamma must be > 0");
    if (M < 2) throw ValidationError("free_spin_correlator: M must be >= 2");
    // Transfer matrix [[e^k, e^-k], [e^-k, e^k]] with k = (1/2) ln coth(beta Gamma / M):
    // eigenvalues l+ = 2 cosh k, l- = 2 sinh k; s^z maps between the sectors, so
    // C(u) = (l+^{M-u} l-^u + l-^{M-u} l+^u) / (l+^M + l-^M) and <m_i^2> = (1/M) sum_u C(u).
    const double x = beta * gamma / M;
    const double k = -0.5 * std::log(std::tanh(x));
    const double lp = 2.0 * std::cosh(k), lm = 2.0 * std::sinh(k);
    const double r = lm / lp;  // in (0,1)
    const double rm = std::pow(r, M);
    double sum = 0;
    for (int u = 0; u < M; ++u) sum += std::pow(r, u) + std::pow(r, M - u);
    return sum / (M * (1.0 + rm));
}

double single_spin_mean_z(double c, double gamma, double beta) {
    const double e = std::sqrt(c * c + gamma * gamma);
    if (e == 0) return 0;
    return -(c / e) * std::tanh(beta * e);
}

std::vector<double> thermal_z_distribution(const DisorderInstance& instance, double beta,
                                           double gamma, const std::vector<double>& fields) {
    Spectrum sp = diagonalize(instance, beta, gamma, fields);
    const Eigen::Index dim = sp.energies.size();
    std::vector<double> p(dim, 0.0);
    for (Eigen::Index s = 0; s < dim; ++s) {
        double acc = 0;
        for (Eigen::Index a = 0; a < dim; ++a) {
            const double v = sp.vectors(s, a);
            acc += sp.weights(a) * v * v;
        }
        p[s] = acc / sp.z;
    }
    return p;
}

}  // namespace gmsim
