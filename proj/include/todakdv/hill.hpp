#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"
#include "todakdv/floquet.hpp"
#include "todakdv/linalg.hpp"
#include "todakdv/profile.hpp"
#include "todakdv/quadrature.hpp"

namespace todakdv {

enum class HillSign { plus, minus };

/// -d^2/dx^2 + q(x) on the unit circle.
struct HillOperator {
    PeriodicProfile q;
    HillSign sign = HillSign::minus;
};

/// H_+ has q = -2 alpha - beta, H_- has q = -2 alpha + beta.
inline HillOperator build_hill(const PeriodicProfile& alpha, const PeriodicProfile& beta, HillSign sign)
{
    return {sign == HillSign::plus ? -2.0 * alpha - beta : -2.0 * alpha + beta, sign};
}

/// Same operator with the potential divided by four. This is the continuum
/// limit of the lattice edges: (lambda + 2) 4N^2 tends to 4 times the
/// spectrum of -d^2/dx^2 + q/4.
inline HillOperator lattice_scaled(const HillOperator& H) { return {0.25 * H.q, H.sign}; }

namespace detail {

struct GL4Tableau {
    std::array<double, 4> c{}, b{};
    std::array<std::array<double, 4>, 4> a{};
};

inline const GL4Tableau& gl4_tableau()
{
    static const GL4Tableau t = [] {
        GL4Tableau r;
        const GaussRule& g = gauss_legendre(4);
        for (int i = 0; i < 4; ++i) {
            r.c[i] = 0.5 * (1.0 + g.nodes[i]);
            r.b[i] = 0.5 * g.weights[i];
        }
        // sum_j a_ij c_j^{k-1} = c_i^k / k
        std::vector<double> V(16), rhs(16);
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) V[k * 4 + j] = std::pow(r.c[j], k);
        for (int k = 0; k < 4; ++k)
            for (int i = 0; i < 4; ++i) rhs[k * 4 + i] = std::pow(r.c[i], k + 1) / (k + 1);
        linalg::lu_solve(V, rhs, 4, 4);
        for (int j = 0; j < 4; ++j)
            for (int i = 0; i < 4; ++i) r.a[i][j] = rhs[j * 4 + i];
        return r;
    }();
    return t;
}

// Fundamental solution of y'' = (q - lambda) y over one period with the
// 4-stage Gauss-Legendre (order 8) method, n steps. With `variational`, also
// carries d/d lambda. Returns columns (y1, y1', z1, z1') and (y2, y2', z2, z2').
template <int D>
std::array<double, 2 * D> gl4_monodromy(const PeriodicProfile& q, double lambda, int n)
{
    static_assert(D == 2 || D == 4);
    const GL4Tableau& t = gl4_tableau();
    const double h = 1.0 / n;
    constexpr int S = 4 * D;
    // Y[d * 2 + col]
    std::array<double, 2 * D> Y{};
    Y[0 * 2 + 0] = 1.0;
    Y[1 * 2 + 1] = 1.0;

    std::vector<double> A(S * S), R(S * 2);
    for (int step = 0; step < n; ++step) {
        const double x0 = step * h;
        std::array<double, 4> w{};
        for (int i = 0; i < 4; ++i) w[i] = q(x0 + t.c[i] * h) - lambda;
        // B_i: y' = p, p' = w y; z' = r, r' = w z - y
        auto apply_B = [&](int i, const double* in, double* out, int col_stride) {
            out[0] = in[1 * col_stride];
            out[1 * col_stride] = w[i] * in[0];
            if constexpr (D == 4) {
                out[2 * col_stride] = in[3 * col_stride];
                out[3 * col_stride] = w[i] * in[2 * col_stride] - in[0];
            }
        };
        std::fill(A.begin(), A.end(), 0.0);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                const double f = -h * t.a[i][j];
                // block (i, j) = delta_ij I - h a_ij B_i
                auto at = [&](int r, int c) -> double& { return A[(i * D + r) * S + j * D + c]; };
                at(0, 1) += f;
                at(1, 0) += f * w[i];
                if constexpr (D == 4) {
                    at(2, 3) += f;
                    at(3, 2) += f * w[i];
                    at(3, 0) += -f;
                }
                if (i == j)
                    for (int r = 0; r < D; ++r) at(r, r) += 1.0;
            }
            for (int col = 0; col < 2; ++col) apply_B(i, &Y[col], &R[(i * D) * 2 + col], 2);
        }
        linalg::lu_solve(A, R, S, 2);
        for (int i = 0; i < 4; ++i)
            for (int r = 0; r < D; ++r)
                for (int col = 0; col < 2; ++col) Y[r * 2 + col] += h * t.b[i] * R[(i * D + r) * 2 + col];
    }
    return Y;
}

struct HillMonodromy {
    double m11, m12, m21, m22;
    double d11 = 0, d12 = 0, d21 = 0, d22 = 0;
    double error_estimate = 0.0;
};

template <int D>
HillMonodromy hill_monodromy(const PeriodicProfile& q, double lambda, double tol = 1e-13)
{
    const double omega = std::sqrt(std::abs(lambda) + q.sup_bound());
    int n = std::max(16, static_cast<int>(std::ceil(2.0 * omega)));
    auto coarse = gl4_monodromy<D>(q, lambda, n);
    double err = 0.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto fine = gl4_monodromy<D>(q, lambda, 2 * n);
        double scale = 1.0;
        err = 0.0;
        for (int i = 0; i < 2 * D; ++i) {
            scale = std::max(scale, std::abs(fine[i]));
            err = std::max(err, std::abs(fine[i] - coarse[i]) / 255.0);
        }
        if (err <= tol * scale) {
            HillMonodromy M{fine[0], fine[1], fine[2], fine[3]};
            if constexpr (D == 4) {
                M.d11 = fine[4];
                M.d12 = fine[5];
                M.d21 = fine[6];
                M.d22 = fine[7];
            }
            M.error_estimate = err;
            const double det = M.m11 * M.m22 - M.m12 * M.m21;
            if (std::abs(det - 1.0) > 1e-10 * scale * scale)
                throw NumericalFailure("Hill Wronskian deviates from 1 by " + std::to_string(std::abs(det - 1.0)) +
                                       " at lambda = " + std::to_string(lambda));
            return M;
        }
        coarse = fine;
        n *= 2;
    }
    throw NumericalFailure("Hill integrator tolerance not met at lambda = " + std::to_string(lambda) +
                           ", error estimate " + std::to_string(err));
}

} // namespace detail

/// Delta_H(lambda) = y1(1) + y2'(1).
inline double hill_discriminant(const HillOperator& H, double lambda)
{
    const auto M = detail::hill_monodromy<2>(H.q, lambda);
    return M.m11 + M.m22;
}

inline FloquetSample hill_floquet(const HillOperator& H, double lambda, bool with_slope)
{
    FloquetSample s;
    if (with_slope) {
        const auto M = detail::hill_monodromy<4>(H.q, lambda);
        s.delta = M.m11 + M.m22;
        s.slope = M.d11 + M.d22;
        s.excess = (M.m11 - M.m22) * (M.m11 - M.m22) + 4.0 * M.m12 * M.m21;
    } else {
        const auto M = detail::hill_monodromy<2>(H.q, lambda);
        s.delta = M.m11 + M.m22;
        s.excess = (M.m11 - M.m22) * (M.m11 - M.m22) + 4.0 * M.m12 * M.m21;
    }
    return s;
}

struct HillSpectrum {
    std::vector<double> combined;         // Galerkin, periodic and antiperiodic merged
    std::vector<double> combined_floquet; // zeros of Delta^2 - 4
    std::vector<double> periodic_only;
    double max_discrepancy = 0.0;
    int truncation = 0;
};

struct HillSpectrumOptions {
    int truncation = 0;     // Galerkin |m| <= K; 0 selects the default
    bool cross_check = true;
    double tolerance = 1e-8; // Galerkin vs Floquet, scaled by max(1, |mu| / 100)
};

namespace detail {

// Eigenvalues of the Galerkin block on e^{i pi m x}, |m| <= K, m = parity mod 2.
inline std::vector<double> galerkin_block(const PeriodicProfile& q, int K, int parity)
{
    std::vector<int> ms;
    for (int m = -K; m <= K; ++m)
        if (((m % 2) + 2) % 2 == parity) ms.push_back(m);
    const FourierList qh = q.fourier();
    linalg::DenseMatrix<std::complex<double>> H(ms.size());
    for (std::size_t r = 0; r < ms.size(); ++r) {
        for (std::size_t c = 0; c < ms.size(); ++c) {
            const int diff = ms[r] - ms[c];
            if (diff % 2 != 0) continue;
            auto it = qh.find(diff / 2);
            if (it != qh.end()) H(r, c) += it->second;
        }
        H(r, r) += std::numbers::pi * std::numbers::pi * ms[r] * ms[r];
    }
    return linalg::hermitian_eigenvalues(std::move(H));
}

inline std::vector<double> hill_floquet_roots(const HillOperator& H, std::size_t count)
{
    const std::size_t gaps = (count + 1) / 2; // gaps 1..gaps cover indices up to 2*gaps
    const double lo = -H.q.sup_bound() - 1.0;
    auto eval_slope = [&](double x) { return hill_floquet(H, x, true); };
    auto eval = [&](double x) { return hill_floquet(H, x, false); };

    std::vector<double> critical;
    const double ds = std::numbers::pi / 8.0;
    double s_prev = 0.0;
    double slope_prev = eval_slope(lo).slope;
    const std::size_t max_steps = 32 * (gaps + 4) + 256;
    for (std::size_t k = 1; critical.size() < gaps + 1; ++k) {
        if (k > max_steps) throw NumericalFailure("Hill critical point scan did not terminate");
        const double s = k * ds;
        const double slope = eval_slope(lo + s * s).slope;
        if ((slope > 0.0) != (slope_prev > 0.0)) {
            const double a = lo + s_prev * s_prev, b = lo + s * s;
            critical.push_back(refine_critical(eval_slope, a, b, slope_prev > 0.0));
        }
        s_prev = s;
        slope_prev = slope;
    }
    std::vector<double> roots = band_edges(eval, lo, critical);
    std::sort(roots.begin(), roots.end());
    roots.resize(count);
    return roots;
}

} // namespace detail

inline int default_truncation(const HillOperator& H, std::size_t count)
{
    const double top = 2.0 * std::numbers::pi * std::ceil(count / 2.0);
    const double lambda_max = top * top + H.q.sup_bound();
    return std::max(64, 4 * static_cast<int>(std::ceil(std::sqrt(lambda_max) / std::numbers::pi)));
}

/// First `count` combined and periodic eigenvalues.
inline HillSpectrum hill_spectrum(const HillOperator& H, std::size_t count, const HillSpectrumOptions& opt = {})
{
    if (count < 1) throw InvalidInput("hill_spectrum needs count >= 1");
    HillSpectrum s;
    const int K = opt.truncation > 0 ? opt.truncation : default_truncation(H, count);
    s.truncation = K;
    std::vector<double> even = detail::galerkin_block(H.q, K, 0);
    std::vector<double> odd = detail::galerkin_block(H.q, K, 1);
    std::vector<double> all = even;
    all.insert(all.end(), odd.begin(), odd.end());
    std::sort(all.begin(), all.end());
    const double ceiling = 0.95 * std::pow(std::numbers::pi * K, 2);
    if (all.size() < count || even.size() < count || all[count - 1] > ceiling || even[count - 1] > ceiling)
        throw InvalidInput("Galerkin truncation K = " + std::to_string(K) + " too small for " +
                           std::to_string(count) + " eigenvalues; increase K");
    s.combined.assign(all.begin(), all.begin() + count);
    s.periodic_only.assign(even.begin(), even.begin() + count);

    if (opt.cross_check) {
        s.combined_floquet = detail::hill_floquet_roots(H, count);
        for (std::size_t j = 0; j < count; ++j) {
            const double d = std::abs(s.combined[j] - s.combined_floquet[j]);
            s.max_discrepancy = std::max(s.max_discrepancy, d);
            if (d > opt.tolerance * std::max(1.0, std::abs(s.combined[j]) / 100.0))
                throw NumericalFailure("Galerkin and Floquet eigenvalue " + std::to_string(j) + " disagree by " +
                                       std::to_string(d));
        }
    }
    return s;
}

enum class ScalingMode { A, B };

/// Mode A: periodic eigenvalues. Mode B: four times the combined spectrum.
inline std::vector<double> scaled_edge_values(const HillSpectrum& s, ScalingMode mode, std::size_t count)
{
    const std::vector<double>& src = mode == ScalingMode::A ? s.periodic_only : s.combined;
    if (count > src.size())
        throw InvalidInput("requested " + std::to_string(count) + " edge values, only " +
                           std::to_string(src.size()) + " available");
    std::vector<double> v(src.begin(), src.begin() + count);
    if (mode == ScalingMode::B)
        for (double& x : v) x *= 4.0;
    return v;
}

/// Free combined eigenvalue mu_j^0 = (pi [(j+1)/2])^2.
inline double free_combined(std::size_t j)
{
    const double p = std::numbers::pi * static_cast<double>((j + 1) / 2);
    return p * p;
}

inline double free_discriminant(double lambda)
{
    return lambda >= 0.0 ? 2.0 * std::cos(std::sqrt(lambda)) : 2.0 * std::cosh(std::sqrt(-lambda));
}

struct ProductResidual {
    double residual = 0.0;
    bool shifted = false;
    double lambda = 0.0; // evaluation point actually used
};

/// Ratio form of the Hill product identity with the first J combined eigenvalues:
/// Delta^2 - 4 against (Delta_0^2 - 4) prod_j (mu_j - lambda) / (mu_j^0 - lambda).
inline ProductResidual hill_product_residual(const HillOperator& H, double lambda, const HillSpectrum& s,
                                             std::size_t J = 0)
{
    if (J == 0) J = s.combined.size();
    if (J < 40 || J > s.combined.size())
        throw InvalidInput("product identity needs 40 <= J <= available eigenvalues, got J = " + std::to_string(J));
    ProductResidual r;
    for (std::size_t j = 0; j < J; ++j)
        if (std::abs(lambda - free_combined(j)) < 1e-12 * std::max(1.0, std::abs(lambda))) {
            lambda += 1e-9;
            r.shifted = true;
            break;
        }
    r.lambda = lambda;
    const double d = hill_discriminant(H, lambda);
    const double lhs = d * d - 4.0;
    const double d0 = free_discriminant(lambda);
    double ratio = 1.0;
    for (std::size_t j = 0; j < J; ++j) ratio *= (s.combined[j] - lambda) / (free_combined(j) - lambda);
    const double rhs = (d0 * d0 - 4.0) * ratio;
    r.residual = std::abs(lhs - rhs) / (1.0 + std::abs(lhs));
    return r;
}

} // namespace todakdv
