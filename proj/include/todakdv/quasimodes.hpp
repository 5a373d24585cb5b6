#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"
#include "todakdv/jacobi.hpp"
#include "todakdv/profile.hpp"
#include "todakdv/quadrature.hpp"

namespace todakdv {

struct ThetaContext {
    int N = 0;
    double hbar = 0.0; // 1 / (4 pi N)
    int n_max = 3;
};

inline ThetaContext make_theta_context(int N)
{
    if (N < 1) throw InvalidInput("theta context needs N >= 1");
    ThetaContext c;
    c.N = N;
    c.hbar = 1.0 / (4.0 * std::numbers::pi * N);
    c.n_max = std::max(3, static_cast<int>(std::ceil(std::sqrt(18.0 * std::numbers::ln10 / (2.0 * std::numbers::pi * N)))) + 1);
    return c;
}

namespace detail {

inline void check_theta_range(const ThetaContext& ctx, double y)
{
    // dropped lattice terms sit at distance >= n_max - |y| from the peak
    const double d = std::sqrt(18.0 * std::numbers::ln10 / (2.0 * std::numbers::pi * ctx.N) + 0.25);
    if (ctx.n_max < std::abs(y) + d)
        throw InvalidInput("|Im z| = " + std::to_string(std::abs(y)) + " needs n_max >= " +
                           std::to_string(static_cast<int>(std::ceil(std::abs(y) + d))));
}

} // namespace detail

/// Theta_j(z) = (4N)^{1/4} sum_n exp(-pi (j + 2Nn)^2 / 2N) exp(2 pi i z (j + 2Nn)).
inline std::complex<double> theta(int j, std::complex<double> z, const ThetaContext& ctx)
{
    detail::check_theta_range(ctx, z.imag());
    const int N = ctx.N;
    std::complex<double> s{};
    for (int n = -ctx.n_max; n <= ctx.n_max; ++n) {
        const double m = j + 2.0 * N * n;
        s += std::exp(-std::numbers::pi * m * m / (2.0 * N) + 2.0 * std::numbers::pi * std::complex<double>(0, 1) * z * m);
    }
    return std::pow(4.0 * N, 0.25) * s;
}

/// Theta_j(z) exp(-2 pi N (Im z)^2), summed with the Gaussian folded into
/// each term so large N and Im z do not overflow.
inline std::complex<double> theta_gaussian(int j, std::complex<double> z, const ThetaContext& ctx)
{
    detail::check_theta_range(ctx, z.imag());
    const int N = ctx.N;
    const double x = z.real(), y = z.imag();
    std::complex<double> s{};
    for (int n = -ctx.n_max; n <= ctx.n_max; ++n) {
        const double m = j + 2.0 * N * n;
        const double g = m + 2.0 * N * y;
        s += std::exp(-std::numbers::pi * g * g / (2.0 * N)) * std::polar(1.0, 2.0 * std::numbers::pi * x * m);
    }
    return std::pow(4.0 * N, 0.25) * s;
}

/// Coordinates in the theta basis: theta[j] multiplies Theta_j. The matrix
/// L_N acts on the reversed ordering, row r = 2N - 1 - j.
struct CoefficientVector {
    int N = 0;
    std::vector<std::complex<double>> theta;

    std::vector<std::complex<double>> rows() const { return {theta.rbegin(), theta.rend()}; }
    static CoefficientVector from_rows(int N, const std::vector<std::complex<double>>& r)
    {
        return {N, {r.rbegin(), r.rend()}};
    }
    double norm() const
    {
        double s = 0.0;
        for (const auto& c : theta) s += std::norm(c);
        return std::sqrt(s);
    }
};

inline std::complex<double> inner(const CoefficientVector& a, const CoefficientVector& b)
{
    std::complex<double> s{};
    for (std::size_t j = 0; j < a.theta.size(); ++j) s += std::conj(a.theta[j]) * b.theta[j];
    return s;
}

inline CoefficientVector operator-(const CoefficientVector& a, const CoefficientVector& b)
{
    CoefficientVector r = a;
    for (std::size_t j = 0; j < r.theta.size(); ++j) r.theta[j] -= b.theta[j];
    return r;
}

/// psi^k = (2N)^{-1/2} sum_j e^{i pi k j / N} Theta_j, eigenvalue 2 cos(pi k / N).
inline CoefficientVector equilibrium_eigenvector(int k, int N)
{
    CoefficientVector v{N, std::vector<std::complex<double>>(2 * N)};
    const double s = 1.0 / std::sqrt(2.0 * N);
    for (int j = 0; j < 2 * N; ++j) v.theta[j] = s * std::polar(1.0, std::numbers::pi * k * j / N);
    return v;
}

inline std::complex<double> evaluate_fourier(const FourierList& mu, double x)
{
    std::complex<double> s{};
    for (auto [l, c] : mu) s += c * std::polar(1.0, 2.0 * std::numbers::pi * l * x);
    return s;
}

struct QuasimodeQuadrature {
    double tolerance = 1e-10; // self-estimate limit
    int order = 16;
};

/// Coefficients of the coherent-state superposition
///   psi^k_mu = (4N)^{-1/4} int_0^1 rho(z, w(s)) mu(s) e^{-2 pi N s^2} ds,
/// with states centred on w(s) = -k/2N + i s. With this centring
/// psi^k_1 is the equilibrium eigenvector of index k.
inline CoefficientVector quasimode_coefficients(int k, const FourierList& mu, const ThetaContext& ctx,
                                                const QuasimodeQuadrature& opt = {}, double* estimate = nullptr)
{
    const int N = ctx.N;
    const double sigma = 1.0 / std::sqrt(4.0 * std::numbers::pi * N);
    const std::size_t panels = 2 * static_cast<std::size_t>(std::ceil(1.0 / sigma)) + 8;
    const double x = -static_cast<double>(k) / (2.0 * N);
    const double pref = std::pow(4.0 * N, -0.25);

    auto coefficients = [&](std::size_t P) {
        const GaussRule& g = gauss_legendre(opt.order);
        const double h = 1.0 / static_cast<double>(P);
        std::vector<double> s_nodes, weights;
        std::vector<std::complex<double>> mu_vals;
        for (std::size_t p = 0; p < P; ++p)
            for (int i = 0; i < opt.order; ++i) {
                const double s = (p + 0.5 * (1.0 + g.nodes[i])) * h;
                s_nodes.push_back(s);
                weights.push_back(0.5 * h * g.weights[i]);
                mu_vals.push_back(evaluate_fourier(mu, s));
            }
        CoefficientVector c{N, std::vector<std::complex<double>>(2 * N)};
        for (int j = 0; j < 2 * N; ++j) {
            std::complex<double> sum{};
            for (std::size_t q = 0; q < s_nodes.size(); ++q)
                sum += weights[q] * std::conj(theta_gaussian(j, {x, s_nodes[q]}, ctx)) * mu_vals[q];
            c.theta[j] = pref * sum;
        }
        return c;
    };

    const CoefficientVector coarse = coefficients(panels);
    const CoefficientVector fine = coefficients(2 * panels);
    double err = 0.0;
    for (int j = 0; j < 2 * N; ++j) err = std::max(err, std::abs(fine.theta[j] - coarse.theta[j]));
    if (estimate) *estimate = err;
    if (err > opt.tolerance)
        throw NumericalFailure("quasimode quadrature estimate " + std::to_string(err) + " above tolerance");
    return fine;
}

/// <psi^k_mu, psi^k'_mu'> = sum_l conj(mu_l) mu'_{l-k+k'} e^{-pi l^2/2N} e^{-pi (l-k+k')^2/2N}
/// (exact while the Fourier supports stay below N).
inline std::complex<double> gram_formula(const FourierList& mu, const FourierList& mu_prime, int k, int k_prime,
                                         const ThetaContext& ctx)
{
    const double N = ctx.N;
    std::complex<double> s{};
    for (auto [l, c] : mu) {
        const int lp = l - k + k_prime;
        auto it = mu_prime.find(lp);
        if (it == mu_prime.end()) continue;
        s += std::conj(c) * it->second * std::exp(-std::numbers::pi * (double(l) * l + double(lp) * lp) / (2.0 * N));
    }
    return s;
}

enum class SymbolConvention { lattice, literal };

namespace detail {

inline FourierList convolve(const FourierList& a, const FourierList& b)
{
    FourierList r;
    for (auto [k, x] : a)
        for (auto [l, y] : b) r[k + l] += x * y;
    return r;
}

inline void axpy(FourierList& y, std::complex<double> s, const FourierList& x)
{
    for (auto [k, v] : x) y[k] += s * v;
}

} // namespace detail

/// Symbol transported by L_N along the carrier of psi^k.
///
/// lattice: mu^k = [2 cos(2 pi k eps + i eps D) (1 + eps^2 alpha(2x)) + eps^2 beta(2x)] mu,
///   where e^{2 pi i l x} -> cos(2 pi eps (k - l)). This is the operator L_N
///   actually applies in the psi^k_mu parametrization.
/// literal: mu^k = [-2 cos(2 pi k eps - i eps D) + eps^2 (-2 alpha(x) cos(...) + beta(x))] mu,
///   where e^{2 pi i l x} -> cos(2 pi eps (k + l)).
inline FourierList transported_symbol(int k, const FourierList& mu, const PeriodicProfile& alpha,
                                      const PeriodicProfile& beta, const ThetaContext& ctx,
                                      SymbolConvention conv = SymbolConvention::lattice)
{
    const double eps = 1.0 / (2.0 * ctx.N);
    const bool lattice = conv == SymbolConvention::lattice;
    const double sign = lattice ? 1.0 : -1.0;
    FourierList cmu;
    for (auto [l, c] : mu) {
        const double arg = 2.0 * std::numbers::pi * eps * (lattice ? k - l : k + l);
        cmu[l] = std::cos(arg) * c;
    }
    const FourierList ah = (lattice ? alpha.dilated(2) : alpha).fourier();
    const FourierList bh = (lattice ? beta.dilated(2) : beta).fourier();
    FourierList out;
    detail::axpy(out, 2.0 * sign, cmu);
    detail::axpy(out, 2.0 * sign * eps * eps, detail::convolve(ah, cmu));
    detail::axpy(out, eps * eps, detail::convolve(bh, mu));
    return out;
}

/// || L_N psi^k_mu - psi^k_{mu^k} || in the theta basis.
inline double quasimode_residual(int k, const FourierList& mu, const PeriodicProfile& alpha,
                                 const PeriodicProfile& beta, int N,
                                 SymbolConvention conv = SymbolConvention::lattice)
{
    const ThetaContext ctx = make_theta_context(N);
    const JacobiData J = build_jacobi(alpha, beta, N);
    const CoefficientVector psi = quasimode_coefficients(k, mu, ctx);
    const CoefficientVector target = quasimode_coefficients(k, transported_symbol(k, mu, alpha, beta, ctx, conv), ctx);
    const CoefficientVector Lpsi = CoefficientVector::from_rows(N, jacobi_apply(J, psi.rows()));
    return (Lpsi - target).norm();
}

} // namespace todakdv
