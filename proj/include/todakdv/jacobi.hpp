#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"
#include "todakdv/floquet.hpp"
#include "todakdv/linalg.hpp"
#include "todakdv/profile.hpp"

namespace todakdv {

/// One period of the 2N x 2N periodic Jacobi matrix: diagonal b, off-diagonal a,
/// with a_{i+N} = a_i, b_{i+N} = b_i and the corner entry a_{2N-1}.
struct JacobiData {
    int N = 0;
    double eps = 0.0;
    std::vector<double> a;
    std::vector<double> b;
    bool mean_zero = true; // both profiles had zero mean
};

struct SpectrumList {
    std::vector<double> values;
    double tau = 1e-12;

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t j) const { return values[j]; }

    // lambda_0 < lambda_1 <= lambda_2 < lambda_3 <= ...
    bool interlacing_ok() const
    {
        for (std::size_t j = 1; j < values.size(); ++j) {
            const double gap = values[j] - values[j - 1];
            if (j % 2 == 1 ? !(gap > tau) : gap < -tau) return false;
        }
        return true;
    }
};

namespace detail {

inline JacobiData build_jacobi_with_epsilon(const PeriodicProfile& alpha, const PeriodicProfile& beta, int N,
                                            double eps)
{
    if (N < 2) throw InvalidInput("N must be at least 2, got " + std::to_string(N));
    JacobiData J;
    J.N = N;
    J.eps = eps;
    J.mean_zero = alpha.mean_zero() && beta.mean_zero();
    const std::vector<double> av = alpha.sample(N);
    const std::vector<double> bv = beta.sample(N);
    J.a.resize(N);
    J.b.resize(N);
    for (int i = 0; i < N; ++i) {
        J.a[i] = 1.0 + eps * eps * av[i];
        J.b[i] = eps * eps * bv[i];
        if (!(J.a[i] > 0.0))
            throw InvalidInput("off-diagonal a_" + std::to_string(i) + " = " + std::to_string(J.a[i]) +
                               " is not positive; profile too large for N = " + std::to_string(N));
    }
    return J;
}

template <class R>
struct Monodromy {
    R m11, m12, m21, m22;
    R d11, d12, d21, d22; // d/d lambda
    double log_scale = 0.0; // true entries are these times exp(log_scale)
};

// Transfer product A_{N-1} ... A_0 acting on (u_i, u_{i-1}).
template <class R>
Monodromy<R> monodromy(const JacobiData& J, double lambda, bool rescale)
{
    Monodromy<R> M{1, 0, 0, 1, 0, 0, 0, 0, 0.0};
    const R lam = lambda;
    const R big = 0x1p200;
    for (int i = 0; i < J.N; ++i) {
        const R ai = J.a[i];
        const R aprev = J.a[(i + J.N - 1) % J.N];
        const R p = (lam - R(J.b[i])) / ai;
        const R q = -aprev / ai;
        const R dp = R(1) / ai;
        // rows: new = [[p, q], [1, 0]] * old
        const R n11 = p * M.m11 + q * M.m21, n12 = p * M.m12 + q * M.m22;
        const R e11 = p * M.d11 + q * M.d21 + dp * M.m11, e12 = p * M.d12 + q * M.d22 + dp * M.m12;
        M.m21 = M.m11;
        M.m22 = M.m12;
        M.d21 = M.d11;
        M.d22 = M.d12;
        M.m11 = n11;
        M.m12 = n12;
        M.d11 = e11;
        M.d12 = e12;
        if (rescale) {
            const R mx = std::max({std::abs(M.m11), std::abs(M.m12), std::abs(M.m21), std::abs(M.m22)});
            if (mx > big) {
                const R s = R(1) / big;
                for (R* x : {&M.m11, &M.m12, &M.m21, &M.m22, &M.d11, &M.d12, &M.d21, &M.d22}) *x *= s;
                M.log_scale += 200.0 * std::numbers::ln2;
            }
        }
    }
    return M;
}

template <class R>
void check_determinant(const Monodromy<R>& M)
{
    if (M.log_scale != 0.0) return;
    const R det = M.m11 * M.m22 - M.m12 * M.m21;
    const R size = std::max({std::abs(M.m11), std::abs(M.m12), std::abs(M.m21), std::abs(M.m22), R(1)});
    if (std::abs(det - R(1)) > R(1e-10) + R(1e-16) * size * size)
        throw NumericalFailure("monodromy determinant deviates from 1 by " +
                               std::to_string(static_cast<double>(std::abs(det - R(1)))));
}

} // namespace detail

inline JacobiData build_jacobi(const PeriodicProfile& alpha, const PeriodicProfile& beta, int N)
{
    return detail::build_jacobi_with_epsilon(alpha, beta, N, 1.0 / (2.0 * N));
}

/// Dense 2N x 2N periodic Jacobi matrix.
inline linalg::DenseMatrix<double> jacobi_matrix(const JacobiData& J)
{
    const std::size_t n = 2 * static_cast<std::size_t>(J.N);
    linalg::DenseMatrix<double> L(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ip = i % J.N;
        L(i, i) = J.b[ip];
        const std::size_t j = (i + 1) % n;
        L(i, j) += J.a[ip];
        L(j, i) += J.a[ip];
    }
    return L;
}

// y = L x for the 2N-periodic matrix, without forming L.
template <class T>
std::vector<T> jacobi_apply(const JacobiData& J, const std::vector<T>& x)
{
    const std::size_t n = 2 * static_cast<std::size_t>(J.N);
    if (x.size() != n) throw InvalidInput("vector length does not match 2N");
    std::vector<T> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t up = (i + 1) % n, down = (i + n - 1) % n;
        y[i] = J.b[i % J.N] * x[i] + J.a[i % J.N] * x[up] + J.a[down % J.N] * x[down];
    }
    return y;
}

inline double jacobi_norm_bound(const JacobiData& J)
{
    double s = 0.0;
    for (int i = 0; i < J.N; ++i)
        s = std::max(s, std::abs(J.b[i]) + J.a[i] + J.a[(i + J.N - 1) % J.N]);
    return s;
}

inline SpectrumList dense_spectrum(const JacobiData& J)
{
    SpectrumList s;
    s.values = linalg::hermitian_eigenvalues(jacobi_matrix(J));
    return s;
}

inline SpectrumList equilibrium_spectrum(int N)
{
    if (N < 2) throw InvalidInput("N must be at least 2");
    SpectrumList s;
    s.values.push_back(-2.0);
    for (int l = 1; l < N; ++l) {
        const double v = -2.0 * std::cos(l * std::numbers::pi / N);
        s.values.push_back(v);
        s.values.push_back(v);
    }
    s.values.push_back(2.0);
    std::sort(s.values.begin(), s.values.end());
    return s;
}

struct ScaledValue {
    int sign = 0;
    double log_abs = -std::numeric_limits<double>::infinity();
};

/// Delta^N(lambda) = trace of the one-period monodromy.
inline double toda_discriminant(const JacobiData& J, double lambda)
{
    const auto M = detail::monodromy<long double>(J, lambda, true);
    detail::check_determinant(M);
    const long double tr = M.m11 + M.m22;
    if (M.log_scale == 0.0) return static_cast<double>(tr);
    return static_cast<double>(tr * std::exp(static_cast<long double>(M.log_scale)));
}

// Sign and log|Delta| without overflow.
inline ScaledValue toda_discriminant_scaled(const JacobiData& J, double lambda)
{
    const auto M = detail::monodromy<long double>(J, lambda, true);
    const long double tr = M.m11 + M.m22;
    ScaledValue v;
    if (tr == 0.0L) return v;
    v.sign = tr > 0 ? 1 : -1;
    v.log_abs = static_cast<double>(std::log(std::abs(tr))) + M.log_scale;
    return v;
}

inline FloquetSample toda_floquet(const JacobiData& J, double lambda)
{
    const auto M = detail::monodromy<long double>(J, lambda, false);
    const long double dm = M.m11 - M.m22;
    return {static_cast<double>(M.m11 + M.m22), static_cast<double>(M.d11 + M.d22),
            static_cast<double>(dm * dm + 4.0L * M.m12 * M.m21)};
}

/// Safety margin used to bracket the spectrum.
inline double toda_bracket_margin(const JacobiData& J, const PeriodicProfile& alpha, const PeriodicProfile& beta)
{
    return 10.0 * J.eps * J.eps * (alpha.sup_bound() + beta.sup_bound()) + 1e-6;
}

/// The 2N roots of Delta^2 - 4 inside [-2 - margin, 2 + margin].
inline SpectrumList discriminant_roots(const JacobiData& J, double margin)
{
    const double lo = -2.0 - margin, hi = 2.0 + margin;
    auto eval = [&](double x) { return toda_floquet(J, x); };

    const int grid = 8 * J.N;
    std::vector<double> critical;
    double x_prev = lo;
    double s_prev = eval(lo).slope;
    for (int g = 1; g <= grid; ++g) {
        const double x = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(std::numbers::pi * g / grid);
        const double s = eval(x).slope;
        if ((s > 0.0) != (s_prev > 0.0)) critical.push_back(refine_critical(eval, x_prev, x, s_prev > 0.0));
        x_prev = x;
        s_prev = s;
    }
    if (critical.size() != static_cast<std::size_t>(J.N - 1))
        throw NumericalFailure("found " + std::to_string(critical.size()) + " extrema of the discriminant, expected " +
                               std::to_string(J.N - 1));

    SpectrumList s;
    s.values = band_edges(eval, lo, critical, hi);
    if (s.values.size() != 2 * static_cast<std::size_t>(J.N))
        throw NumericalFailure("root count " + std::to_string(s.values.size()) + " differs from 2N = " +
                               std::to_string(2 * J.N));
    std::sort(s.values.begin(), s.values.end());
    return s;
}

// Margin from the Gershgorin excess of L over the free bound 2.
inline SpectrumList discriminant_roots(const JacobiData& J)
{
    return discriminant_roots(J, 10.0 * std::max(0.0, jacobi_norm_bound(J) - 2.0) + 1e-6);
}

/// kappa = (prod a_i)^{-2}
inline double kappa(const JacobiData& J)
{
    long double s = 0.0L;
    for (double a : J.a) s += std::log(static_cast<long double>(a));
    return static_cast<double>(std::exp(-2.0L * s));
}

/// |Delta^2 - 4 - kappa prod_j (lambda_j - lambda)| / (1 + |Delta^2 - 4|).
/// With `use_kappa = false` the factor is dropped.
inline double product_formula_residual(const JacobiData& J, double lambda, const SpectrumList& spectrum,
                                       bool use_kappa = true)
{
    const auto M = detail::monodromy<long double>(J, lambda, true);
    const long double tr = M.m11 + M.m22;
    long double lhs;
    if (M.log_scale == 0.0) {
        lhs = tr * tr - 4.0L;
    } else {
        lhs = tr * tr * std::exp(2.0L * M.log_scale);
    }
    long double log_prod = 0.0L;
    int sign = 1;
    for (double l : spectrum.values) {
        const long double d = static_cast<long double>(l) - lambda;
        if (d == 0.0L) {
            sign = 0;
            break;
        }
        if (d < 0) sign = -sign;
        log_prod += std::log(std::abs(d));
    }
    if (use_kappa) {
        long double s = 0.0L;
        for (double a : J.a) s += std::log(static_cast<long double>(a));
        log_prod -= 2.0L * s;
    }
    const long double rhs = sign == 0 ? 0.0L : sign * std::exp(log_prod);
    return static_cast<double>(std::abs(lhs - rhs) / (1.0L + std::abs(lhs)));
}

} // namespace todakdv
