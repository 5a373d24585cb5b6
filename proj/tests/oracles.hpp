#pragma once

// Independent reference computations used only by the test suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "todakdv/jacobi.hpp"
#include "todakdv/profile.hpp"

namespace oracle {

// Adaptive Gauss-Kronrod (7/15) with interval bisection.
inline double gauss_kronrod(const std::function<double(double)>& f, double a, double b, double tol, int depth = 0)
{
    static const double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                 0.207784955007898467600689403773245, 0.0};
    static const double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static const double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double k = wk[7] * f(c), g = wg[3] * f(c);
    for (int i = 0; i < 7; ++i) {
        const double fp = f(c + h * xk[i]), fm = f(c - h * xk[i]);
        k += wk[i] * (fp + fm);
        if (i % 2 == 1) g += wg[i / 2] * (fp + fm);
    }
    k *= h;
    g *= h;
    if (std::abs(k - g) <= tol || depth >= 16) return k;
    return gauss_kronrod(f, a, c, 0.5 * tol, depth + 1) + gauss_kronrod(f, c, b, 0.5 * tol, depth + 1);
}

inline double chebyshev_t(int n, double x)
{
    double t0 = 1.0, t1 = x;
    if (n == 0) return t0;
    for (int k = 1; k < n; ++k) {
        const double t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

// Determinant of lambda - L for the N x N periodic Jacobi matrix, by Gaussian
// elimination with partial pivoting in long double.
inline long double periodic_det(const todakdv::JacobiData& J, double lambda, double corner_phase = 1.0)
{
    const int N = J.N;
    std::vector<long double> m(static_cast<std::size_t>(N) * N, 0.0L);
    auto at = [&](int i, int j) -> long double& { return m[static_cast<std::size_t>(i) * N + j]; };
    for (int i = 0; i < N; ++i) at(i, i) = lambda - J.b[i];
    for (int i = 0; i + 1 < N; ++i) at(i, i + 1) = at(i + 1, i) = -J.a[i];
    if (N > 2) {
        at(0, N - 1) -= corner_phase * J.a[N - 1];
        at(N - 1, 0) -= corner_phase * J.a[N - 1];
    } else {
        at(0, 1) -= corner_phase * J.a[1];
        at(1, 0) -= corner_phase * J.a[1];
    }
    long double det = 1.0L;
    for (int c = 0; c < N; ++c) {
        int p = c;
        for (int r = c + 1; r < N; ++r)
            if (std::abs(at(r, c)) > std::abs(at(p, c))) p = r;
        if (at(p, c) == 0.0L) return 0.0L;
        if (p != c) {
            for (int k = 0; k < N; ++k) std::swap(at(p, k), at(c, k));
            det = -det;
        }
        det *= at(c, c);
        for (int r = c + 1; r < N; ++r) {
            const long double f = at(r, c) / at(c, c);
            for (int k = c; k < N; ++k) at(r, k) -= f * at(c, k);
        }
    }
    return det;
}

// Discriminant from the periodic determinant: det(lambda - L_per) = prod(a) (Delta - 2).
inline double toda_discriminant(const todakdv::JacobiData& J, double lambda)
{
    long double pa = 1.0L;
    for (double a : J.a) pa *= a;
    return static_cast<double>(periodic_det(J, lambda) / pa + 2.0L);
}

// Delta^2 - 4 as det(lambda - L_per) det(lambda - L_anti) / prod(a)^2, free of cancellation.
inline double toda_excess(const todakdv::JacobiData& J, double lambda)
{
    long double pa = 1.0L;
    for (double a : J.a) pa *= a;
    return static_cast<double>(periodic_det(J, lambda) * periodic_det(J, lambda, -1.0) / (pa * pa));
}

struct HillMonodromy {
    double y1, y1p, y2, y2p;
};

// Fundamental solutions at x = 1 by fixed-step Runge-Kutta-Fehlberg 7(8).
inline HillMonodromy hill_monodromy(const todakdv::PeriodicProfile& q, double lambda)
{
    using namespace boost::numeric::odeint;
    using State = std::array<double, 4>;
    auto rhs = [&](const State& y, State& dy, double x) {
        const double v = q(x) - lambda;
        dy[0] = y[1];
        dy[1] = v * y[0];
        dy[2] = y[3];
        dy[3] = v * y[2];
    };
    State y{1.0, 0.0, 0.0, 1.0};
    const int steps = std::max(2000, static_cast<int>(200.0 * std::sqrt(std::abs(lambda) + q.sup_bound())));
    runge_kutta_fehlberg78<State> stepper;
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) stepper.do_step(rhs, y, i * h, h);
    return {y[0], y[1], y[2], y[3]};
}

inline double hill_discriminant(const todakdv::PeriodicProfile& q, double lambda)
{
    const HillMonodromy m = hill_monodromy(q, lambda);
    return m.y1 + m.y2p;
}

// Delta^2 - 4 = (y1 - y2')^2 + 4 y2 y1' using y1 y2' - y2 y1' = 1.
inline double hill_excess(const todakdv::PeriodicProfile& q, double lambda)
{
    const HillMonodromy m = hill_monodromy(q, lambda);
    return (m.y1 - m.y2p) * (m.y1 - m.y2p) + 4.0 * m.y2 * m.y1p;
}

// Root of f on [a, b] by bisection (f(a) f(b) < 0).
inline double bisect(const std::function<double(double)>& f, double a, double b)
{
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++i) {
        const double c = 0.5 * (a + b), fc = f(c);
        if ((fc < 0) == (fa < 0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    return 0.5 * (a + b);
}

// Theta_j(x + iy) exp(-2 pi N y^2) summed over a wide lattice window in long double.
inline std::complex<double> theta_weighted(int j, double x, double y, int N)
{
    std::complex<long double> s{};
    const long double pi = std::numbers::pi_v<long double>;
    for (int n = -8; n <= 8; ++n) {
        const long double m = j + 2.0L * N * n;
        const long double g = m + 2.0L * N * y;
        const long double mag = std::exp(-pi * g * g / (2.0L * N));
        s += mag * std::complex<long double>(std::cos(2 * pi * x * m), std::sin(2 * pi * x * m));
    }
    const double pref = std::pow(4.0 * N, 0.25);
    return {pref * static_cast<double>(s.real()), pref * static_cast<double>(s.imag())};
}

// Tensor Gauss-Legendre on [0,1]^2 of conj(Theta_j) Theta_k e^{-4 pi N y^2}.
inline std::complex<double> theta_gram(int j, int k, int N, int panels = 64)
{
    static const double x8[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static const double w8[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    std::vector<double> nodes, weights;
    const double h = 1.0 / panels;
    for (int p = 0; p < panels; ++p)
        for (int i = 0; i < 4; ++i)
            for (int sgn : {-1, 1}) {
                nodes.push_back((p + 0.5 + 0.5 * sgn * x8[i]) * h);
                weights.push_back(0.5 * h * w8[i]);
            }
    std::complex<double> s{};
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = 0; b < nodes.size(); ++b) {
            const double x = nodes[a], y = nodes[b];
            s += weights[a] * weights[b] * std::conj(theta_weighted(j, x, y, N)) * theta_weighted(k, x, y, N);
        }
    return s;
}

// Integrating-factor RK4 for u_t = 6 u u_x - u_xxx on [0,1) with a naive DFT.
inline std::vector<double> kdv_ifrk4(std::vector<double> u, double t, int steps)
{
    const int M = static_cast<int>(u.size());
    const double pi = std::numbers::pi;
    using C = std::complex<double>;
    auto dft = [&](const std::vector<C>& v, int sign) {
        std::vector<C> r(M);
        for (int k = 0; k < M; ++k) {
            C s{};
            for (int n = 0; n < M; ++n) s += v[n] * std::polar(1.0, sign * 2.0 * pi * k * n / M);
            r[k] = s;
        }
        return r;
    };
    std::vector<double> kk(M);
    for (int k = 0; k < M; ++k) kk[k] = 2.0 * pi * (k <= M / 2 ? k : k - M);
    kk[M / 2] = 0.0;
    std::vector<C> v(M);
    for (int n = 0; n < M; ++n) v[n] = u[n];
    std::vector<C> uh = dft(v, -1);
    for (auto& c : uh) c /= double(M);
    // linear part: u_t = -u_xxx -> d/dt uh = i k^3 uh
    auto nonlinear = [&](const std::vector<C>& w) {
        std::vector<C> d(M);
        for (int k = 0; k < M; ++k) d[k] = C(0, kk[k]) * w[k];
        for (int k = 0; k < M; ++k)
            if (std::abs(k <= M / 2 ? k : M - k) > M / 3) d[k] = 0.0;
        const std::vector<C> ux = dft(d, 1), uu = dft(w, 1);
        std::vector<C> p(M);
        for (int n = 0; n < M; ++n) p[n] = 6.0 * uu[n].real() * ux[n].real();
        std::vector<C> r = dft(p, -1);
        for (int k = 0; k < M; ++k) r[k] = std::abs(k <= M / 2 ? k : M - k) > M / 3 ? C{} : r[k] / double(M);
        return r;
    };
    const double h = t / steps;
    std::vector<C> e(M), e2(M);
    for (int k = 0; k < M; ++k) {
        e[k] = std::polar(1.0, kk[k] * kk[k] * kk[k] * h);
        e2[k] = std::polar(1.0, kk[k] * kk[k] * kk[k] * h / 2);
    }
    for (int s = 0; s < steps; ++s) {
        std::vector<C> a = nonlinear(uh), tmp(M);
        for (int k = 0; k < M; ++k) tmp[k] = e2[k] * (uh[k] + 0.5 * h * a[k]);
        std::vector<C> b = nonlinear(tmp);
        for (int k = 0; k < M; ++k) tmp[k] = e2[k] * uh[k] + 0.5 * h * b[k];
        std::vector<C> c = nonlinear(tmp);
        for (int k = 0; k < M; ++k) tmp[k] = e[k] * uh[k] + h * e2[k] * c[k];
        std::vector<C> d = nonlinear(tmp);
        for (int k = 0; k < M; ++k)
            uh[k] = e[k] * uh[k] + h / 6.0 * (e[k] * a[k] + 2.0 * e2[k] * (b[k] + c[k]) + d[k]);
    }
    const std::vector<C> r = dft(uh, 1);
    for (int n = 0; n < M; ++n) u[n] = r[n].real();
    return u;
}

} // namespace oracle
