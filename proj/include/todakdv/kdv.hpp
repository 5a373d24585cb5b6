#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"
#include "todakdv/jacobi.hpp"
#include "todakdv/profile.hpp"

namespace todakdv {

/// Grid values u(m/M), m = 0..M-1, at time t.
struct KdVState {
    std::vector<double> u;
    double t = 0.0;
};

namespace detail {

inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

// Real FFT of fixed size with private buffers. Planning is serialized;
// execution on distinct objects may run concurrently.
class RealFFT {
public:
    explicit RealFFT(std::size_t M) : M_(M)
    {
        std::lock_guard lock(fftw_planner_mutex());
        in_ = fftw_alloc_real(M);
        out_ = fftw_alloc_complex(M / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(M), in_, out_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_1d(static_cast<int>(M), out_, in_, FFTW_ESTIMATE);
    }
    RealFFT(const RealFFT&) = delete;
    RealFFT& operator=(const RealFFT&) = delete;
    ~RealFFT()
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(in_);
        fftw_free(out_);
    }

    std::size_t size() const { return M_; }
    std::size_t bins() const { return M_ / 2 + 1; }

    // uh_k = (1/M) sum_m u_m e^{-2 pi i k m / M}
    void forward(const double* u, std::complex<double>* uh)
    {
        std::copy(u, u + M_, in_);
        fftw_execute(fwd_);
        const double s = 1.0 / static_cast<double>(M_);
        for (std::size_t k = 0; k < bins(); ++k) uh[k] = std::complex<double>(out_[k][0], out_[k][1]) * s;
    }

    void backward(const std::complex<double>* uh, double* u)
    {
        for (std::size_t k = 0; k < bins(); ++k) {
            out_[k][0] = uh[k].real();
            out_[k][1] = uh[k].imag();
        }
        fftw_execute(bwd_);
        std::copy(in_, in_ + M_, u);
    }

private:
    std::size_t M_;
    double* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

inline bool is_power_of_two(std::size_t M) { return M >= 2 && (M & (M - 1)) == 0; }

inline void check_grid(std::size_t M)
{
    if (!is_power_of_two(M)) throw InvalidInput("KdV grid size must be a power of two, got " + std::to_string(M));
}

inline std::size_t dealias_cutoff(std::size_t M) { return M / 3; }

} // namespace detail

inline KdVState state_from_profile(const PeriodicProfile& p, std::size_t M = 256)
{
    detail::check_grid(M);
    if (M < 8 * p.degree())
        throw InvalidInput("KdV grid M = " + std::to_string(M) + " below 8 x profile degree " +
                           std::to_string(p.degree()));
    return {p.sample(M), 0.0};
}

/// Profile from grid values, truncated at the dealiasing cutoff M/3.
inline PeriodicProfile profile_from_state(const KdVState& s, bool force_mean_zero = false)
{
    const std::size_t M = s.u.size();
    detail::check_grid(M);
    detail::RealFFT fft(M);
    std::vector<std::complex<double>> uh(fft.bins());
    fft.forward(s.u.data(), uh.data());
    const std::size_t K = detail::dealias_cutoff(M);
    std::vector<double> c(K), sn(K);
    for (std::size_t k = 1; k <= K; ++k) {
        c[k - 1] = 2.0 * uh[k].real();
        sn[k - 1] = -2.0 * uh[k].imag();
    }
    return PeriodicProfile::from_fourier(force_mean_zero ? 0.0 : uh[0].real(), std::move(c), std::move(sn), K);
}

struct ConservedQuantities {
    double m1 = 0.0, m2 = 0.0, h = 0.0;
};

/// m1 = int u, m2 = int u^2, h = int (u_x^2 / 2 + u^3).
inline ConservedQuantities conserved_quantities(const KdVState& s)
{
    const std::size_t M = s.u.size();
    detail::check_grid(M);
    detail::RealFFT fft(M);
    std::vector<std::complex<double>> uh(fft.bins());
    fft.forward(s.u.data(), uh.data());
    for (std::size_t k = 0; k < fft.bins(); ++k) uh[k] *= std::complex<double>(0.0, 2.0 * std::numbers::pi * k);
    uh[M / 2] = 0.0;
    std::vector<double> ux(M);
    fft.backward(uh.data(), ux.data());
    ConservedQuantities q;
    for (std::size_t m = 0; m < M; ++m) {
        const double u = s.u[m];
        q.m1 += u;
        q.m2 += u * u;
        q.h += 0.5 * ux[m] * ux[m] + u * u * u;
    }
    q.m1 /= M;
    q.m2 /= M;
    q.h /= M;
    return q;
}

// x -> -x on the grid; conjugates the flow to its time reversal.
inline KdVState reflect(const KdVState& s)
{
    KdVState r = s;
    const std::size_t M = s.u.size();
    for (std::size_t m = 0; m < M; ++m) r.u[m] = s.u[(M - m) % M];
    return r;
}

struct KdVOptions {
    double dt = 1e-4;                  // initial step; halved until the error target is met
    double error_per_unit_time = 1e-9; // step-halving estimate, max norm
    bool adaptive = true;
    int max_halvings = 10;
};

struct KdVResult {
    KdVState state;
    double time_error = 0.0; // Richardson estimate for the returned state
    double dt = 0.0;
    long steps = 0;
};

namespace detail {

// ETDRK4 for u_t = 6 u u_x - u_xxx in Fourier space.
class KdVStepper {
public:
    KdVStepper(std::size_t M, double h) : fft_(M), M_(M), h_(h)
    {
        const std::size_t B = fft_.bins();
        const std::size_t K = dealias_cutoff(M);
        E_.resize(B);
        E2_.resize(B);
        Q_.resize(B);
        f1_.resize(B);
        f2_.resize(B);
        f3_.resize(B);
        g_.resize(B);
        constexpr int contour = 64;
        for (std::size_t k = 0; k < B; ++k) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
            const std::complex<double> L(0.0, w * w * w);
            E_[k] = std::exp(h * L);
            E2_[k] = std::exp(0.5 * h * L);
            std::complex<double> q{}, a{}, b{}, c{};
            for (int j = 0; j < contour; ++j) {
                const std::complex<double> z =
                    h * L + std::polar(1.0, 2.0 * std::numbers::pi * (j + 0.5) / contour);
                const std::complex<double> ez = std::exp(z), ez2 = std::exp(0.5 * z);
                q += (ez2 - 1.0) / z;
                a += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / (z * z * z);
                b += (2.0 + z + ez * (-2.0 + z)) / (z * z * z);
                c += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / (z * z * z);
            }
            Q_[k] = h * q / double(contour);
            f1_[k] = h * a / double(contour);
            f2_[k] = h * b / double(contour);
            f3_[k] = h * c / double(contour);
            g_[k] = k <= K ? std::complex<double>(0.0, 3.0 * w) : 0.0;
        }
        u_.resize(M);
        for (auto* v : {&Nv_, &Na_, &Nb_, &Nc_, &a_, &b_, &c_}) v->resize(B);
    }

    void nonlinear(const std::vector<std::complex<double>>& v, std::vector<std::complex<double>>& out)
    {
        fft_.backward(v.data(), u_.data());
        for (double& x : u_) x *= x;
        fft_.forward(u_.data(), out.data());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] *= g_[k];
    }

    void step(std::vector<std::complex<double>>& v)
    {
        const std::size_t B = v.size();
        nonlinear(v, Nv_);
        for (std::size_t k = 0; k < B; ++k) a_[k] = E2_[k] * v[k] + Q_[k] * Nv_[k];
        nonlinear(a_, Na_);
        for (std::size_t k = 0; k < B; ++k) b_[k] = E2_[k] * v[k] + Q_[k] * Na_[k];
        nonlinear(b_, Nb_);
        for (std::size_t k = 0; k < B; ++k) c_[k] = E2_[k] * a_[k] + Q_[k] * (2.0 * Nb_[k] - Nv_[k]);
        nonlinear(c_, Nc_);
        for (std::size_t k = 0; k < B; ++k)
            v[k] = E_[k] * v[k] + f1_[k] * Nv_[k] + 2.0 * f2_[k] * (Na_[k] + Nb_[k]) + f3_[k] * Nc_[k];
    }

    RealFFT& fft() { return fft_; }

private:
    RealFFT fft_;
    std::size_t M_;
    double h_;
    std::vector<std::complex<double>> E_, E2_, Q_, f1_, f2_, f3_, g_;
    std::vector<std::complex<double>> Nv_, Na_, Nb_, Nc_, a_, b_, c_;
    std::vector<double> u_;
};

inline std::vector<double> kdv_run(const KdVState& u0, double t_final, long steps)
{
    const std::size_t M = u0.u.size();
    const double h = t_final / static_cast<double>(steps);
    KdVStepper stepper(M, h);
    std::vector<std::complex<double>> v(stepper.fft().bins());
    stepper.fft().forward(u0.u.data(), v.data());
    const std::size_t K = dealias_cutoff(M);
    for (std::size_t k = K + 1; k < v.size(); ++k) v[k] = 0.0;
    for (long s = 0; s < steps; ++s) {
        stepper.step(v);
        if (s % 64 == 63) {
            for (const auto& c : v)
                if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                    throw NumericalFailure("KdV blow-up after t = " + std::to_string(u0.t + (s - 63) * h));
        }
    }
    std::vector<double> u(M);
    stepper.fft().backward(v.data(), u.data());
    for (double x : u)
        if (!std::isfinite(x)) throw NumericalFailure("KdV blow-up before t = " + std::to_string(u0.t + t_final));
    return u;
}

} // namespace detail

/// Advance u0 by t_final under u_t = 6 u u_x - u_xxx.
inline KdVResult kdv_evolve(const KdVState& u0, double t_final, const KdVOptions& opt = {})
{
    detail::check_grid(u0.u.size());
    if (!(t_final >= 0.0)) throw InvalidInput("t_final must be non-negative");
    if (!(opt.dt > 0.0)) throw InvalidInput("dt must be positive");
    KdVResult r;
    r.state = u0;
    if (t_final == 0.0) return r;

    long n = std::max(1L, static_cast<long>(std::ceil(t_final / opt.dt - 1e-9)));
    std::vector<double> coarse = detail::kdv_run(u0, t_final, n);
    const double target = opt.error_per_unit_time * t_final;
    for (int halving = 0;; ++halving) {
        std::vector<double> fine = detail::kdv_run(u0, t_final, 2 * n);
        double diff = 0.0;
        for (std::size_t m = 0; m < fine.size(); ++m) diff = std::max(diff, std::abs(fine[m] - coarse[m]));
        r.time_error = diff / 15.0;
        r.state.u = std::move(fine);
        r.steps = 2 * n;
        r.dt = t_final / static_cast<double>(2 * n);
        if (!opt.adaptive || r.time_error <= target) break;
        if (halving >= opt.max_halvings)
            throw NumericalFailure("KdV time error " + std::to_string(r.time_error) + " above target " +
                                   std::to_string(target) + " after " + std::to_string(halving) + " halvings");
        coarse = r.state.u;
        n *= 2;
    }
    r.state.t = u0.t + t_final;
    return r;
}

inline KdVResult kdv_evolve(const KdVState& u0, double t_final, double dt)
{
    KdVOptions opt;
    opt.dt = dt;
    return kdv_evolve(u0, t_final, opt);
}

/// Which flow carries the Jacobi spectrum. `literal` evolves u = -2 alpha -+ beta
/// by KdV; `lattice` evolves u/4, the potential whose Hill spectrum is the
/// continuum limit of the lattice edges, and scales back.
enum class FlowScaling { literal, lattice };

struct EvolvedPair {
    PeriodicProfile alpha, beta;
    KdVState u_plus, u_minus; // reconstructed potentials at time t, unscaled
    double time_error = 0.0;
};

/// alpha = -(u^- + u^+)/4, beta = (u^- - u^+)/2 from unscaled potentials.
inline EvolvedPair reconstruct_pair(const KdVState& u_plus, const KdVState& u_minus, bool alpha_mean_zero,
                                    bool beta_mean_zero, bool beta_zero = false)
{
    const std::size_t M = u_plus.u.size();
    if (u_minus.u.size() != M) throw InvalidInput("u+ and u- grids differ");
    EvolvedPair p;
    p.u_plus = u_plus;
    p.u_minus = u_minus;
    KdVState a{std::vector<double>(M), u_plus.t}, b{std::vector<double>(M), u_plus.t};
    for (std::size_t m = 0; m < M; ++m) {
        a.u[m] = -0.25 * (u_minus.u[m] + u_plus.u[m]);
        b.u[m] = 0.5 * (u_minus.u[m] - u_plus.u[m]);
    }
    p.alpha = profile_from_state(a, alpha_mean_zero);
    p.beta = beta_zero ? PeriodicProfile{} : profile_from_state(b, beta_mean_zero);
    return p;
}

inline double flow_scale(FlowScaling s) { return s == FlowScaling::lattice ? 0.25 : 1.0; }

/// Evolve u^+ = -2 alpha - beta and u^- = -2 alpha + beta independently and
/// rebuild (alpha_t, beta_t).
inline EvolvedPair evolve_pair(const PeriodicProfile& alpha, const PeriodicProfile& beta, double t,
                               FlowScaling scaling = FlowScaling::lattice, const KdVOptions& opt = {},
                               std::size_t M = 256)
{
    const double s = flow_scale(scaling);
    const KdVState up0 = state_from_profile(s * (-2.0 * alpha - beta), M);
    const KdVState um0 = state_from_profile(s * (-2.0 * alpha + beta), M);
    KdVResult up = kdv_evolve(up0, t, opt);
    KdVResult um = beta.is_zero() ? up : kdv_evolve(um0, t, opt);
    for (double& x : up.state.u) x /= s;
    for (double& x : um.state.u) x /= s;
    EvolvedPair p = reconstruct_pair(up.state, um.state, alpha.mean_zero(), beta.mean_zero(), beta.is_zero());
    p.time_error = std::max(up.time_error, um.time_error) / s;
    return p;
}

/// max_j |lambda_j(L_N at time t) - lambda_j(L_N at time 0)|
inline double spectral_drift(const PeriodicProfile& alpha, const PeriodicProfile& beta, const EvolvedPair& evolved,
                             int N)
{
    const SpectrumList s0 = dense_spectrum(build_jacobi(alpha, beta, N));
    const SpectrumList s1 = dense_spectrum(build_jacobi(evolved.alpha, evolved.beta, N));
    double d = 0.0;
    for (std::size_t j = 0; j < s0.size(); ++j) d = std::max(d, std::abs(s0[j] - s1[j]));
    return d;
}

inline double spectral_drift(const PeriodicProfile& alpha, const PeriodicProfile& beta, double t, int N,
                             FlowScaling scaling = FlowScaling::lattice)
{
    return spectral_drift(alpha, beta, evolve_pair(alpha, beta, t, scaling), N);
}

} // namespace todakdv
