#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"
#include "todakdv/hill.hpp"
#include "todakdv/jacobi.hpp"
#include "todakdv/quadrature.hpp"

namespace todakdv {

struct Gap {
    int n = 0;
    double left = 0.0;
    double right = 0.0;
    bool closed = true;
};

inline Gap gap_from(const std::vector<double>& values, int n, double tau)
{
    if (n < 1 || static_cast<std::size_t>(2 * n) >= values.size())
        throw InvalidInput("gap index " + std::to_string(n) + " out of range");
    Gap g{n, values[2 * n - 1], values[2 * n], false};
    g.closed = g.right - g.left <= tau;
    return g;
}

namespace detail {

// (1/pi) int_gap arcosh(sigma Delta / 2) d lambda with lambda = m - r cos(theta).
// `sample(lambda)` returns the FloquetSample; `sign` is sigma.
template <class Sample>
double gap_integral(const Gap& g, int sign, Sample&& sample, int nodes)
{
    if (g.closed) return 0.0;
    const double m = 0.5 * (g.left + g.right), r = 0.5 * (g.right - g.left);
    const GaussRule& rule = gauss_legendre(nodes);
    double sum = 0.0;
    for (int i = 0; i < nodes; ++i) {
        const double theta = 0.5 * std::numbers::pi * (1.0 + rule.nodes[i]);
        const double lambda = m - r * std::cos(theta);
        const FloquetSample s = sample(lambda);
        const double v = sign * s.delta;
        if (v < 2.0 - 2e-9)
            throw NumericalFailure("discriminant sign check failed in gap " + std::to_string(g.n) +
                                   ": sigma*Delta = " + std::to_string(v) + " at lambda = " + std::to_string(lambda));
        // arcosh(|Delta|/2) = asinh(sqrt(Delta^2 - 4) / 2)
        const double f = std::asinh(0.5 * std::sqrt(std::max(0.0, s.excess)));
        sum += rule.weights[i] * f * r * std::sin(theta);
    }
    // d theta = (pi/2) dt, times the 1/pi prefactor
    return 0.5 * sum;
}

} // namespace detail

inline Gap toda_gap(const SpectrumList& s, int n) { return gap_from(s.values, n, s.tau); }

/// I_n^N = (1/pi) int arcosh((-1)^{N-n} Delta^N / 2) over gap n.
inline double toda_action(const JacobiData& J, const SpectrumList& s, int n, int nodes = 64)
{
    if (n < 1 || n > J.N - 1) throw InvalidInput("Toda gap index must be in 1..N-1");
    const int sign = (J.N - n) % 2 == 0 ? 1 : -1;
    return detail::gap_integral(toda_gap(s, n), sign, [&](double x) { return toda_floquet(J, x); }, nodes);
}

inline Gap hill_gap(const HillSpectrum& s, int n) { return gap_from(s.combined, n, 1e-12); }

/// I_n = (2/pi) int arcosh((-1)^n Delta_H / 2) over combined gap n, unscaled.
inline double hill_action(const HillOperator& H, const HillSpectrum& s, int n, int nodes = 64)
{
    const int sign = n % 2 == 0 ? 1 : -1;
    return 2.0 * detail::gap_integral(hill_gap(s, n), sign, [&](double x) { return hill_floquet(H, x, false); },
                                      nodes);
}

struct ActionRow {
    int n = 0;
    double toda_bottom = 0.0; // 8 N^2 I_n
    double toda_top = 0.0;    // 8 N^2 I_{N-n}
    // targets: index 0 = mode A (raw), 1 = mode B (x4), 2 = lattice (x4 on q/4)
    std::array<double, 3> target_minus{};
    std::array<double, 3> target_plus{};
};

struct HillPair {
    HillOperator minus, plus, minus_lattice, plus_lattice;
    HillSpectrum s_minus, s_plus, s_minus_lattice, s_plus_lattice;
};

inline HillPair hill_pair(const PeriodicProfile& alpha, const PeriodicProfile& beta, std::size_t count,
                          bool cross_check = true)
{
    HillPair p;
    p.minus = build_hill(alpha, beta, HillSign::minus);
    p.plus = build_hill(alpha, beta, HillSign::plus);
    p.minus_lattice = lattice_scaled(p.minus);
    p.plus_lattice = lattice_scaled(p.plus);
    HillSpectrumOptions opt;
    opt.cross_check = cross_check;
    p.s_minus = hill_spectrum(p.minus, count, opt);
    p.s_plus = hill_spectrum(p.plus, count, opt);
    p.s_minus_lattice = hill_spectrum(p.minus_lattice, count, opt);
    p.s_plus_lattice = hill_spectrum(p.plus_lattice, count, opt);
    return p;
}

inline std::array<double, 3> action_targets(const HillOperator& H, const HillSpectrum& s, const HillOperator& Hl,
                                            const HillSpectrum& sl, int n)
{
    const double raw = hill_action(H, s, n);
    return {raw, 4.0 * raw, 4.0 * hill_action(Hl, sl, n)};
}

inline std::vector<ActionRow> renormalized_action_table(const JacobiData& J, const SpectrumList& s,
                                                        const HillPair& hp, int n_max)
{
    if (n_max < 1 || 4 * n_max > J.N) throw InvalidInput("renormalized actions need 1 <= n_max <= N/4");
    std::vector<ActionRow> rows;
    const double scale = 8.0 * J.N * J.N;
    for (int n = 1; n <= n_max; ++n) {
        ActionRow r;
        r.n = n;
        r.toda_bottom = scale * toda_action(J, s, n);
        r.toda_top = scale * toda_action(J, s, J.N - n);
        r.target_minus = action_targets(hp.minus, hp.s_minus, hp.minus_lattice, hp.s_minus_lattice, n);
        r.target_plus = action_targets(hp.plus, hp.s_plus, hp.plus_lattice, hp.s_plus_lattice, n);
        rows.push_back(r);
    }
    return rows;
}

inline std::vector<ActionRow> renormalized_action_table(const PeriodicProfile& alpha, const PeriodicProfile& beta,
                                                        int N, int n_max)
{
    const JacobiData J = build_jacobi(alpha, beta, N);
    return renormalized_action_table(J, dense_spectrum(J), hill_pair(alpha, beta, 2 * n_max + 2), n_max);
}

} // namespace todakdv
