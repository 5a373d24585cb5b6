#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "todakdv/errors.hpp"

namespace todakdv {

/// Discriminant data at one spectral parameter. `excess` is Delta^2 - 4
/// written as (m11 - m22)^2 + 4 m12 m21, which stays accurate near
/// coalescing band edges where Delta^2 - 4 cancels.
struct FloquetSample {
    double delta = 0.0;
    double slope = 0.0;
    double excess = 0.0;
};

namespace detail {

// Root of f on a sign change [a, b] to full double resolution: Illinois
// steps, with a bisection step whenever the bracket fails to halve.
template <class F>
double bisect(F&& f, double a, double b, bool a_positive)
{
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) != a_positive || (fb > 0.0) == a_positive) {
        // sign information from the caller is authoritative for the bracket
        fa = a_positive ? std::abs(fa) : -std::abs(fa);
        fb = a_positive ? -std::abs(fb) : std::abs(fb);
    }
    int side = 0;
    double width = b - a;
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        double m = (it % 4 == 3 && b - a > 0.5 * width) ? mid : b - fb * (b - a) / (fb - fa);
        if (!(m > a && m < b)) m = mid;
        if (it % 4 == 3) width = b - a;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
            if (side == -1) fb *= 0.5;
            side = -1;
        } else {
            b = m;
            fb = fm;
            if (side == 1) fa *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Band edges (zeros of Delta^2 - 4) from the ordered zeros of Delta'.
///
/// `lo` lies below the spectrum. Every critical point c_n is the extremum of
/// Delta inside gap n. With `hi` (a point above the spectrum) every critical
/// point is a gap and the top edge is appended; without it the last critical
/// point only bounds the final band and `critical.size() - 1` gaps are
/// resolved. Closed gaps return the critical point twice.
template <class Eval>
std::vector<double> band_edges(Eval&& eval, double lo, const std::vector<double>& critical,
                               std::optional<double> hi = std::nullopt)
{
    const std::size_t C = critical.size();
    if (!hi && C == 0) throw NumericalFailure("band edge search needs at least one critical point");
    const std::size_t gaps = hi ? C : C - 1;

    const FloquetSample s_lo = eval(lo);
    if (!(s_lo.excess > 0.0))
        throw NumericalFailure("lower bracket " + std::to_string(lo) + " is not below the spectrum");
    const bool lo_positive = s_lo.delta > 0.0;

    auto delta_at = [&](double x) { return eval(x).delta; };
    auto excess_at = [&](double x) { return eval(x).excess; };

    std::vector<double> cs(C);
    for (std::size_t n = 0; n < C; ++n) {
        const FloquetSample s = eval(critical[n]);
        cs[n] = s.excess;
        const bool expect_positive = (n % 2 == 0) ? !lo_positive : lo_positive;
        if ((s.delta > 0.0) != expect_positive)
            throw NumericalFailure("discriminant sign pattern broken at critical point " + std::to_string(n + 1));
    }

    // Zeros of Delta: z_0 in (lo, c_1), z_n in (c_n, c_{n+1}), z_C in (c_C, hi).
    const std::size_t nz = hi ? C + 1 : C;
    std::vector<double> z(nz);
    for (std::size_t n = 0; n < nz; ++n) {
        const double a = n == 0 ? lo : critical[n - 1];
        const double b = n < C ? critical[n] : *hi;
        const bool a_positive = (n % 2 == 0) ? lo_positive : !lo_positive;
        z[n] = detail::bisect(delta_at, a, b, a_positive);
    }

    std::vector<double> roots;
    roots.reserve(2 * gaps + 2);
    roots.push_back(detail::bisect(excess_at, lo, z[0], true));
    for (std::size_t n = 1; n <= gaps; ++n) {
        const double c = critical[n - 1];
        if (cs[n - 1] > 0.0) {
            roots.push_back(detail::bisect(excess_at, z[n - 1], c, false));
            roots.push_back(detail::bisect(excess_at, c, z[n], true));
        } else {
            roots.push_back(c);
            roots.push_back(c);
        }
    }
    if (hi) {
        if (!(eval(*hi).excess > 0.0))
            throw NumericalFailure("upper bracket " + std::to_string(*hi) + " is not above the spectrum");
        roots.push_back(detail::bisect(excess_at, z[C], *hi, false));
    }
    return roots;
}

// Refine a sign change of Delta' on [a, b].
template <class Eval>
double refine_critical(Eval&& eval, double a, double b, bool a_positive)
{
    return detail::bisect([&](double x) { return eval(x).slope; }, a, b, a_positive);
}

} // namespace todakdv
