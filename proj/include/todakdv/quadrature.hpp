#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "todakdv/errors.hpp"

namespace todakdv {

struct GaussRule {
    std::vector<double> nodes;   // on [-1, 1], ascending
    std::vector<double> weights;
};

namespace detail {
inline GaussRule compute_gauss_legendre(std::size_t n)
{
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - static_cast<double>(j) * p3) / (static_cast<double>(j) + 1.0);
            }
            pp = static_cast<double>(n) * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) <= 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return r;
}
} // namespace detail

/// n-point Gauss-Legendre rule, cached per n.
inline const GaussRule& gauss_legendre(std::size_t n)
{
    if (n == 0) throw InvalidInput("Gauss-Legendre rule needs at least one node");
    static std::mutex mutex;
    static std::map<std::size_t, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

// Composite Gauss-Legendre over [a, b] with `panels` equal panels.
template <class F>
auto integrate_composite(F&& f, double a, double b, std::size_t panels, std::size_t order)
{
    const GaussRule& g = gauss_legendre(order);
    const double h = (b - a) / static_cast<double>(panels);
    decltype(f(a)) sum{};
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        for (std::size_t i = 0; i < order; ++i) sum += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    }
    return sum * (0.5 * h);
}

} // namespace todakdv
