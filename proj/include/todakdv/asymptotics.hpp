#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "todakdv/actions.hpp"
#include "todakdv/errors.hpp"
#include "todakdv/hill.hpp"
#include "todakdv/jacobi.hpp"
#include "todakdv/parallel.hpp"

namespace todakdv {

/// Errors below this are treated as eigensolver noise: ten times the
/// backward error 64 eps ||L|| of the dense solve with ||L|| ~ 2.
inline constexpr double default_error_floor = 10.0 * 64.0 * std::numeric_limits<double>::epsilon() * 2.0;

struct RateFit {
    double slope = std::numeric_limits<double>::quiet_NaN();
    double intercept = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    bool determinate = false;
    bool floor_limited = false;
    std::size_t used = 0;
};

/// Least-squares line through (log N, log error), skipping floor samples.
inline RateFit fit_rate(const std::vector<std::pair<double, double>>& samples, double floor = default_error_floor)
{
    if (samples.size() < 3) throw InvalidInput("rate fit needs at least 3 samples");
    RateFit f;
    std::vector<double> x, y;
    for (auto [n, e] : samples) {
        if (!(n > 0.0) || !std::isfinite(e)) throw InvalidInput("rate fit samples must have N > 0 and finite error");
        if (!(e > floor)) {
            f.floor_limited = true;
            continue;
        }
        x.push_back(std::log(n));
        y.push_back(std::log(e));
    }
    f.used = x.size();
    if (x.size() < 2) return f;
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double r = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = y[i] - (f.intercept + f.slope * x[i]);
        r += d * d;
    }
    f.residual = std::sqrt(r / m);
    f.determinate = true;
    return f;
}

struct ConvergenceReport {
    std::string label;
    std::vector<int> N;
    std::vector<double> error;
    RateFit fit;

    // Fit needs three sizes; shorter series stay indeterminate.
    void finish(double floor = default_error_floor)
    {
        if (N.size() < 3) {
            fit = RateFit{};
            return;
        }
        std::vector<std::pair<double, double>> s;
        for (std::size_t i = 0; i < N.size(); ++i) s.emplace_back(N[i], error[i]);
        fit = fit_rate(s, floor);
    }
    bool strictly_decreasing() const
    {
        for (std::size_t i = 1; i < error.size(); ++i)
            if (!(error[i] < error[i - 1])) return false;
        return true;
    }
};

/// Edge conventions for the Hill eigenvalues entering the edge predictions.
/// A and B act on H_+-; C is B applied to the lattice-scaled operator.
enum class EdgeMode { A, B, C };
inline constexpr std::array<EdgeMode, 3> all_edge_modes{EdgeMode::A, EdgeMode::B, EdgeMode::C};

inline const char* to_string(EdgeMode m) { return m == EdgeMode::A ? "A" : m == EdgeMode::B ? "B" : "C"; }

enum class Edge { bottom, top };
inline const char* to_string(Edge e) { return e == Edge::bottom ? "bottom" : "top"; }

/// M_N = floor(N^{1/4})
inline int edge_window(int N)
{
    int m = 0;
    while (static_cast<long>(m + 1) * (m + 1) * (m + 1) * (m + 1) <= N) ++m;
    return m;
}

inline std::vector<double> edge_values(const HillPair& hp, Edge edge, EdgeMode mode, std::size_t count)
{
    const bool bottom = edge == Edge::bottom;
    switch (mode) {
    case EdgeMode::A: return scaled_edge_values(bottom ? hp.s_minus : hp.s_plus, ScalingMode::A, count);
    case EdgeMode::B: return scaled_edge_values(bottom ? hp.s_minus : hp.s_plus, ScalingMode::B, count);
    default: return scaled_edge_values(bottom ? hp.s_minus_lattice : hp.s_plus_lattice, ScalingMode::B, count);
    }
}

struct EdgeRow {
    int j = 0;
    double lambda = 0.0;
    std::array<double, 3> prediction{};
    std::array<double, 3> error{};
};

struct EdgeReport {
    int N = 0;
    int M_N = 0;
    std::vector<EdgeRow> bottom, top;
    std::vector<std::pair<int, double>> bulk; // (l, deviation)

    const std::vector<EdgeRow>& rows(Edge e) const { return e == Edge::bottom ? bottom : top; }
    double bulk_max() const
    {
        double m = 0.0;
        for (auto [l, d] : bulk) m = std::max(m, d);
        return m;
    }
};

/// Toda spectrum of one sweep point.
struct TodaSample {
    JacobiData J;
    SpectrumList spectrum;
};

inline std::vector<TodaSample> toda_sweep(const PeriodicProfile& alpha, const PeriodicProfile& beta,
                                          const std::vector<int>& N_list, unsigned jobs = 1)
{
    return parallel_map(N_list.size(), jobs, [&](std::size_t i) {
        TodaSample s;
        s.J = build_jacobi(alpha, beta, N_list[i]);
        s.spectrum = dense_spectrum(s.J);
        return s;
    });
}

inline std::size_t edge_count(int N_max) { return 2 * static_cast<std::size_t>(edge_window(N_max)) + 1; }

/// Edge predictions -2 + lambda^-_j / 4N^2 and 2 - lambda^+_j / 4N^2 for
/// j = 0..2 M_N, and the bulk deviation from -2 cos(l pi / N).
inline EdgeReport edge_comparison(const TodaSample& t, const HillPair& hp)
{
    const int N = t.J.N;
    if (N < 16) throw InvalidInput("edge comparison needs N >= 16");
    EdgeReport r;
    r.N = N;
    r.M_N = edge_window(N);
    const std::size_t count = 2 * static_cast<std::size_t>(r.M_N) + 1;
    const double s = 4.0 * N * N;
    const auto& v = t.spectrum.values;
    for (Edge e : {Edge::bottom, Edge::top}) {
        std::array<std::vector<double>, 3> lam;
        for (EdgeMode m : all_edge_modes) lam[static_cast<int>(m)] = edge_values(hp, e, m, count);
        auto& out = e == Edge::bottom ? r.bottom : r.top;
        for (std::size_t j = 0; j < count; ++j) {
            EdgeRow row;
            row.j = static_cast<int>(j);
            row.lambda = e == Edge::bottom ? v[j] : v[v.size() - 1 - j];
            for (int m = 0; m < 3; ++m) {
                row.prediction[m] = e == Edge::bottom ? -2.0 + lam[m][j] / s : 2.0 - lam[m][j] / s;
                row.error[m] = std::abs(row.lambda - row.prediction[m]);
            }
            out.push_back(row);
        }
    }
    for (int l = r.M_N + 1; l <= N - 1 - r.M_N; ++l) {
        const double c = -2.0 * std::cos(l * std::numbers::pi / N);
        r.bulk.emplace_back(l, std::max(std::abs(v[2 * l - 1] - c), std::abs(v[2 * l] - c)));
    }
    return r;
}

inline EdgeReport edge_comparison(const PeriodicProfile& alpha, const PeriodicProfile& beta, int N)
{
    TodaSample t;
    t.J = build_jacobi(alpha, beta, N);
    t.spectrum = dense_spectrum(t.J);
    return edge_comparison(t, hill_pair(alpha, beta, edge_count(N)));
}

/// Maximum deviation of the bulk pairs from -2 cos(l pi / N).
inline double bulk_comparison(const PeriodicProfile& alpha, const PeriodicProfile& beta, int N)
{
    const JacobiData J = build_jacobi(alpha, beta, N);
    const SpectrumList s = dense_spectrum(J);
    const int M = edge_window(N);
    double d = 0.0;
    for (int l = M + 1; l <= N - 1 - M; ++l) {
        const double c = -2.0 * std::cos(l * std::numbers::pi / N);
        d = std::max({d, std::abs(s[2 * l - 1] - c), std::abs(s[2 * l] - c)});
    }
    return d;
}

/// Edge error series for one (edge, mode, j) across a sweep.
struct EdgeStudy {
    std::vector<EdgeReport> reports;
    // series[edge][mode][j]
    std::array<std::array<std::vector<ConvergenceReport>, 3>, 2> series;
    ConvergenceReport bulk;

    // Mode with the smallest worst-case error at the largest N.
    EdgeMode best_mode(Edge e) const
    {
        EdgeMode best = EdgeMode::A;
        double best_err = std::numeric_limits<double>::infinity();
        for (EdgeMode m : all_edge_modes) {
            double w = 0.0;
            for (const auto& c : series[static_cast<int>(e)][static_cast<int>(m)]) w = std::max(w, c.error.back());
            if (w < best_err) {
                best_err = w;
                best = m;
            }
        }
        return best;
    }
};

inline EdgeStudy edge_study(const std::vector<TodaSample>& sweep, const HillPair& hp, double floor = default_error_floor)
{
    EdgeStudy st;
    for (const auto& t : sweep) st.reports.push_back(edge_comparison(t, hp));
    const std::size_t count = st.reports.front().bottom.size();
    for (const auto& r : st.reports)
        if (r.bottom.size() < count) throw InvalidInput("edge study needs N_list in ascending order");
    for (int e = 0; e < 2; ++e)
        for (int m = 0; m < 3; ++m) {
            auto& v = st.series[e][m];
            v.resize(count);
            for (std::size_t j = 0; j < count; ++j) {
                v[j].label = std::string("edge_") + to_string(Edge(e)) + "_mode" + to_string(EdgeMode(m)) + "_j" +
                             std::to_string(j);
                for (const auto& r : st.reports) {
                    v[j].N.push_back(r.N);
                    v[j].error.push_back(r.rows(Edge(e))[j].error[m]);
                }
                v[j].finish(floor);
            }
        }
    st.bulk.label = "bulk";
    for (const auto& r : st.reports) {
        st.bulk.N.push_back(r.N);
        st.bulk.error.push_back(r.bulk_max());
    }
    st.bulk.finish(floor);
    return st;
}

/// Targets for the rescaled discriminant: the literal Delta_H(lambda), the
/// free-case calibrated Delta_H(lambda/4), and the lattice-scaled
/// Delta_{H~}(lambda/4) with H~ = -d^2/dx^2 + q/4.
enum class DiscriminantTarget { literal, calibrated, lattice };

struct DiscriminantStudy {
    Edge edge = Edge::bottom;
    std::vector<double> grid;
    std::array<ConvergenceReport, 3> reports; // indexed by DiscriminantTarget
    // values[i][g]: Toda value at N_list[i], grid point g
    std::vector<std::vector<double>> toda;
    std::array<std::vector<double>, 3> target;
};

inline std::vector<double> lambda_grid(double lo, double hi, std::size_t points)
{
    if (points < 2 || !(hi > lo)) throw InvalidInput("lambda grid needs lo < hi and at least 2 points");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return g;
}

/// sup over the grid of |(-1)^N Delta^N(-2 + eps^2 lambda) - D^-(lambda)| (bottom)
/// or |Delta^N(2 - eps^2 lambda) - D^+(lambda)| (top).
inline DiscriminantStudy discriminant_convergence(const PeriodicProfile& alpha, const PeriodicProfile& beta,
                                                  const std::vector<int>& N_list, const std::vector<double>& grid,
                                                  Edge edge, unsigned jobs = 1)
{
    DiscriminantStudy st;
    st.edge = edge;
    st.grid = grid;
    const HillOperator H = build_hill(alpha, beta, edge == Edge::bottom ? HillSign::minus : HillSign::plus);
    const HillOperator Hl = lattice_scaled(H);
    for (int t = 0; t < 3; ++t) st.target[t].resize(grid.size());
    const auto targets = parallel_map(grid.size(), jobs, [&](std::size_t g) {
        const double l = grid[g];
        return std::array<double, 3>{hill_discriminant(H, l), hill_discriminant(H, l / 4.0),
                                     hill_discriminant(Hl, l / 4.0)};
    });
    for (std::size_t g = 0; g < grid.size(); ++g)
        for (int t = 0; t < 3; ++t) st.target[t][g] = targets[g][t];

    st.toda = parallel_map(N_list.size(), jobs, [&](std::size_t i) {
        const JacobiData J = build_jacobi(alpha, beta, N_list[i]);
        const double e2 = J.eps * J.eps;
        std::vector<double> v(grid.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            if (edge == Edge::bottom)
                v[g] = (J.N % 2 == 0 ? 1.0 : -1.0) * toda_discriminant(J, -2.0 + e2 * grid[g]);
            else
                v[g] = toda_discriminant(J, 2.0 - e2 * grid[g]);
        }
        return v;
    });
    const char* names[3] = {"literal", "calibrated", "lattice"};
    for (int t = 0; t < 3; ++t) {
        auto& rep = st.reports[t];
        rep.label = std::string("discriminant_") + to_string(edge) + "_" + names[t];
        for (std::size_t i = 0; i < N_list.size(); ++i) {
            double sup = 0.0;
            for (std::size_t g = 0; g < grid.size(); ++g) sup = std::max(sup, std::abs(st.toda[i][g] - st.target[t][g]));
            rep.N.push_back(N_list[i]);
            rep.error.push_back(sup);
        }
        rep.finish();
    }
    return st;
}

struct ActionSeries {
    int n = 0;
    Edge edge = Edge::bottom;
    EdgeMode mode = EdgeMode::A;
    std::vector<double> scaled; // 8 N^2 I per N
    double target = 0.0;
    ConvergenceReport absolute;
    std::vector<double> relative;
};

struct ActionStudy {
    std::vector<int> N;
    std::vector<std::vector<ActionRow>> tables; // per N
    std::vector<ActionSeries> series;

    const ActionSeries& find(int n, Edge e, EdgeMode m) const
    {
        for (const auto& s : series)
            if (s.n == n && s.edge == e && s.mode == m) return s;
        throw InvalidInput("no action series for n = " + std::to_string(n));
    }
    EdgeMode best_mode(int n, Edge e) const
    {
        EdgeMode best = EdgeMode::A;
        double b = std::numeric_limits<double>::infinity();
        for (EdgeMode m : all_edge_modes) {
            const double r = find(n, e, m).relative.back();
            if (r < b) {
                b = r;
                best = m;
            }
        }
        return best;
    }
};

inline ActionStudy action_convergence(const std::vector<TodaSample>& sweep, const HillPair& hp, int n_max,
                                      unsigned jobs = 1)
{
    ActionStudy st;
    for (const auto& t : sweep) st.N.push_back(t.J.N);
    st.tables = parallel_map(sweep.size(), jobs, [&](std::size_t i) {
        return renormalized_action_table(sweep[i].J, sweep[i].spectrum, hp, n_max);
    });
    for (int n = 1; n <= n_max; ++n)
        for (Edge e : {Edge::bottom, Edge::top})
            for (EdgeMode m : all_edge_modes) {
                ActionSeries s;
                s.n = n;
                s.edge = e;
                s.mode = m;
                s.absolute.label = std::string("action_n") + std::to_string(n) + "_" + to_string(e) + "_mode" + to_string(m);
                for (std::size_t i = 0; i < sweep.size(); ++i) {
                    const ActionRow& row = st.tables[i][n - 1];
                    const double v = e == Edge::bottom ? row.toda_bottom : row.toda_top;
                    s.target = (e == Edge::bottom ? row.target_minus : row.target_plus)[static_cast<int>(m)];
                    s.scaled.push_back(v);
                    s.absolute.N.push_back(st.N[i]);
                    s.absolute.error.push_back(std::abs(v - s.target));
                    s.relative.push_back(s.target != 0.0 ? std::abs(v - s.target) / std::abs(s.target)
                                                         : std::abs(v - s.target));
                }
                s.absolute.finish(0.0);
                st.series.push_back(std::move(s));
            }
    return st;
}

inline ActionStudy action_convergence(const PeriodicProfile& alpha, const PeriodicProfile& beta,
                                      const std::vector<int>& N_list, int n_max, unsigned jobs = 1)
{
    return action_convergence(toda_sweep(alpha, beta, N_list, jobs), hill_pair(alpha, beta, 2 * n_max + 2), n_max,
                              jobs);
}

} // namespace todakdv
