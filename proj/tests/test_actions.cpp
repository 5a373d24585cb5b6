#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "todakdv/actions.hpp"

using namespace todakdv;

namespace {

const PeriodicProfile zero;
const PeriodicProfile cosp = profile_from_fourier(0.0, {1.0}, {});
const PeriodicProfile sinp = profile_from_fourier(0.0, {}, {1.0});

// (1/pi) int arcosh(|Delta|/2) over [a, b], from the excess Delta^2 - 4.
double oracle_gap_integral(const std::function<double(double)>& excess, double a, double b)
{
    // lambda = (a + b)/2 - (b - a)/2 cos(theta) smooths the square-root endpoints
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    auto f = [&](double t) {
        return std::asinh(0.5 * std::sqrt(std::max(0.0, excess(m - r * std::cos(t))))) * r * std::sin(t);
    };
    const double rough = oracle::gauss_kronrod(f, 0.0, std::numbers::pi, INFINITY);
    return oracle::gauss_kronrod(f, 0.0, std::numbers::pi, 1e-11 * std::abs(rough)) / std::numbers::pi;
}

} // namespace

TEST(TodaAction, EquilibriumGapsClosed)
{
    const auto J = build_jacobi(zero, zero, 16);
    const auto s = dense_spectrum(J);
    for (int n = 1; n < 16; ++n) EXPECT_EQ(toda_action(J, s, n), 0.0);
}

TEST(TodaAction, AdaptiveQuadratureOracle)
{
    const auto J = build_jacobi(cosp, zero, 32);
    const auto s = dense_spectrum(J);
    const double got = toda_action(J, s, 1);
    const double want =
        oracle_gap_integral([&](double x) { return oracle::toda_excess(J, x); }, s[1], s[2]);
    EXPECT_GT(got, 0.0);
    EXPECT_NEAR(got, want, 1e-8 * want);
    EXPECT_NEAR(got, 4.86464099905e-6, 1e-15);
}

TEST(TodaAction, OpenGapsPositive)
{
    const auto J = build_jacobi(cosp, sinp, 16);
    const auto s = dense_spectrum(J);
    int open = 0;
    for (int n = 1; n < 16; ++n) {
        if (toda_gap(s, n).closed) continue;
        ++open;
        EXPECT_GT(toda_action(J, s, n), 0.0) << "n = " << n;
    }
    EXPECT_GE(open, 4);
    EXPECT_THROW(toda_action(J, s, 16), InvalidInput);
}

TEST(HillAction, Free)
{
    const HillOperator H{zero, HillSign::minus};
    const auto s = hill_spectrum(H, 8);
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(hill_action(H, s, n), 0.0);
}

TEST(HillAction, AdaptiveQuadratureOracle)
{
    const auto q = -2.0 * cosp;
    const HillOperator H{q, HillSign::minus};
    const auto s = hill_spectrum(H, 6);
    for (int n : {1, 2}) {
        const double got = hill_action(H, s, n);
        const double want = 2.0 * oracle_gap_integral([&](double x) { return oracle::hill_excess(q, x); },
                                                      s.combined[2 * n - 1], s.combined[2 * n]);
        EXPECT_NEAR(got, want, 1e-8 * want) << "n = " << n;
    }
    EXPECT_NEAR(hill_action(H, s, 1), 0.159052995696, 1e-11);
}

TEST(ActionTable, ZeroProfile)
{
    for (const auto& r : renormalized_action_table(zero, zero, 16, 2)) {
        EXPECT_EQ(r.toda_bottom, 0.0);
        EXPECT_EQ(r.toda_top, 0.0);
        for (int m = 0; m < 3; ++m) {
            EXPECT_EQ(r.target_minus[m], 0.0);
            EXPECT_EQ(r.target_plus[m], 0.0);
        }
    }
}

TEST(ActionTable, BetaZeroColumnsCoincide)
{
    for (const auto& r : renormalized_action_table(cosp, zero, 32, 2)) {
        EXPECT_NEAR(r.toda_bottom, r.toda_top, 1e-9 * r.toda_bottom);
        for (int m = 0; m < 3; ++m) EXPECT_EQ(r.target_minus[m], r.target_plus[m]);
    }
}

TEST(ActionTable, BetaFlipSwapsTargets)
{
    const auto a = renormalized_action_table(cosp, sinp, 16, 1);
    const auto b = renormalized_action_table(cosp, -1.0 * sinp, 16, 1);
    for (int m = 0; m < 3; ++m) {
        EXPECT_EQ(a[0].target_minus[m], b[0].target_plus[m]);
        EXPECT_EQ(a[0].target_plus[m], b[0].target_minus[m]);
    }
}

TEST(ActionTable, ErrorDecreasesInN)
{
    double prev = INFINITY;
    for (int N : {64, 128, 256}) {
        const auto r = renormalized_action_table(cosp, sinp, N, 1)[0];
        const double err = std::abs(r.toda_bottom - r.target_minus[2]);
        EXPECT_LT(err, prev);
        prev = err;
    }
}

TEST(ActionTable, RejectsLargeIndex)
{
    EXPECT_THROW(renormalized_action_table(cosp, sinp, 16, 5), InvalidInput);
}
