#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "todakdv/hill.hpp"
#include "todakdv/kdv.hpp"

using namespace todakdv;

namespace {

const PeriodicProfile zero;
const PeriodicProfile cosp = profile_from_fourier(0.0, {1.0}, {});
const PeriodicProfile sinp = profile_from_fourier(0.0, {}, {1.0});

double max_diff(const std::vector<double>& a, const std::vector<double>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

} // namespace

TEST(KdV, ZeroAndConstantAreFixed)
{
    const auto z = kdv_evolve(state_from_profile(zero, 64), 0.1);
    for (double v : z.state.u) EXPECT_EQ(v, 0.0);
    const auto c = kdv_evolve(state_from_profile(profile_from_fourier(0.8, {}, {}), 64), 0.1);
    for (double v : c.state.u) EXPECT_NEAR(v, 0.8, 1e-14);
}

TEST(KdV, StepHalvingSelfConvergence)
{
    const auto u0 = state_from_profile(cosp, 256);
    const auto a = kdv_evolve(u0, 0.1, 1e-4);
    const auto b = kdv_evolve(u0, 0.1, 5e-5);
    EXPECT_LE(max_diff(a.state.u, b.state.u), 1e-8);
}

TEST(KdV, MatchesIntegratingFactorOracle)
{
    const auto p = profile_from_fourier(0.0, {0.25}, {0.1});
    const auto u0 = state_from_profile(p, 64);
    const auto r = kdv_evolve(u0, 0.02);
    const auto want = oracle::kdv_ifrk4(u0.u, 0.02, 4000);
    EXPECT_LE(max_diff(r.state.u, want), 1e-9);
}

TEST(KdV, TimeReversal)
{
    const auto u0 = state_from_profile(profile_from_fourier(0.0, {1.0, 0.3}, {0.5}), 256);
    const auto fwd = kdv_evolve(u0, 0.05);
    const auto back = kdv_evolve(reflect(fwd.state), 0.05);
    EXPECT_LE(max_diff(reflect(back.state).u, u0.u), 1e-7);
}

TEST(KdV, ConservedQuantityClosedForms)
{
    const auto z = conserved_quantities(state_from_profile(zero, 32));
    EXPECT_EQ(z.m1, 0.0);
    EXPECT_EQ(z.m2, 0.0);
    EXPECT_EQ(z.h, 0.0);
    const auto c = conserved_quantities(state_from_profile(profile_from_fourier(1.5, {}, {}), 32));
    EXPECT_NEAR(c.m1, 1.5, 1e-15);
    EXPECT_NEAR(c.m2, 2.25, 1e-14);
    EXPECT_NEAR(c.h, 3.375, 1e-14);
    const auto q = conserved_quantities(state_from_profile(cosp, 64));
    EXPECT_NEAR(q.m1, 0.0, 1e-15);
    EXPECT_NEAR(q.m2, 0.5, 1e-14);
    EXPECT_NEAR(q.h, std::numbers::pi * std::numbers::pi, 1e-12);
}

TEST(KdV, ConservationUnderFlow)
{
    const auto u0 = state_from_profile(-2.0 * cosp - sinp, 256);
    const auto q0 = conserved_quantities(u0);
    const auto q1 = conserved_quantities(kdv_evolve(u0, 0.1).state);
    EXPECT_LE(std::abs(q1.m1 - q0.m1), 1e-12);
    EXPECT_LE(std::abs(q1.m2 - q0.m2), 1e-8);
    EXPECT_LE(std::abs(q1.h - q0.h), 1e-7);
}

TEST(KdV, HillSpectrumIsInvariant)
{
    const auto q = -2.0 * cosp - sinp;
    const auto u = kdv_evolve(state_from_profile(q, 256), 0.1);
    const auto a = hill_spectrum({q, HillSign::plus}, 8);
    const auto b = hill_spectrum({profile_from_state(u.state), HillSign::plus}, 8);
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(a.combined[j], b.combined[j], 1e-6);
}

TEST(KdV, GridChecks)
{
    EXPECT_THROW(state_from_profile(cosp, 100), InvalidInput);
    EXPECT_THROW(state_from_profile(profile_from_fourier(0.0, std::vector<double>(16, 1.0), {}), 64), InvalidInput);
}

TEST(KdV, ProfileRoundTrip)
{
    const auto p = profile_from_fourier(0.4, {1.0, -0.5}, {0.0, 0.2});
    const auto q = profile_from_state(state_from_profile(p, 64));
    for (double x : {0.0, 0.21, 0.5}) EXPECT_NEAR(p(x), q(x), 1e-14);
    EXPECT_EQ(profile_from_state(state_from_profile(p, 64), true).mean(), 0.0);
}

TEST(EvolvePair, IdentityAtTimeZero)
{
    for (FlowScaling f : {FlowScaling::lattice, FlowScaling::literal}) {
        const auto p = evolve_pair(cosp, sinp, 0.0, f);
        for (double x : {0.0, 0.3, 0.77}) {
            EXPECT_NEAR(p.alpha(x), cosp(x), 1e-12);
            EXPECT_NEAR(p.beta(x), sinp(x), 1e-12);
        }
    }
}

TEST(EvolvePair, FixedPointAndBetaZero)
{
    const auto z = evolve_pair(zero, zero, 0.05);
    EXPECT_TRUE(z.alpha.is_zero());
    EXPECT_TRUE(z.beta.is_zero());
    const auto b = evolve_pair(cosp, zero, 0.05);
    EXPECT_TRUE(b.beta.is_zero());
}

TEST(SpectralDrift, TrivialCases)
{
    EXPECT_LE(spectral_drift(cosp, sinp, 0.0, 32), 1e-13);
    EXPECT_EQ(spectral_drift(zero, zero, 0.05, 32), 0.0);
}

TEST(SpectralDrift, LatticeFlowDecays)
{
    const double a = spectral_drift(cosp, sinp, 0.05, 32);
    const double b = spectral_drift(cosp, sinp, 0.05, 64);
    EXPECT_LT(b, a);
    EXPECT_GT(std::log2(a / b), 2.5);
}
