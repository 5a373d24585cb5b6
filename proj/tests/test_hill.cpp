#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "todakdv/hill.hpp"

using namespace todakdv;

namespace {

constexpr double pi2 = std::numbers::pi * std::numbers::pi;
const PeriodicProfile zero;
const PeriodicProfile cosp = profile_from_fourier(0.0, {1.0}, {});

HillOperator with_q(const PeriodicProfile& q) { return {q, HillSign::minus}; }

// Characteristic values of y'' + (a - 2 q cos 2z) y = 0, q = 1/pi^2, times pi^2
// (tests/oracles/mathieu_values.py).
const double mathieu_combined[20] = {
    -0.050603841998408644, 8.8570989513510163, 10.85677820231389,  39.469974548564295, 39.520577487705111,
    88.832612469349471,    88.832933216957173, 157.91704740862389, 157.91704831148004, 246.74222089929211,
    246.74222090072158,    355.3072058891272,  355.30720588912862, 483.61167108402071, 483.61167108402071,
    631.65548580680547,    631.65548580680547, 799.43858974597549, 799.43858974597549, 986.96095183226259};

} // namespace

TEST(BuildHill, Potentials)
{
    EXPECT_TRUE(build_hill(zero, zero, HillSign::plus).q.is_zero());
    for (HillSign s : {HillSign::plus, HillSign::minus})
        EXPECT_EQ(build_hill(cosp, zero, s).q, profile_from_fourier(0.0, {-2.0}, {}));
    EXPECT_EQ(build_hill(zero, cosp, HillSign::minus).q, cosp);
    EXPECT_EQ(build_hill(zero, cosp, HillSign::plus).q, -1.0 * cosp);
}

TEST(HillDiscriminant, FreeClosedForms)
{
    const auto H = with_q(zero);
    EXPECT_NEAR(hill_discriminant(H, 0.0), 2.0, 1e-12);
    EXPECT_NEAR(hill_discriminant(H, pi2), -2.0, 1e-12);
    EXPECT_NEAR(hill_discriminant(H, -1.0), 3.0861612696304874, 1e-10);
    const auto Hc = with_q(profile_from_fourier(1.5, {}, {}));
    for (double l : {-3.0, 0.2, 7.0, 30.0})
        EXPECT_NEAR(hill_discriminant(Hc, l), l - 1.5 >= 0 ? 2 * std::cos(std::sqrt(l - 1.5))
                                                           : 2 * std::cosh(std::sqrt(1.5 - l)),
                    1e-10);
}

TEST(HillDiscriminant, MatchesIndependentIntegrator)
{
    const auto q = profile_from_fourier(0.2, {-2.0, 0.5}, {0.7});
    for (double l : {-4.0, 0.0, 11.0, 60.0})
        EXPECT_NEAR(hill_discriminant(with_q(q), l), oracle::hill_discriminant(q, l), 1e-9);
}

TEST(HillDiscriminant, GrowsBelowGroundState)
{
    const auto H = with_q(-2.0 * cosp);
    const auto s = hill_spectrum(H, 3);
    EXPECT_GT(hill_discriminant(H, s.combined[0] - 1.0), 2.0);
}

TEST(HillSpectrum, Free)
{
    const auto s = hill_spectrum(with_q(zero), 5);
    const double c[5] = {0, pi2, pi2, 4 * pi2, 4 * pi2};
    const double p[5] = {0, 4 * pi2, 4 * pi2, 16 * pi2, 16 * pi2};
    for (int j = 0; j < 5; ++j) {
        EXPECT_NEAR(s.combined[j], c[j], 1e-10);
        EXPECT_NEAR(s.combined_floquet[j], c[j], 1e-10);
        EXPECT_NEAR(s.periodic_only[j], p[j], 1e-10);
        EXPECT_EQ(free_combined(j), c[j]);
    }
}

TEST(HillSpectrum, ConstantShift)
{
    const auto s = hill_spectrum(with_q(profile_from_fourier(0.7, {}, {})), 3);
    const double c[3] = {0, pi2, pi2};
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s.combined[j], c[j] + 0.7, 1e-10);
}

TEST(HillSpectrum, MathieuValues)
{
    const auto s = hill_spectrum(with_q(-2.0 * cosp), 20);
    for (int j = 0; j < 20; ++j) {
        EXPECT_NEAR(s.combined[j], mathieu_combined[j], 1e-9 * std::max(1.0, mathieu_combined[j]));
        EXPECT_NEAR(s.combined_floquet[j], mathieu_combined[j], 1e-9 * std::max(1.0, mathieu_combined[j]));
    }
}

TEST(HillSpectrum, DualMethodAgreement)
{
    for (const auto& q : {-2.0 * cosp, cosp.dilated(2), profile_from_fourier(0.0, {0.5}, {-1.0, 0.25})}) {
        const auto s = hill_spectrum(with_q(q), 10);
        EXPECT_LE(s.max_discrepancy, 1e-8);
    }
}

TEST(HillSpectrum, TruncationGuard)
{
    HillSpectrumOptions opt;
    opt.truncation = 4;
    EXPECT_THROW(hill_spectrum(with_q(zero), 12, opt), InvalidInput);
}

TEST(ScaledEdgeValues, Modes)
{
    const auto s0 = hill_spectrum(with_q(zero), 3);
    for (ScalingMode m : {ScalingMode::A, ScalingMode::B}) {
        const auto v = scaled_edge_values(s0, m, 3);
        EXPECT_NEAR(v[0], 0.0, 1e-10);
        EXPECT_NEAR(v[1], 4 * pi2, 1e-9);
        EXPECT_NEAR(v[2], 4 * pi2, 1e-9);
    }
    const auto s = hill_spectrum(with_q(-2.0 * cosp), 5);
    const auto b = scaled_edge_values(s, ScalingMode::B, 5);
    for (int j = 0; j < 5; ++j) EXPECT_EQ(b[j], 4 * s.combined[j]);
    EXPECT_THROW(scaled_edge_values(s, ScalingMode::A, 6), InvalidInput);
}

TEST(HillProduct, FreeRatioIsOne)
{
    const auto H = with_q(zero);
    const auto s = hill_spectrum(H, 40, {0, false});
    for (double l : {-3.0, 0.5, 20.0}) EXPECT_LE(hill_product_residual(H, l, s).residual, 1e-12);
}

TEST(HillProduct, Mathieu)
{
    const auto H = with_q(-2.0 * cosp);
    const auto s = hill_spectrum(H, 60);
    for (double l : {-5.0, -1.0, 0.3}) EXPECT_LE(hill_product_residual(H, l, s, 60).residual, 1e-6);
    const auto r = hill_product_residual(H, s.combined[0], s, 60);
    EXPECT_LE(r.residual, 1e-8);
    EXPECT_THROW(hill_product_residual(H, 0.0, s, 20), InvalidInput);
}

TEST(HillProduct, ShiftsOffFreeEigenvalue)
{
    const auto H = with_q(-2.0 * cosp);
    const auto s = hill_spectrum(H, 40);
    const auto r = hill_product_residual(H, pi2, s);
    EXPECT_TRUE(r.shifted);
    EXPECT_NE(r.lambda, pi2);
}
