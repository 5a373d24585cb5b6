#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "todakdv/profile.hpp"

using namespace todakdv;

TEST(Profile, CosineDefinition)
{
    const auto p = profile_from_fourier(0.0, {1.0}, {});
    EXPECT_EQ(p.mean(), 0.0);
    EXPECT_TRUE(p.mean_zero());
    EXPECT_NEAR(evaluate(p, 0.0), 1.0, 1e-15);
    EXPECT_NEAR(evaluate(p, 0.25), 0.0, 1e-15);
    EXPECT_NEAR(evaluate(p, 1.25), 0.0, 1e-15);
    EXPECT_NEAR(evaluate(p, 0.1), std::cos(2 * std::numbers::pi * 0.1), 1e-15);
}

TEST(Profile, ZeroProfile)
{
    const auto p = profile_from_fourier(0.0, {}, {});
    EXPECT_TRUE(p.is_zero());
    const auto s = sample_grid(p, 7);
    ASSERT_EQ(s.size(), 7u);
    for (double v : s) EXPECT_EQ(v, 0.0);
}

TEST(Profile, ConstantPlusHarmonic)
{
    const auto p = profile_from_fourier(2.0, {0.0, 1.0}, {});
    EXPECT_EQ(p.mean(), 2.0);
    EXPECT_FALSE(p.mean_zero());
    const auto s = sample_grid(p, 2);
    EXPECT_NEAR(s[0], 3.0, 1e-15);
    EXPECT_NEAR(s[1], 3.0, 1e-14);
}

TEST(Profile, SampleGridCosine)
{
    const auto s = sample_grid(profile_from_fourier(0.0, {1.0}, {}), 4);
    const double want[4] = {1, 0, -1, 0};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i], want[i], 1e-15);
}

TEST(Profile, RejectsNonFinite)
{
    try {
        profile_from_fourier(0.0, {1.0, std::nan("")}, {});
        FAIL();
    } catch (const InvalidInput& e) {
        EXPECT_NE(std::string(e.what()).find("cos[1]"), std::string::npos);
    }
    EXPECT_THROW(profile_from_fourier(std::numeric_limits<double>::infinity(), {}, {}), InvalidInput);
    EXPECT_THROW(profile_from_fourier(0.0, {}, {0.0, 0.0, INFINITY}), InvalidInput);
}

TEST(Profile, DegreeCap)
{
    std::vector<double> c(65, 0.0);
    c.back() = 1.0;
    EXPECT_THROW(profile_from_fourier(0.0, c, {}), InvalidInput);
    c.back() = 0.0;
    EXPECT_NO_THROW(profile_from_fourier(0.0, c, {}));
}

TEST(Profile, FourierRoundTrip)
{
    const auto p = profile_from_fourier(0.5, {1.0, -0.25}, {0.3});
    const auto q = PeriodicProfile::from_complex(p.fourier());
    EXPECT_EQ(p, q);
    for (double x : {0.0, 0.13, 0.77}) EXPECT_NEAR(p(x), q(x), 1e-15);
}

TEST(Profile, ArithmeticAndDerivative)
{
    const auto a = profile_from_fourier(0.0, {1.0}, {});
    const auto b = profile_from_fourier(1.0, {}, {2.0});
    const auto c = -2.0 * a + b;
    for (double x : {0.0, 0.3, 0.61}) EXPECT_NEAR(c(x), -2.0 * a(x) + b(x), 1e-15);
    const auto d = a.derivative();
    for (double x : {0.0, 0.3, 0.61})
        EXPECT_NEAR(d(x), -2 * std::numbers::pi * std::sin(2 * std::numbers::pi * x), 1e-13);
    const auto e = a.dilated(2);
    for (double x : {0.0, 0.3, 0.61}) EXPECT_NEAR(e(x), a(2 * x), 1e-14);
}
