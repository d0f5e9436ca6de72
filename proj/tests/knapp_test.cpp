#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "homoeoid/knapp.hpp"
#include "homoeoid/volume.hpp"

namespace homoeoid
{
namespace
{
TEST(Frame, OrthogonalWithNormalLastRow)
{
    for (int n = 2; n <= 8; ++n)
    {
        Mat const u = tangential_frame(n);
        EXPECT_LT((u * u.transpose() - Mat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((u.row(n - 1).transpose() - normal_direction(n)).norm(), 1e-14);
    }
}

TEST(KnappSlab, Membership)
{
    double const delta = 1.0 / 64;
    KnappSlab const slab(3, delta);
    Mat const u = tangential_frame(3);
    EXPECT_TRUE(slab.contains(Vec::Zero(3)));
    EXPECT_FALSE(slab.contains(0.6 * delta * normal_direction(3)));
    Vec const v = u.row(0).transpose();
    EXPECT_TRUE(slab.contains(std::sqrt(delta) / 4 * v));
    EXPECT_THROW(KnappSlab(3, 0.7), std::invalid_argument);
}

TEST(TangencySet, ForcedThroughOrigin)
{
    auto const pts = sample_tangency_set(3, 200, 3);
    for (auto const& p : pts)
    {
        EXPECT_NEAR(defining_value(p.x, p.radii, Vec::Zero(3)), 0, 1e-12);
        Vec const back = tangency_map(tangency_radii(p.x));
        EXPECT_LT((back - p.x).norm(), 1e-12);
        Radii const r = tangency_radii(p.x);
        for (int j = 0; j < 3; ++j)
            EXPECT_NEAR(r[j], p.radii[j], 1e-12);
    }
    Vec const x = tangency_map(Radii::constant(3, 1.5));
    EXPECT_NEAR(x.norm(), 1.5, 1e-14);
}

TEST(KnappSlope, PredictedExponents)
{
    EXPECT_NEAR(knapp_predicted_slope(3, 1.5), -1.0 / 3, 1e-15);
    EXPECT_NEAR(knapp_predicted_slope(3, 2), 0, 1e-15);
    EXPECT_NEAR(knapp_predicted_slope(3, 3), 1.0 / 3, 1e-15);
}

TEST(KnappSlope, CriticalCaseIsFlat)
{
    KnappConfig cfg;
    cfg.deltas = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
    cfg.x_samples = 60;
    cfg.slab_samples = 1500;
    cfg.seed = 2;
    auto const res = knapp_exponent(cfg);
    EXPECT_NEAR(res.fit.slope, 0, 0.1);
}

TEST(Counterexample, ProfileValues)
{
    CounterexampleField const g(3, 4);
    Vec p(3);
    p << 0.25, 0, 0;
    EXPECT_NEAR(g.profile(p), 16 * std::pow(2.0, -0.75), 1e-12);
    p << 0.6, 0, 0;
    EXPECT_EQ(g.profile(p), 0);
    p << 0.25, 0, 0.3;
    EXPECT_EQ(g.profile(p), 0);
    Mat const u = g.frame();
    EXPECT_LT((u * u.transpose() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Counterexample, NormsByExponent)
{
    auto const two = g_lp_norm(3, 2, 4);
    ASSERT_TRUE(two.finite);
    EXPECT_NEAR(two.norm_p, 32 * std::numbers::pi * std::numbers::ln2, 1e-6);
    EXPECT_TRUE(g_lp_norm(3, 1, 4).finite);
    auto const over = g_lp_norm(3, 2.5, 4);
    EXPECT_FALSE(over.finite);
    EXPECT_TRUE(std::isinf(over.norm));
    ASSERT_GE(over.cutoff_study.size(), 2u);
    EXPECT_GT(over.cutoff_study.back().second, over.cutoff_study.front().second);
}

TEST(Counterexample, PartialSumsIncrease)
{
    auto const point = sample_tangency_set(3, 1, 7)[0];
    auto const sums = shell_partial_sums(point, 64, 1000, 3);
    ASSERT_EQ(sums.partial.size(), 64u);
    for (std::size_t i = 1; i < sums.partial.size(); ++i)
        EXPECT_GT(sums.partial[i], sums.partial[i - 1]);
    // terms decay like l^{-3/4}
    double const ratio = sums.terms[63].value / sums.terms[15].value;
    EXPECT_NEAR(ratio, std::pow(4.0, -0.75), 0.1);
}

TEST(Counterexample, ShellTermsAgreeWithSurfaceSampling)
{
    auto const point = sample_tangency_set(3, 1, 7)[0];
    auto const sums = shell_partial_sums(point, 4, 4000, 5);
    auto const direct = shell_terms_by_surface_sampling(point, 4, 1000000, 6);
    for (int l = 1; l < 4; ++l)
    {
        double const se = std::hypot(sums.terms[l].std_error, direct[l].std_error);
        EXPECT_LT(std::abs(sums.terms[l].value - direct[l].value), 4 * se);
    }
}

}  // namespace
}  // namespace homoeoid
