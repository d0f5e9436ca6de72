#include <cmath>

#include <gtest/gtest.h>

#include "homoeoid/geometry.hpp"
#include "homoeoid/rng.hpp"

namespace homoeoid
{
namespace
{
Vec vec(std::initializer_list<double> xs)
{
    Vec v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs)
        v[i++] = x;
    return v;
}

TEST(DefiningFunction, UnitSphereValues)
{
    Vec const x = Vec::Zero(3);
    Radii const r = Radii::constant(3, 1);
    EXPECT_DOUBLE_EQ(defining_value(x, r, vec({1, 0, 0})), 0);
    EXPECT_DOUBLE_EQ(defining_value(x, r, Vec::Zero(3)), -1);
}

TEST(DefiningFunction, DiagonalCentreThroughOrigin)
{
    double const h = std::sqrt(3.0) / 2;
    EXPECT_NEAR(defining_value(vec({h, h, h}), Radii::constant(3, 1.5), Vec::Zero(3)), 0, 1e-15);
}

TEST(DefiningFunction, GradientMatchesDifferences)
{
    Vec const x = vec({0.3, -0.2, 0.1});
    Radii const r(vec({1.2, 0.8, 1.5}));
    Vec const y = vec({0.7, 0.4, -0.9});
    auto const dv = defining_function(x, r, y);
    for (int j = 0; j < 3; ++j)
    {
        Vec e = Vec::Zero(3);
        e[j] = 1e-6;
        double const fd = (defining_value(x, r, y + e) - defining_value(x, r, y - e)) / 2e-6;
        EXPECT_NEAR(dv.gradient[j], fd, 1e-8);
    }
}

TEST(AffineMap, ForwardAndInverse)
{
    Vec const x = vec({1, 0});
    Radii const r(vec({2, 3}));
    Vec const y = affine_map(x, r, vec({1, 1}), MapDirection::forward);
    EXPECT_DOUBLE_EQ(y[0], 3);
    EXPECT_DOUBLE_EQ(y[1], 3);
    Vec const w = affine_map(x, r, y, MapDirection::inverse);
    EXPECT_DOUBLE_EQ(w[0], 1);
    EXPECT_DOUBLE_EQ(w[1], 1);
    Vec const id = affine_map(Vec::Zero(2), Radii::constant(2, 1), vec({0.3, -0.4}), MapDirection::forward);
    EXPECT_DOUBLE_EQ(id[0], 0.3);
    EXPECT_DOUBLE_EQ(id[1], -0.4);
}

TEST(Annulus, Membership)
{
    AnnulusSpec const a(Ellipsoid(Vec::Zero(3), Radii::constant(3, 1)), 0.1);
    EXPECT_TRUE(annulus_contains(a, vec({1, 0, 0})));
    // F = 1.06^2 - 1 = 0.1236
    EXPECT_FALSE(annulus_contains(a, vec({1.06, 0, 0})));
    RefinedAnnulusSpec const ref(a, 3, 0.017);
    EXPECT_FALSE(annulus_contains(ref, vec({1, 0, 0})));
    EXPECT_TRUE(annulus_contains(ref, vec({0, 0, 1})));
}

TEST(Annulus, RejectsBadDelta)
{
    Ellipsoid const e(Vec::Zero(2), Radii::constant(2, 1));
    EXPECT_THROW(AnnulusSpec(e, 0.7), std::invalid_argument);
    EXPECT_THROW(AnnulusSpec(e, 0), std::invalid_argument);
}

TEST(GramNorm, CoincidentSpheresVanish)
{
    TangencyConfig const cfg(AxisFrame::standard(3, 1), 0, Radii::constant(3, 1));
    RngCursor cur = CounterRng(3, 0).cursor(0);
    for (int i = 0; i < 20; ++i)
    {
        auto const g = jacobian_gram_norm(cfg, cur.unit_vector(3));
        EXPECT_NEAR(g.via_gram, 0, 1e-12);
        EXPECT_NEAR(g.via_cauchy_binet, 0, 1e-12);
    }
}

TEST(GramNorm, PlanarExample)
{
    TangencyConfig const cfg(AxisFrame::standard(2, 2), 1, Radii::constant(2, 1));
    auto const g = jacobian_gram_norm(cfg, vec({0, 1}));
    EXPECT_NEAR(g.via_gram, 4, 1e-12);
    EXPECT_NEAR(g.via_cauchy_binet, 4, 1e-12);
}

TEST(GramNorm, DualPathAgreesOnRandomTuples)
{
    RngCursor cur = CounterRng(11, 0).cursor(0);
    for (int i = 0; i < 100; ++i)
    {
        int const n = 2 + static_cast<int>(cur.next_u64() % 7);
        int const k = 1 + static_cast<int>(cur.next_u64() % n);
        Vec r(n);
        for (int j = 0; j < n; ++j)
            r[j] = cur.uniform(0.5, 2);
        TangencyConfig const cfg(AxisFrame::standard(n, k), cur.uniform(0, 2), Radii(r));
        auto const g = jacobian_gram_norm(cfg, cur.unit_vector(n));
        EXPECT_LT(g.relative_residual(), 1e-10);
    }
}

// Second transcription of G_{i,j}, written from the defining formula.
double minor_reference(int i, int j, Vec const& w, double t, Vec const& r, Vec const& d)
{
    double const gi = w[i] / (r[i] * r[i]) - t * d[i] / (r[i] * r[i]);
    double const gj = w[j] / (r[j] * r[j]) - t * d[j] / (r[j] * r[j]);
    // det [[w_i, w_j], [(w_i - t d_i)/r_i^2, (w_j - t d_j)/r_j^2]]
    return w[i] * gj - w[j] * gi;
}

TEST(PhiK, MatchesIndependentTranscription)
{
    RngCursor cur = CounterRng(5, 0).cursor(0);
    for (int trial = 0; trial < 50; ++trial)
    {
        int const n = 3 + trial % 4;
        int const k = 1 + trial % n;
        Vec r(n);
        for (int j = 0; j < n; ++j)
            r[j] = cur.uniform(0.5, 2);
        double const t = cur.uniform(0, 2);
        TangencyConfig const cfg(AxisFrame::standard(n, k), t, Radii(r));
        Vec const w = cur.gaussian_vector(n);
        auto const phi = phi_k(cfg, w);
        Vec const& d = cfg.frame().d_tilde;
        int row = 0;
        for (int j = 0; j < n; ++j)
        {
            if (j == k - 1)
                continue;
            double const ref = minor_reference(j, k - 1, w, t, r, d);
            EXPECT_NEAR(phi.value[row], ref, 1e-12 * std::max(1.0, std::abs(ref)));
            ++row;
        }
        EXPECT_NEAR(phi.value[n - 1], (w.squaredNorm() - 1) / 2, 1e-12);
    }
}

TEST(PhiK, LastComponentVanishesOnSphere)
{
    TangencyConfig const cfg(AxisFrame::standard(4, 2), 0.7, Radii::constant(4, 1.3));
    RngCursor cur = CounterRng(9, 0).cursor(0);
    for (int i = 0; i < 10; ++i)
        EXPECT_NEAR(phi_k(cfg, cur.unit_vector(4)).value[3], 0, 1e-15);
}

TEST(PhiK, ConcentricTangencyRoot)
{
    double const t = 1.2;
    double const rad = std::abs(1 - t * std::sqrt(2.0));
    TangencyConfig const cfg(AxisFrame::standard(3, 3), t, Radii::constant(3, rad));
    auto const phi = phi_k(cfg, vec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0}));
    EXPECT_NEAR(phi.value.cwiseAbs().maxCoeff(), 0, 1e-12);
}

TEST(TangencyMap, ClosedForms)
{
    double const h = std::sqrt(3.0) / 2;
    Radii const r = tangency_radii(vec({h, h, h}));
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(r[j], 1.5, 1e-14);
    Vec const x = tangency_map(Radii::constant(3, 1.5));
    EXPECT_NEAR(x.norm(), 1.5, 1e-14);
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(x[j], h, 1e-14);
}

TEST(TangencyMap, RoundTripAndTangentPlane)
{
    RngCursor cur = CounterRng(21, 0).cursor(0);
    for (int trial = 0; trial < 200; ++trial)
    {
        int const n = 2 + trial % 7;
        Vec x(n);
        for (int j = 0; j < n; ++j)
            x[j] = cur.uniform(0.1, 3);
        Radii const r = tangency_radii(x);
        EXPECT_LT((tangency_map(r) - x).cwiseAbs().maxCoeff(), 1e-12 * x.norm());
        auto const dv = defining_function(x, r, Vec::Zero(n));
        EXPECT_NEAR(dv.value, 0, 1e-12);
        Vec const g = dv.gradient / dv.gradient.norm();
        Vec const ones = Vec::Ones(n) / std::sqrt(double(n));
        EXPECT_NEAR(std::abs(g.dot(ones)), 1, 1e-12);
    }
}

TEST(AxisFrame, PerturbationBound)
{
    double const c = default_cn(3);
    Vec d = AxisFrame::standard(3, 1).d;
    Vec ok = d;
    ok[1] += 0.5 * c * c;
    EXPECT_NO_THROW(AxisFrame::perturbed(3, 1, ok, c));
    Vec bad = d;
    bad[1] += 2 * c * c;
    EXPECT_THROW(AxisFrame::perturbed(3, 1, bad, c), std::invalid_argument);
}

}  // namespace
}  // namespace homoeoid
