#include <cmath>

#include <gtest/gtest.h>

#include "homoeoid/field.hpp"
#include "homoeoid/knapp.hpp"
#include "homoeoid/maximal.hpp"
#include "homoeoid/parallel.hpp"

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

AnyAnnulus shell(Vec const& x, Radii const& r, double delta)
{
    return AnnulusSpec(Ellipsoid(x, r), delta);
}

TEST(AnnulusAverage, ConstantField)
{
    Field const f = Field::constant(2.5, Box::cube(3, 4));
    auto const est = annulus_average(f, shell(vec({0.1, 0.2, 0}), Radii::constant(3, 1.1), 0.05), 20000, 3);
    EXPECT_NEAR(est.value, 2.5, 1e-12);
}

TEST(AnnulusAverage, OddFieldSignedDiagnostic)
{
    Field const f = Field::closure([](Vec const& y) { return y[0]; }, Box::cube(3, 2));
    auto const est = annulus_average(f, shell(Vec::Zero(3), Radii::constant(3, 1), 0.1), 200000, 5,
                                     AverageMode::signed_diagnostic);
    EXPECT_NEAR(est.value, 0, 3 * est.std_error);
}

TEST(AnnulusAverage, ExactSumsMatchAcrossWorkers)
{
    BumpMixture const b = random_bump_mixture(3, 4, 8);
    Field const f = b.field();
    auto const spec = shell(vec({0.2, 0, -0.1}), Radii::constant(3, 1.01), 1.0 / 16);
    set_worker_count(1);
    auto const a = annulus_average(f, spec, 150000, 2);
    set_worker_count(3);
    auto const c = annulus_average(f, spec, 150000, 2);
    set_worker_count(0);
    EXPECT_EQ(a.value, c.value);
}

TEST(RadiiNet, RestrictedBox)
{
    double const cn = default_cn(3);
    RadiiNet const net = RadiiNet::restricted(3, cn, 1.0 / 64);
    for (auto const& r : net.points())
        EXPECT_TRUE(r.in_restricted_box(cn));
    EXPECT_EQ(net.points().size(), net.size());
}

TEST(Maximal, ConstantFieldAndOrdering)
{
    Field const one = Field::constant(1, Box::cube(3, 4));
    Vec const x = vec({0.1, -0.2, 0.3});
    auto const net = RadiiNet::restricted(3, default_cn(3), 1.0 / 32).points();
    EXPECT_NEAR(discretised_maximal(one, x, 1.0 / 32, net, 0, 2000, 1), 1, 1e-12);

    Field const f = random_bump_mixture(3, 3, 4).field();
    double const plain = discretised_maximal(f, x, 1.0 / 32, net, 0, 2000, 7);
    for (auto const& r : net)
    {
        auto const single = annulus_average(f, AnnulusSpec(Ellipsoid(x, r), 1.0 / 32), 2000, point_seed(7, x, r));
        EXPECT_LE(single.value, plain);
    }
    for (int k = 1; k <= 3; ++k)
        EXPECT_LE(discretised_maximal(f, x, 1.0 / 32, net, k, 2000, 7), plain);
}

TEST(Domination, ConstantField)
{
    Field const one = Field::constant(1, Box::cube(3, 4));
    auto const net = RadiiNet::restricted(3, default_cn(3), 1.0 / 16).points();
    auto const dom = domination_check(one, {vec({0, 0, 0}), vec({0.5, 0.1, 0})}, 1.0 / 16, net, 1000, 1);
    EXPECT_EQ(dom.violations, 0u);
    for (std::size_t i = 0; i < dom.plain.size(); ++i)
    {
        EXPECT_NEAR(dom.plain[i], 1, 1e-12);
        EXPECT_LE(dom.plain[i], 3);
    }
}

TEST(Domination, KnappSlabHasNoViolations)
{
    double const delta = 1.0 / 64;
    Field const slab = knapp_slab(3, delta).field();
    auto const pts = sample_tangency_set(3, 100, 5);
    std::vector<Vec> xs;
    for (auto const& p : pts)
        xs.push_back(p.x);
    auto const net = RadiiNet::restricted(3, default_cn(3), delta).points();
    auto const dom = domination_check(slab, xs, delta, net, 500, 9);
    EXPECT_EQ(dom.violations, 0u);
    EXPECT_LE(dom.max_violation, 0);
}

TEST(LpNorm, UnitCubeAndHomogeneity)
{
    Box unit{Vec::Zero(3), Vec::Ones(3)};
    Field const ind = Field::constant(1, unit);
    for (double p : {1.0, 2.0, 3.5})
        EXPECT_NEAR(lp_norm(ind, p, unit, 1000, 1).value, 1, 1e-12);
    Field const f = random_bump_mixture(3, 2, 3).field();
    Box const region = Box::cube(3, 2.5);
    auto const a = lp_norm(f, 2, region, 50000, 4);
    auto const b = lp_norm(f.scaled(3), 2, region, 50000, 4);
    EXPECT_NEAR(b.value, 3 * a.value, 1e-12);
}

TEST(LpNorm, BumpMixtureIsNormalised)
{
    BumpMixture const b = random_bump_mixture(3, 4, 6);
    EXPECT_NEAR(b.l2_norm_squared(), 1, 1e-12);
    auto const est = lp_norm(b.field(), 2, b.field().bounding_box(), 400000, 3);
    EXPECT_NEAR(est.value, 1, 4 * est.std_error + 1e-3);
}

TEST(LpNorm, KnappSlabExactVolume)
{
    double const delta = 1.0 / 64;
    KnappSlab const slab = knapp_slab(3, delta);
    Box const box = slab.field().bounding_box();
    auto const est = lp_norm(slab.field(), 2, box, 400000, 8);
    EXPECT_NEAR(est.value, std::sqrt(slab.volume()), 4 * est.std_error);
    EXPECT_NEAR(slab.volume(), delta * delta, 1e-15);
}

TEST(Growth, ConstantFieldHasFlatSlope)
{
    GrowthConfig cfg;
    cfg.deltas = {1.0 / 16, 1.0 / 32, 1.0 / 64};
    cfg.family_size = 1;
    cfg.x_region = Box::cube(3, 0.5);
    cfg.x_samples = 4;
    cfg.samples = 200;
    auto const scan
        = l2_growth_scan([](int) { return Field::constant(1, Box::cube(3, 4)); }, cfg);
    EXPECT_NEAR(scan.fit.slope, 0, 1e-9);
}

}  // namespace
}  // namespace homoeoid
