#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "homoeoid/volume.hpp"

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

AnnulusSpec unit_shell(int n, double delta)
{
    return AnnulusSpec(Ellipsoid(Vec::Zero(n), Radii::constant(n, 1)), delta);
}

TEST(ShellVolume, ClosedForms)
{
    EXPECT_NEAR(shell_volume(Radii::constant(2, 1), 0.25), std::numbers::pi / 2, 1e-14);
    double const v3 = shell_volume(Radii::constant(3, 1), 0.1);
    EXPECT_NEAR(v3, 4 * std::numbers::pi / 3 * (std::pow(1.1, 1.5) - std::pow(0.9, 1.5)), 1e-14);
    EXPECT_NEAR(shell_volume(Radii::constant(3, 2), 0.1), 8 * v3, 1e-12);
}

TEST(ShellVolume, RejectionSamplingOracle)
{
    RngCursor cur = CounterRng(4, 0).cursor(0);
    int const m = 2000000;
    int hits = 0;
    for (int i = 0; i < m; ++i)
    {
        Vec y(3);
        for (int j = 0; j < 3; ++j)
            y[j] = cur.uniform(-1.1, 1.1);
        hits += std::abs(y.squaredNorm() - 1) < 0.1;
    }
    double const box = std::pow(2.2, 3);
    double const p = double(hits) / m;
    double const se = box * std::sqrt(p * (1 - p) / m);
    EXPECT_NEAR(box * p, shell_volume(Radii::constant(3, 1), 0.1), 3 * se);
}

TEST(SampleAnnulus, MembershipCentreAndRadialLaw)
{
    Vec const x = vec({0.3, -0.1, 0.2});
    AnnulusSpec const spec(Ellipsoid(x, Radii(vec({1.2, 0.9, 1.1}))), 0.2);
    std::uint64_t const m = 200000;
    auto const pts = sample_annulus(spec, m, 12);
    ASSERT_EQ(pts.size(), m);
    Vec mean = Vec::Zero(3);
    std::uint64_t outer = 0;
    for (auto const& y : pts)
    {
        ASSERT_TRUE(annulus_contains(spec, y));
        mean += y;
        outer += defining_value(x, spec.radii(), y) > 0;
    }
    mean /= double(m);
    // coordinates of the annulus are bounded by sqrt(1.2) r_j
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(mean[j], x[j], 3 * 1.2 * spec.radii()[j] / std::sqrt(3.0 * m));
    double const hi = std::pow(1.2, 1.5), lo = std::pow(0.8, 1.5);
    double const expect = (hi - 1) / (hi - lo);
    double const frac = double(outer) / m;
    EXPECT_NEAR(frac, expect, 3 * std::sqrt(expect * (1 - expect) / m));
}

TEST(SampleSurface, SphereArea)
{
    auto const s = sample_surface(Ellipsoid(Vec::Zero(3), Radii::constant(3, 1)), 100000, 3);
    double sum = 0, sq = 0;
    Vec centroid = Vec::Zero(3);
    for (auto const& p : s)
    {
        sum += p.weight;
        sq += p.weight * p.weight;
        centroid += p.weight * p.point;
    }
    double const m = double(s.size());
    double const mean = sum / m;
    double const se = std::sqrt(std::max(sq / m - mean * mean, 0.0) / m);
    EXPECT_NEAR(mean, 4 * std::numbers::pi, 3 * se + 1e-12);
    EXPECT_LT((centroid / sum).norm(), 0.02);
}

TEST(SampleSurface, ProlateSpheroidArea)
{
    // polar semi-axis a = 2, equatorial b = 1
    double const a = 2, b = 1;
    double const e = std::sqrt(1 - b * b / (a * a));
    double const area = 2 * std::numbers::pi * b * b * (1 + a / (b * e) * std::asin(e));
    auto const s = sample_surface(Ellipsoid(Vec::Zero(3), Radii(vec({2, 1, 1}))), 200000, 5);
    double sum = 0, sq = 0;
    for (auto const& p : s)
    {
        sum += p.weight;
        sq += p.weight * p.weight;
    }
    double const m = double(s.size());
    double const mean = sum / m;
    double const se = std::sqrt((sq / m - mean * mean) / m);
    EXPECT_NEAR(area, 21.4784, 1e-4);
    EXPECT_NEAR(mean, area, 3 * se);
}

TEST(IntersectionVolume, SelfAndDisjoint)
{
    AnyAnnulus const a{unit_shell(3, 0.1)};
    auto const self = intersection_volume(a, a, 50000, 1);
    EXPECT_NEAR(self.value, shell_volume(Radii::constant(3, 1), 0.1), 1e-12);
    Vec far = Vec::Zero(3);
    far[0] = 10;
    AnyAnnulus const b{AnnulusSpec(Ellipsoid(far, Radii::constant(3, 1)), 0.1)};
    EXPECT_EQ(intersection_volume(a, b, 50000, 1).value, 0.0);
}

TEST(IntersectionVolume, PlanarGridOracle)
{
    double const delta = 0.05;
    AnyAnnulus const a{unit_shell(2, delta)};
    AnyAnnulus const b{AnnulusSpec(Ellipsoid(vec({1, 0}), Radii::constant(2, 1)), delta)};
    auto const mc = intersection_volume(a, b, 2000000, 9);

    int const g = 4096;
    double const lo = -1.03, hi = 2.03;
    double const h = (hi - lo) / g;
    double const hy = 2.06 / g;
    double cells = 0;
    for (int i = 0; i < g; ++i)
    {
        double const y0 = lo + (i + 0.5) * h;
        for (int j = 0; j < g; ++j)
        {
            double const y1 = -1.03 + (j + 0.5) * hy;
            double const f0 = y0 * y0 + y1 * y1 - 1;
            double const f1 = (y0 - 1) * (y0 - 1) + y1 * y1 - 1;
            cells += std::abs(f0) < delta && std::abs(f1) < delta;
        }
    }
    double const grid = cells * h * hy;
    EXPECT_NEAR(mc.value, grid, 3 * mc.std_error + 1e-4);
}

TEST(VolumeBound, ShortDistancesStayInsideShell)
{
    VolumeScanConfig cfg;
    cfg.deltas = {1.0 / 32};
    cfg.ts = {1.0 / 64, 1.0 / 32};
    cfg.pair_trials = 3;
    cfg.samples = 20000;
    cfg.seed = 4;
    auto const res = volume_bound_scan(cfg);
    ASSERT_EQ(res.rows.size(), 6u);
    double const cn = default_cn(3);
    double const cap = shell_volume(Radii::constant(3, 1 + cn * cn), 1.0 / 32);
    for (auto const& row : res.rows)
    {
        EXPECT_LE(row.measured.value, cap);
        EXPECT_GT(row.measured.value, 0);
    }
}

TEST(VolumeBound, BoundFormula)
{
    EXPECT_NEAR(volume_bound(0.01, 0.09), std::log(100.0) * 1e-4 / 0.1, 1e-15);
}

TEST(Bands, PartitionCoversTotal)
{
    Radii const r(vec({1.002, 1.001, 1.003}));
    auto const bd = banded_intersection_scan(1, 0.5, r, 1.0 / 64, 100000, 3);
    double sum = bd.tang.value + bd.trans.value;
    for (auto const& b : bd.dyadic_bands)
        sum += b.volume.value;
    EXPECT_NEAR(sum, bd.total.value, 1e-9 * std::max(1.0, bd.total.value));
    EXPECT_LE(bd.trans.value, 8 * (1.0 / 64) * (1.0 / 64) / 0.5);
}

TEST(SingleLinkage, ChainsAndGaps)
{
    std::vector<Vec> pts{vec({0, 0}), vec({0.5, 0}), vec({1.0, 0}), vec({5, 0}), vec({5.4, 0})};
    int count = 0;
    auto const labels = single_linkage(pts, 0.6, &count);
    EXPECT_EQ(count, 2);
    EXPECT_EQ(labels[0], labels[2]);
    EXPECT_EQ(labels[3], labels[4]);
    EXPECT_NE(labels[0], labels[3]);
}

TEST(Clusters, CoarseScaleGivesFewClusters)
{
    ClusterConfig cfg;
    cfg.t = 0.25;
    cfg.radii = vec({1.0, 1.2, 1.3});
    cfg.rho = 1;
    cfg.delta = 1.0 / 64;
    cfg.samples = 50000;
    cfg.seed = 2;
    auto const rep = low_jacobian_cluster(cfg);
    EXPECT_GT(rep.accepted, 0u);
    EXPECT_LE(rep.cluster_count, 16);
}

}  // namespace
}  // namespace homoeoid
