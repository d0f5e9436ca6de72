#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "homoeoid/estimate.hpp"
#include "homoeoid/parallel.hpp"
#include "homoeoid/rng.hpp"

namespace homoeoid
{
namespace
{
TEST(CounterRng, Deterministic)
{
    CounterRng const a(42, 7), b(42, 7);
    RngCursor ca = a.cursor(0), cb = b.cursor(0);
    for (int i = 0; i < 1000000; ++i)
        ASSERT_EQ(ca.next_u64(), cb.next_u64());
}

TEST(CounterRng, RandomAccessMatchesCursor)
{
    CounterRng const rng(1, 2);
    RngCursor cur = rng.cursor(3);
    for (std::uint64_t i = 0; i < 100; ++i)
    {
        auto const blk = rng.block(i, 3);
        auto const lo = cur.next_u64();
        auto const hi = cur.next_u64();
        EXPECT_EQ(lo, (std::uint64_t(blk[0]) << 32) | blk[1]);
        EXPECT_EQ(hi, (std::uint64_t(blk[2]) << 32) | blk[3]);
    }
}

TEST(CounterRng, UniformMean)
{
    CounterRng const rng(3, 0);
    double sum = 0;
    int const m = 1000000;
    for (int i = 0; i < m; ++i)
        sum += rng.uniform(i);
    EXPECT_NEAR(sum / m, 0.5, 0.002);
}

TEST(CounterRng, StreamsUncorrelated)
{
    RngCursor a = CounterRng(5, 0).cursor(0);
    RngCursor b = CounterRng(5, 1).cursor(0);
    int const m = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < m; ++i)
    {
        double const x = a.uniform(), y = b.uniform();
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    double const cov = sxy / m - sx * sy / m / m;
    double const corr = cov / std::sqrt((sxx / m - sx * sx / m / m) * (syy / m - sy * sy / m / m));
    EXPECT_LT(std::abs(corr), 0.01);
}

TEST(CounterRng, UnitVectorsOnSphere)
{
    RngCursor cur = CounterRng(8, 0).cursor(0);
    Vec mean = Vec::Zero(4);
    for (int i = 0; i < 20000; ++i)
    {
        Vec const v = cur.unit_vector(4);
        ASSERT_NEAR(v.norm(), 1, 1e-14);
        mean += v;
    }
    EXPECT_LT((mean / 20000).norm(), 0.03);
}

TEST(ParallelMap, IndexOrderAndErrors)
{
    set_worker_count(3);
    auto const out = parallel_map<int>(100, [](std::size_t i) { return static_cast<int>(i * i); });
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(out[i], i * i);
    EXPECT_THROW(parallel_map<int>(10,
                                   [](std::size_t i) -> int {
                                       if (i == 7)
                                           throw std::runtime_error("boom");
                                       return 0;
                                   }),
                 std::runtime_error);
    set_worker_count(0);
}

TEST(MonteCarlo, ReproducibleAcrossWorkerCounts)
{
    auto run = [] {
        return mc_mean(300000, 17, 4, [](RngCursor& c) { return std::exp(c.uniform()); });
    };
    set_worker_count(1);
    auto const a = run();
    set_worker_count(3);
    auto const b = run();
    set_worker_count(0);
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.std_error, b.std_error);
    EXPECT_NEAR(a.value, std::exp(1.0) - 1, 4 * a.std_error);
}

TEST(PowerLawFit, ExactSquare)
{
    std::vector<std::pair<double, double>> pts{{1, 1}, {2, 4}, {4, 16}, {8, 64}};
    auto const fit = fit_power_law(pts);
    EXPECT_NEAR(fit.slope, 2.0, 1e-14);
    EXPECT_NEAR(fit.max_abs_residual, 0, 1e-14);
}

TEST(PowerLawFit, Constant)
{
    std::vector<std::pair<double, double>> pts{{1, 3}, {2, 3}, {4, 3}};
    EXPECT_NEAR(fit_power_law(pts).slope, 0, 1e-15);
}

TEST(PowerLawFit, NoisyCubeRoot)
{
    RngCursor cur = CounterRng(2, 0).cursor(0);
    for (int trial = 0; trial < 100; ++trial)
    {
        std::vector<std::pair<double, double>> pts;
        for (int e = 4; e <= 12; ++e)
        {
            double const x = std::ldexp(1.0, e);
            pts.emplace_back(x, 3 * std::pow(x, -1.0 / 3) * (1 + cur.uniform(-0.05, 0.05)));
        }
        EXPECT_NEAR(fit_power_law(pts).slope, -1.0 / 3, 0.05);
    }
}

TEST(PowerLawFit, RejectsBadInput)
{
    std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
    EXPECT_THROW(fit_power_law(two), std::invalid_argument);
    std::vector<std::pair<double, double>> neg{{1, 1}, {2, -2}, {3, 1}};
    EXPECT_THROW(fit_power_law(neg), std::invalid_argument);
}

}  // namespace
}  // namespace homoeoid
