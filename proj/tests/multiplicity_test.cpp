#include <cmath>

#include <gtest/gtest.h>

#include "homoeoid/multiplicity.hpp"
#include "homoeoid/volume.hpp"

namespace homoeoid
{
namespace
{
TEST(Family, SeparatedAndReproducible)
{
    double const delta = 1.0 / 16;
    auto const a = generate_family(3, 1, delta, default_family_size(delta), 4);
    auto const b = generate_family(3, 1, delta, default_family_size(delta), 4);
    ASSERT_EQ(a.size(), 16u);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        EXPECT_EQ(a.ts[i], b.ts[i]);
        EXPECT_GE(a.ts[i], -1);
        EXPECT_LE(a.ts[i], 1);
        if (i > 0)
            EXPECT_GE(a.ts[i] - a.ts[i - 1], delta * (1 - 1e-12));
        EXPECT_TRUE(a.members[i].radii().in_restricted_box(a.c_n));
    }
}

TEST(Family, FullLattice)
{
    double const delta = 1.0 / 8;
    std::size_t const n = max_family_size(delta);
    EXPECT_EQ(n, 17u);
    auto const f = generate_family(3, 2, delta, n, 9);
    for (std::size_t i = 0; i < n; ++i)
        EXPECT_NEAR(f.ts[i], -1 + double(i) * delta, 1e-15);
    EXPECT_THROW(generate_family(3, 2, delta, n + 1, 9), std::invalid_argument);
}

TEST(Overlap, SingleMember)
{
    auto const f = generate_family(3, 1, 1.0 / 16, 1, 2);
    auto const res = overlap_l2(f, {}, 3);
    double const shell = shell_volume(f.members[0].radii(), 1.0 / 16);
    EXPECT_NEAR(res.unrefined_norm.value, std::sqrt(shell), 1e-12);
    EXPECT_LE(res.norm.value, res.unrefined_norm.value);
}

TEST(Overlap, PairwiseMatchesDirectSampling)
{
    for (std::uint64_t seed : {1u, 2u, 3u})
    {
        auto const f = generate_family(3, 1, 1.0 / 8, 6, seed);
        auto const pair = overlap_l2(f, {40000, 4000}, seed);
        auto const direct = direct_overlap_square(f, true, 2000000, seed + 10);
        double const se = std::hypot(pair.square.std_error, direct.std_error);
        EXPECT_LT(std::abs(pair.square.value - direct.value), 3.5 * se);
    }
}

TEST(Overlap, UnrefinedDominatesRefined)
{
    auto const f = generate_family(3, 1, 1.0 / 16, 16, 5);
    auto const res = overlap_l2(f, {4000, 1000}, 5);
    EXPECT_GE(res.unrefined_norm.value, res.norm.value);
    EXPECT_GT(res.norm.value, 0);
}

TEST(Multiplicity, BoundFormula)
{
    EXPECT_NEAR(multiplicity_bound(1.0 / 64, 64), std::log(64.0) * 0.125 * 8, 1e-12);
}

}  // namespace
}  // namespace homoeoid
