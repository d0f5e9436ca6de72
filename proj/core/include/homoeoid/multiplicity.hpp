#pragma once

#include <cstdint>
#include <vector>

#include "estimate.hpp"
#include "geometry.hpp"

namespace homoeoid
{
//! Ellipsoids centred at t_i d_k with delta-separated t_i in [-1, 1].
struct EllipsoidFamily
{
    int k{1};
    double delta{0};
    double c_n{0};
    std::vector<double> ts;  //!< increasing
    std::vector<Ellipsoid> members;

    std::size_t size() const { return members.size(); }
};

//! Largest admissible family size floor(2 / delta) + 1.
std::size_t max_family_size(double delta);

/*!
 * Jittered-lattice family of N members.
 *
 * Spare room 2 - (N - 1) delta is split into N + 1 random gaps; with no
 * spare room the lattice -1 + i delta is returned. Radii are i.i.d. uniform
 * in [1, 1 + c_n^2]^n.
 */
EllipsoidFamily generate_family(
    int n, int k, double delta, std::size_t count, std::uint64_t seed, double c_n = 0);

struct PairClass
{
    int dyadic;  //!< -1 for the diagonal, else floor(log2(|t_i - t_j| / delta))
    std::size_t pairs;
    std::size_t skipped;  //!< pairs whose bounding balls are disjoint
    std::uint64_t samples_per_pair;
    double volume_sum;  //!< refined, counting each unordered pair once
};

struct OverlapResult
{
    MCEstimate norm;  //!< ||sum chi_{E^{delta,k}}||_2
    MCEstimate unrefined_norm;  //!< same with plain annuli
    MCEstimate square;  //!< ||.||_2^2, refined
    double diagonal{0};  //!< sum_i |E_i^{delta,k}|
    std::vector<PairClass> classes;
    double max_count_ratio{0};  //!< max over members and classes of count / (tau / delta)
};

struct OverlapOptions
{
    std::uint64_t samples{20000};  //!< per pair at distance delta
    std::uint64_t min_samples{2000};
};

OverlapResult overlap_l2(EllipsoidFamily const& family, OverlapOptions const& opts, std::uint64_t seed);

//! Direct estimate of integral (sum_i chi_i)^2 by sampling a bounding box.
MCEstimate direct_overlap_square(EllipsoidFamily const& family,
                                 bool refined,
                                 std::uint64_t m,
                                 std::uint64_t seed);

//! log(1/delta) delta^{1/2} N^{1/2}
double multiplicity_bound(double delta, std::size_t count);

struct CordobaRow
{
    double delta;
    std::uint64_t trial_seed;
    std::size_t count;
    MCEstimate norm;
    MCEstimate unrefined_norm;
    double bound;
    double constant;
    double unrefined_constant;
    double max_count_ratio;
};

struct CordobaConfig
{
    int n{3};
    int k{1};
    std::vector<double> deltas;
    int trials{2};
    OverlapOptions overlap;
    std::uint64_t seed{0};
    double c_n{0};
};

struct CordobaResult
{
    std::vector<CordobaRow> rows;
    std::vector<std::pair<double, double>> worst_by_delta;  //!< (delta, worst C)
    double drift{0};
};

//! Family size rule floor(1 / delta).
std::size_t default_family_size(double delta);

CordobaResult cordoba_check(CordobaConfig const& cfg);

}  // namespace homoeoid
