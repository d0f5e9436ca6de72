#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "estimate.hpp"
#include "field.hpp"
#include "geometry.hpp"

namespace homoeoid
{
__extension__ using Int128 = __int128;

/*!
 * Annulus average held as scale * sum with an exact integer sum.
 *
 * Sample values are quantised to multiples of 2^-48 before summation, so
 * sums over the same samples compare exactly.
 */
struct ExactAverage
{
    double scale{0};
    Int128 sum{0};

    double value() const { return scale * static_cast<double>(sum); }
};

inline constexpr int kFixedPointBits = 48;

enum class AverageMode
{
    absolute,  //!< average of |f|
    signed_diagnostic,  //!< average of f, for symmetry tests only
};

MCEstimate annulus_average(Field const& f,
                           AnyAnnulus const& spec,
                           std::uint64_t m,
                           std::uint64_t seed,
                           AverageMode mode = AverageMode::absolute);

/*!
 * Plain and all n refined averages of |f| from one shared sample set.
 *
 * Entry 0 is the plain average; entry k the refined average for axis k.
 */
std::vector<ExactAverage> shared_averages(Field const& f,
                                          AnnulusSpec const& spec,
                                          double c_n,
                                          std::uint64_t m,
                                          std::uint64_t seed);

//---------------------------------------------------------------------------//
//! Regular grid over a radii box.
class RadiiNet
{
  public:
    //! Net over [lo, hi]^n with step min(delta / 4, (hi - lo) / 4).
    RadiiNet(int n, double lo, double hi, double delta);
    //! Net over the restricted box [1, 1 + c_n^2]^n.
    static RadiiNet restricted(int n, double c_n, double delta);

    int dim() const { return n_; }
    double step() const { return step_; }
    std::size_t size() const { return total_; }
    Radii at(std::size_t index) const;
    std::vector<Radii> points() const;

  private:
    int n_;
    double lo_;
    double hi_;
    double step_;
    int per_axis_;
    std::size_t total_;
};

//! Seed for one (x, r) evaluation; depends only on the bit patterns.
std::uint64_t point_seed(std::uint64_t seed, Vec const& x, Radii const& r);

//! Sup over net points of the plain (k = 0) or refined (k >= 1) average.
double discretised_maximal(Field const& f,
                           Vec const& x,
                           double delta,
                           std::vector<Radii> const& net,
                           int k,
                           std::uint64_t m,
                           std::uint64_t seed,
                           double c_n = 0);

struct DominationResult
{
    double max_violation{0};  //!< max over x of M f(x) - sum_k M_k f(x)
    std::size_t violations{0};  //!< count of x with a strictly positive gap
    std::vector<double> plain;  //!< M f(x)
    std::vector<double> refined_sum;  //!< sum_k M_k f(x)
};

DominationResult domination_check(Field const& f,
                                  std::vector<Vec> const& xs,
                                  double delta,
                                  std::vector<Radii> const& net,
                                  std::uint64_t m,
                                  std::uint64_t seed,
                                  double c_n = 0);

MCEstimate lp_norm(Field const& f, double p, Box const& region, std::uint64_t m, std::uint64_t seed);

//---------------------------------------------------------------------------//
struct GrowthRow
{
    double delta;
    int field_id;
    MCEstimate norm;
};

struct GrowthScan
{
    std::vector<GrowthRow> rows;
    ScalingFit fit;  //!< log mean norm against log(1/delta)
};

struct GrowthConfig
{
    int n{3};
    std::vector<double> deltas;
    int family_size{3};
    Box x_region;
    std::uint64_t x_samples{64};
    std::uint64_t samples{2000};
    std::uint64_t seed{0};
    double c_n{0};
};

GrowthScan l2_growth_scan(std::function<Field(int field_id)> const& family, GrowthConfig const& cfg);

}  // namespace homoeoid
