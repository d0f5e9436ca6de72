#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "estimate.hpp"
#include "geometry.hpp"
#include "rng.hpp"

namespace homoeoid
{
double unit_ball_volume(int n);
double unit_sphere_area(int n);  //!< |S^{n-1}|

//! Exact Lebesgue measure of E^delta(x, r); delta in (0, 1).
double shell_volume(Radii const& r, double delta);

//---------------------------------------------------------------------------//
/*!
 * Flattened annulus for inner loops.
 *
 * Holds centre, radii and their inverse squares; the refinement filter is
 * applied to the preimage omega when axis > 0.
 */
class AnnulusKernel
{
  public:
    explicit AnnulusKernel(AnyAnnulus const& spec);

    int dim() const { return static_cast<int>(centre_.size()); }
    double delta() const { return delta_; }
    Vec const& centre() const { return centre_; }
    Vec const& radii() const { return radii_; }
    Vec const& inv_r2() const { return inv_r2_; }
    double volume() const { return volume_; }
    bool refined() const { return axis_ > 0; }

    double defining(Vec const& y) const
    {
        double f = -1;
        for (Eigen::Index j = 0; j < y.size(); ++j)
        {
            double const d = y[j] - centre_[j];
            f += d * d * inv_r2_[j];
        }
        return f;
    }

    bool refinement_ok(Vec const& y) const
    {
        if (axis_ == 0)
            return true;
        double const w = std::abs((y[axis_ - 1] - centre_[axis_ - 1])
                                  / radii_[axis_ - 1]);
        return w * w * w >= 2 * c_n_;
    }

    bool contains(Vec const& y) const
    {
        return std::abs(defining(y)) < delta_ && refinement_ok(y);
    }

    bool contains_unrefined(Vec const& y) const
    {
        return std::abs(defining(y)) < delta_;
    }

    //! Uniform point of the full (unrefined) annulus and its preimage.
    Vec sample(RngCursor& cur, Vec* preimage = nullptr) const;

  private:
    Vec centre_;
    Vec radii_;
    Vec inv_r2_;
    double delta_;
    int axis_{0};
    double c_n_{0};
    double volume_;
    double s_lo_n_;  // (1 - delta)^{n/2}
    double s_hi_n_;  // (1 + delta)^{n/2}
};

//! Radius of a uniform draw from the shell sqrt(1-delta) < |omega| < sqrt(1+delta).
double sample_shell_radius(RngCursor& cur, int n, double delta);

std::vector<Vec> sample_annulus(AnnulusSpec const& spec, std::uint64_t m, std::uint64_t seed);

struct SurfaceSample
{
    Vec point;
    double weight;
};

//! Area element of the ellipsoid at A(theta) over the spherical density.
double surface_weight(Vec const& radii, Vec const& theta);

std::vector<SurfaceSample>
sample_surface(Ellipsoid const& e, std::uint64_t m, std::uint64_t seed);

//! |a cap b| as volume(a) times the hit fraction of uniform a-samples.
MCEstimate intersection_volume(AnyAnnulus const& a,
                               AnyAnnulus const& b,
                               std::uint64_t m,
                               std::uint64_t seed);

//---------------------------------------------------------------------------//
// Volume-bound scan

struct VolumeScanConfig
{
    int n{3};
    int k{1};
    std::vector<double> deltas;
    std::vector<double> ts;
    int pair_trials{50};
    std::uint64_t samples{100000};
    std::uint64_t seed{0};
    double c_n{0};  //!< 0 selects default_cn(n)
    bool refined{true};
};

struct VolumeScanRow
{
    double delta;
    double t;
    int pair;
    std::uint64_t seed;
    MCEstimate measured;
    double bound;
    double ratio;
};

struct VolumeScanResult
{
    std::vector<VolumeScanRow> rows;
    std::vector<std::pair<double, double>> max_ratio_by_delta;
    double drift{0};  //!< max / min of max_ratio_by_delta
};

//! log(1/delta) delta^2 / (delta + t)
double volume_bound(double delta, double t);

/*!
 * Pair of annuli in normalised position for one radii pair.
 *
 * The first annulus is mapped to E(0, 1); the second sits at t * d_tilde with
 * d_tilde = d_k / r1 and radii r2 / r1.
 */
std::pair<AnyAnnulus, AnyAnnulus> normalised_pair(
    int k, double t, Radii const& r1, Radii const& r2, double delta, double c_n, bool refined);

VolumeScanResult volume_bound_scan(VolumeScanConfig const& cfg);

//---------------------------------------------------------------------------//
// Coarea band decomposition

struct Band
{
    double lo;
    double hi;
    MCEstimate volume;
};

struct BandDecomposition
{
    double t{0};
    double delta{0};
    MCEstimate total;
    MCEstimate tang;
    MCEstimate trans;
    std::vector<Band> dyadic_bands;
};

//! Threshold separating the tangential class: 2 sqrt(t delta).
double tangential_threshold(double t, double delta);

BandDecomposition banded_intersection_scan(int k,
                                           double t,
                                           Radii const& r,
                                           double delta,
                                           std::uint64_t m,
                                           std::uint64_t seed,
                                           double c_n = 0);

//---------------------------------------------------------------------------//
// Low-Jacobian clustering

struct ClusterConfig
{
    int k{1};
    double t{1};
    Vec radii;
    double rho{0.1};
    double delta{0.01};
    std::uint64_t samples{200000};
    std::uint64_t seed{0};
    double c_n{0};
    double link_constant{8};  //!< C_n; linkage scale is 2 C_n rho / t
    std::size_t max_points{3000};
};

struct ClusterReport
{
    int cluster_count{0};
    std::vector<double> diameters;
    std::vector<int> labels;  //!< cluster index of each retained point
    double rho{0};
    double t{0};
    std::uint64_t sample_count{0};
    std::uint64_t accepted{0};

    bool empty() const { return accepted == 0; }
};

//! Single-linkage components of points at the given scale.
std::vector<int> single_linkage(std::vector<Vec> const& points, double scale, int* count);

ClusterReport low_jacobian_cluster(ClusterConfig const& cfg);

}  // namespace homoeoid
