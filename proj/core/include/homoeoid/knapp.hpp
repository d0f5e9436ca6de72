#pragma once

#include <cstdint>
#include <vector>

#include "estimate.hpp"
#include "field.hpp"
#include "geometry.hpp"

namespace homoeoid
{
//! (1, ..., 1) / sqrt(n).
Vec normal_direction(int n);

/*!
 * Orthogonal matrix whose last row is the normal direction.
 *
 * Rows 1..n-1 come from Gram-Schmidt of e_1, ..., e_{n-1} against the
 * normal, so they span its orthogonal complement V.
 */
Mat tangential_frame(int n);

//---------------------------------------------------------------------------//
//! Centred box of thickness delta along N and width delta^{1/2} along V.
class KnappSlab
{
  public:
    KnappSlab(int n, double delta);

    int dim() const { return static_cast<int>(frame_.rows()); }
    double delta() const { return delta_; }
    double volume() const;
    bool contains(Vec const& y) const;
    Field field() const;
    SupportSampler sampler() const;

  private:
    double delta_;
    Mat frame_;
};

KnappSlab knapp_slab(int n, double delta);

//---------------------------------------------------------------------------//
struct TangencySample
{
    Vec x;  //!< point of F = Phi(Omega)
    Radii radii;  //!< r_x, with E(x, r_x) tangent to V at 0
};

//! Jacobian of r -> (r_1^2, ..., r_n^2) / |r|, differentiated directly.
Mat tangency_map_jacobian(Radii const& r);

/*!
 * Draw r uniformly from the ball of radius rho_omega about (3/2, ..., 3/2)
 * and return (tangency_map(r), r).
 */
std::vector<TangencySample>
sample_tangency_set(int n, std::uint64_t m, std::uint64_t seed, double rho_omega = 0.1);

struct KnappRow
{
    double delta;
    double ratio;
    double std_error;
    double operator_norm;  //!< ||L^delta||_p over F
    double slab_norm;  //!< ||chi_K||_p
};

struct KnappConfig
{
    int n{3};
    std::vector<double> deltas;
    double p{2};
    std::uint64_t x_samples{400};
    std::uint64_t slab_samples{4000};
    std::uint64_t seed{0};
    double rho_omega{0.1};
};

struct KnappResult
{
    std::vector<KnappRow> rows;
    ScalingFit fit;  //!< log ratio against log delta
};

//! Exponent (n - 1) / 2 - (n + 1) / (2 p) predicted by the slab heuristic.
double knapp_predicted_slope(int n, double p);

KnappResult knapp_exponent(KnappConfig const& cfg);

//---------------------------------------------------------------------------//
/*!
 * f = g o U with g(x', x_n) = |x'|^{-(n-1)} log2(1/|x'|)^{-n/(n+1)} on
 * {|x_n| <= C |x'|^2, |x'| <= 1/2}, zero elsewhere.
 */
class CounterexampleField
{
  public:
    CounterexampleField(int n, double opening);

    int dim() const { return static_cast<int>(frame_.rows()); }
    double opening() const { return opening_; }
    Mat const& frame() const { return frame_; }

    //! g at already-rotated coordinates (x', x_n).
    double profile(Vec const& rotated) const;
    double operator()(Vec const& y) const { return profile(frame_ * y); }
    Field field() const;

  private:
    int n_;
    double opening_;
    Mat frame_;
};

CounterexampleField counterexample_field(int n, double opening);

struct GlpResult
{
    double norm;  //!< ||g||_p, +inf when divergent
    double norm_p;  //!< ||g||_p^p
    bool finite;
    double richardson_gap;  //!< relative change when panels are doubled
    std::vector<std::pair<double, double>> cutoff_study;  //!< (cutoff radius, partial integral)
};

/*!
 * ||g||_p by radial reduction: integral over 0 < |x'| <= 1/2 of slab thickness
 * 2 C |x'|^2 times |S^{n-2}| |x'|^{n-2} times g^p.
 */
GlpResult g_lp_norm(int n, double p, double opening, int quad_points = 64);

//---------------------------------------------------------------------------//
struct ShellTerm
{
    int shell;  //!< l
    double value;  //!< normalised surface integral of |f| over E_l
    double std_error;
    double surface_fraction;  //!< sigma(E_l) / sigma(E)
    double max_normal_offset;  //!< max |<y, N>| over samples, times 2^l
    std::uint64_t hits;
};

struct ShellSums
{
    std::vector<ShellTerm> terms;
    std::vector<double> partial;  //!< S_1, ..., S_L
    double surface_area;
};

/*!
 * Partial sums S_L of normalised shell integrals of |f| over E(x, r_x).
 *
 * Each shell is sampled in log-polar coordinates of V: u = log2(1/|s|)
 * uniform over the shell, direction uniform on S^{n-2}; the surface is the
 * graph over V through 0.
 */
ShellSums shell_partial_sums(TangencySample const& point,
                             int shells,
                             std::uint64_t m,
                             std::uint64_t seed,
                             double opening = 4);

//! Same terms from plain surface samples filtered by shell; for small l.
std::vector<ShellTerm> shell_terms_by_surface_sampling(TangencySample const& point,
                                                       int shells,
                                                       std::uint64_t m,
                                                       std::uint64_t seed,
                                                       double opening = 4);

}  // namespace homoeoid
