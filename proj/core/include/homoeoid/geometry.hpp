#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <variant>

#include <Eigen/Core>

namespace homoeoid
{
//---------------------------------------------------------------------------//
// Dense fixed-capacity vectors; every dimension handled here is <= kMaxDim.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::
    Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline std::span<double const> as_span(Vec const& v)
{
    return {v.data(), static_cast<std::size_t>(v.size())};
}

//! Throw std::invalid_argument unless 1 <= n <= kMaxDim.
void check_dimension(int n);

//! Default refinement constant c_n = (2n)^{-3/2} / 4.
double default_cn(int n);

//! Largest admissible refinement constant, (2n)^{-3/2} / 2.
double max_cn(int n);

//---------------------------------------------------------------------------//
/*!
 * Principal radii of an axis-parallel ellipsoid.
 *
 * Every component is strictly positive. The restricted box used by the
 * discretised operators is [1, 1 + c_n^2]^n.
 */
class Radii
{
  public:
    explicit Radii(Vec values);
    static Radii constant(int n, double r);

    int dim() const { return static_cast<int>(r_.size()); }
    double operator[](int j) const { return r_[j]; }
    Vec const& values() const { return r_; }

    double product() const { return r_.prod(); }
    bool within(double lo, double hi) const;
    bool in_restricted_box(double c_n) const;

  private:
    Vec r_;
};

//---------------------------------------------------------------------------//
//! Axis-parallel ellipsoid E(x; r).
class Ellipsoid
{
  public:
    Ellipsoid(Vec centre, Radii radii);

    int dim() const { return static_cast<int>(centre_.size()); }
    Vec const& centre() const { return centre_; }
    Radii const& radii() const { return radii_; }

  private:
    Vec centre_;
    Radii radii_;
};

//! Ellipsoidal annulus {y : |F(y)| < delta}, delta in (0, 1/2].
class AnnulusSpec
{
  public:
    AnnulusSpec(Ellipsoid ellipsoid, double delta);

    int dim() const { return ellipsoid_.dim(); }
    Ellipsoid const& ellipsoid() const { return ellipsoid_; }
    Vec const& centre() const { return ellipsoid_.centre(); }
    Radii const& radii() const { return ellipsoid_.radii(); }
    double delta() const { return delta_; }

  private:
    Ellipsoid ellipsoid_;
    double delta_;
};

/*!
 * Annulus with the exceptional region removed.
 *
 * Only points whose preimage omega under the affine map satisfies
 * |omega_k|^3 >= 2 c_n are kept. The axis is 1-based.
 */
class RefinedAnnulusSpec
{
  public:
    RefinedAnnulusSpec(AnnulusSpec base, int axis);
    RefinedAnnulusSpec(AnnulusSpec base, int axis, double c_n);

    int dim() const { return base_.dim(); }
    AnnulusSpec const& base() const { return base_; }
    int axis() const { return axis_; }
    double c_n() const { return c_n_; }

  private:
    AnnulusSpec base_;
    int axis_;
    double c_n_;
};

using AnyAnnulus = std::variant<AnnulusSpec, RefinedAnnulusSpec>;

AnnulusSpec const& base_of(AnyAnnulus const& spec);

//---------------------------------------------------------------------------//
// Defining function F_{x,r}(y) = sum_j (y_j - x_j)^2 / r_j^2 - 1

struct DefiningValue
{
    double value;
    Vec gradient;
};

DefiningValue defining_function(Vec const& centre, Radii const& r, Vec const& y);
double defining_value(Vec const& centre, Radii const& r, Vec const& y);

enum class MapDirection
{
    forward,  //!< omega -> x + r * omega
    inverse,  //!< y -> (y - x) / r
};

Vec affine_map(Vec const& centre, Radii const& r, Vec const& w, MapDirection dir);

//! Membership of a preimage point in Omega^k (axis is 1-based).
inline bool in_refinement(Vec const& omega, int axis, double c_n)
{
    double const w = std::abs(omega[axis - 1]);
    return w * w * w >= 2 * c_n;
}

bool annulus_contains(AnnulusSpec const& spec, Vec const& y);
bool annulus_contains(RefinedAnnulusSpec const& spec, Vec const& y);
bool annulus_contains(AnyAnnulus const& spec, Vec const& y);

//---------------------------------------------------------------------------//
/*!
 * Slicing direction for axis k (1-based).
 *
 * d has ones everywhere except a zero in slot k. The working direction
 * d_tilde defaults to d; a perturbed one must stay within c_n^2 of d in the
 * max norm.
 */
struct AxisFrame
{
    int k{1};
    Vec d;
    Vec d_tilde;

    static AxisFrame standard(int n, int k);
    static AxisFrame perturbed(int n, int k, Vec d_tilde, double c_n);

    int dim() const { return static_cast<int>(d.size()); }
};

/*!
 * Pair (unit sphere, ellipsoid centred at t * d_tilde with radii r).
 *
 * t lies in [0, 2] and every radius in [1/2, 2].
 */
class TangencyConfig
{
  public:
    TangencyConfig(AxisFrame frame, double t, Radii radii);

    AxisFrame const& frame() const { return frame_; }
    double t() const { return t_; }
    Radii const& radii() const { return radii_; }
    Vec centre() const { return t_ * frame_.d_tilde; }
    int dim() const { return frame_.dim(); }
    int axis() const { return frame_.k; }

  private:
    AxisFrame frame_;
    double t_;
    Radii radii_;
};

//---------------------------------------------------------------------------//
/*!
 * 2x2 minor polynomial G_{i,j}(omega, t, r) for 0-based indices i, j.
 *
 * Antisymmetric in (i, j); G_j^k is tangency_minor(j, k, ...). Templated so
 * the exact-arithmetic identity checks run through the same transcription.
 */
template<class S>
S tangency_minor(std::size_t i,
                 std::size_t j,
                 std::span<S const> omega,
                 S const& t,
                 std::span<S const> r,
                 std::span<S const> d_tilde)
{
    S const ri2 = r[i] * r[i];
    S const rj2 = r[j] * r[j];
    return (S(1) / rj2 - S(1) / ri2) * omega[i] * omega[j]
           - t * (d_tilde[j] * omega[i] / rj2 - d_tilde[i] * omega[j] / ri2);
}

//! Tangency functional evaluated two ways.
struct GramNorm
{
    double via_gram;  //!< sqrt(det J J^T) from the 2x2 Gram matrix
    double via_cauchy_binet;  //!< 4 sqrt(sum_{i<j} G_{i,j}^2)

    double value() const { return via_cauchy_binet; }
    double relative_residual() const;
};

GramNorm jacobian_gram_norm(TangencyConfig const& cfg, Vec const& omega);

//! Gram path only, for sample loops: pair (0, 1) against (centre, r).
inline double jacobian_norm(Vec const& omega, Vec const& centre, Vec const& inv_r2)
{
    double aa = 0, bb = 0, ab = 0;
    for (Eigen::Index j = 0; j < omega.size(); ++j)
    {
        double const a = omega[j];
        double const b = (omega[j] - centre[j]) * inv_r2[j];
        aa += a * a;
        bb += b * b;
        ab += a * b;
    }
    double const det = aa * bb - ab * ab;
    return det > 0 ? 4 * std::sqrt(det) : 0.0;
}

struct PhiValue
{
    Vec value;  //!< (G_j^k for j != k ..., F_{0,1}(omega) / 2)
    Mat jacobian;  //!< d value / d omega, one row per component
};

PhiValue phi_k(TangencyConfig const& cfg, Vec const& omega);

//---------------------------------------------------------------------------//
//! Map r -> (r_1^2, ..., r_n^2) / |r|.
Vec tangency_map(Radii const& r);

/*!
 * Invert tangency_map on the open positive orthant.
 *
 * r_j = sqrt(x_j * sum_i x_i). The ellipsoid E(x, r) then passes through the
 * origin with normal parallel to (1, ..., 1) there.
 */
Radii tangency_radii(Vec const& x);

}  // namespace homoeoid
