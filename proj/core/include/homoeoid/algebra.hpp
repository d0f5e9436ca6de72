#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace homoeoid
{
//! Worst residual of one identity over a batch of trials.
struct IdentityReport
{
    std::string name;
    std::size_t trials{0};
    double max_relative_residual{0};
    std::string worst_case_input;
    bool exact{false};  //!< checked in rational arithmetic

    void record(double residual, std::string const& input);
};

//! |lhs - rhs| / max(1, |lhs|, |rhs|)
double relative_residual(double lhs, double rhs);

//! det of the matrix with a on the diagonal and 1 elsewhere, closed form.
double circulant_closed_form(int n, double a);

//! Closed-form determinant (a-1)^{n-1}(a+n-1) against an LU determinant.
IdentityReport circulant_det_check(std::vector<int> const& n_list, int a_samples, std::uint64_t seed);

//! Same identity in exact rational arithmetic for small n.
IdentityReport circulant_det_check_exact(std::vector<int> const& n_list, int a_samples, std::uint64_t seed);

//---------------------------------------------------------------------------//
//! Closed-form Jacobian of the tangency map with diagonal (2 sum_j r_j^3 - r_i^3) / |r|^3.
Mat displayed_tangency_jacobian(Radii const& r);

//! Closed-form determinant at r 1: (-1)^n r^{3(n-1)} n^{-3/2} P(-(2n-1)).
double displayed_symmetric_determinant(int n, double r);

//! Central differences with one Richardson step.
Mat finite_difference_tangency_jacobian(Radii const& r, double step = 1e-6);

struct JacobianCheck
{
    int n;
    double det_at_one;  //!< finite-difference det J Phi(1)
    double det_at_three_halves;
    double homogeneity_residual;  //!< max |det(r 1) - det(1)| over r in {1, 3/2, 2}
    double analytic_residual;  //!< direct derivative vs finite differences, generic points
    double display_symmetric_residual;  //!< closed form vs finite differences at r 1
    double display_generic_residual;  //!< closed form vs finite differences at generic points
    double displayed_det_at_one;  //!< closed-form determinant at r = 1
    double predicted_det_at_one;  //!< 2^{n-1} n^{-n/2}
};

std::vector<JacobianCheck>
appendix_jacobian_check(std::vector<int> const& n_list, int r_samples, std::uint64_t seed);

//---------------------------------------------------------------------------//
/*!
 * Matrix A^k(omega, t, r): rows j != k carry -t d_j omega_k in column j and
 * t d_k omega_j in column k; the last row is (r_i^2 omega_i^2)_i.
 */
Mat tangency_block_matrix(TangencyConfig const& cfg, Vec const& omega);

//! (-1)^{k-1} t^{n-1} omega_k^{n-2} sum_j (prod_{i != j} d_i) r_j^2 omega_j^3
double tangency_block_determinant(TangencyConfig const& cfg, Vec const& omega);

struct IdentitySuiteConfig
{
    std::vector<int> n_list{2, 3, 4, 5, 6, 7, 8};
    int trials{1000};
    std::uint64_t seed{0};
    int exact_max_n{4};
    int exact_trials{50};
};

/*!
 * Syzygy, derivative, Schur, block-determinant and circulant identities in
 * floating point, plus rational-arithmetic runs for n <= exact_max_n.
 */
std::vector<IdentityReport> identity_suite(IdentitySuiteConfig const& cfg);

//---------------------------------------------------------------------------//
struct NondegConfig
{
    int n{3};
    int k{1};
    std::size_t accepted_target{1000};
    double cbar{0};  //!< 0 selects 0.1 c_n
    std::uint64_t seed{0};
    int max_configs{4000};
};

struct NondegResult
{
    std::size_t accepted{0};
    std::size_t configs{0};
    double min_det_ratio{0};  //!< min |det D Phi| prod|omega_j| / t^{n-1}
    double max_inverse_ratio{0};  //!< max t ||(D Phi)^{-1}||
    double max_minor_ratio{0};  //!< max |det M_{a,b}| prod|omega_j| / t^{n-2}
};

/*!
 * Samples (omega, t, r) with |Phi^k| < cbar t near Newton roots of Phi^k and
 * reports empirical constants.
 */
NondegResult nondeg_bounds_scan(NondegConfig const& cfg);

}  // namespace homoeoid
