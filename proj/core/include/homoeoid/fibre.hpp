#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace homoeoid
{
//! Raised when the tracer cannot follow the fibre.
class FibreError : public std::runtime_error
{
  public:
    enum class Kind
    {
        nonconvergent,
        degenerate,
    };

    FibreError(Kind kind, char const* what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

struct FibreOptions
{
    double step{0};  //!< 0 selects min(rho / 10, 0.01)
    double newton_tol{1e-10};
    int max_newton{20};
    int start_seeds{96};
    std::size_t max_steps{4000000};
};

struct FibreComponent
{
    std::vector<Vec> points;  //!< closed loop, first point repeated last
    std::vector<double> segment_arc;  //!< arc length of points[i] -> points[i + 1]
    double length{0};
    double closure_gap{0};  //!< distance of the closing point from the start
};

struct FibreTrace
{
    std::vector<FibreComponent> components;
    double total_length{0};
};

/*!
 * Trace every component of {|w|^2 - 1 = u1} cap {F_{x,r}(w) = u2} in R^3.
 *
 * Predictor along the normalised cross product of the two gradients, Newton
 * corrector on the two level sets plus the plane orthogonal to the
 * predicted step.
 */
FibreTrace trace_fibre(Vec const& centre,
                       Radii const& r,
                       std::array<double, 2> u,
                       double step,
                       FibreOptions const& opts = {});

//! Arc length of a traced fibre inside the closed ball B(xi, rho).
double length_in_ball(FibreTrace const& trace, Vec const& xi, double rho);

double fibre_length_in_ball(Vec const& centre,
                            Radii const& r,
                            std::array<double, 2> u,
                            Vec const& xi,
                            double rho,
                            FibreOptions const& opts = {});

}  // namespace homoeoid
