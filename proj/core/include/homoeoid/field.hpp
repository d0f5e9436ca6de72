#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace homoeoid
{
//! Axis-parallel box [lo, hi].
struct Box
{
    Vec lo;
    Vec hi;

    static Box cube(int n, double half_width);
    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const { return (hi - lo).prod(); }
    bool contains(Vec const& y) const
    {
        return (y.array() >= lo.array()).all() && (y.array() <= hi.array()).all();
    }
    Vec sample(RngCursor& cur) const;
};

/*!
 * Uniform sampler over a set containing the support of a field.
 *
 * Averages over large annuli can then be estimated from the support side.
 */
struct SupportSampler
{
    double volume;
    std::function<Vec(RngCursor&)> draw;
};

//---------------------------------------------------------------------------//
/*!
 * Scalar function on R^n that vanishes outside a bounding box.
 *
 * Closure-backed fields evaluate exactly; grid-backed fields interpolate
 * multilinearly between nodes spanning the box.
 */
class Field
{
  public:
    enum class Kind
    {
        closure,
        grid,
    };
    using Evaluator = std::function<double(Vec const&)>;

    static Field closure(Evaluator f, Box box, std::optional<SupportSampler> support = {});
    static Field grid(Box box, std::vector<int> shape, std::vector<double> values);
    static Field constant(double c, Box box);

    double operator()(Vec const& y) const
    {
        if (!box_.contains(y))
            return 0.0;
        return eval_(y);
    }

    Kind kind() const { return kind_; }
    Box const& bounding_box() const { return box_; }
    int dim() const { return box_.dim(); }
    SupportSampler const* support() const { return support_ ? &*support_ : nullptr; }

    //! Pointwise multiple c f.
    Field scaled(double c) const;

  private:
    Field(Kind kind, Evaluator eval, Box box, std::optional<SupportSampler> support);

    Kind kind_;
    Evaluator eval_;
    Box box_;
    std::optional<SupportSampler> support_;
};

//---------------------------------------------------------------------------//
//! Weighted sum of isotropic Gaussians, normalised to unit L^2 norm.
struct BumpMixture
{
    std::vector<Vec> centres;
    std::vector<double> widths;
    std::vector<double> weights;

    double operator()(Vec const& y) const;
    double l2_norm_squared() const;  //!< closed form over R^n
    Field field() const;
};

/*!
 * Seeded bump mixture: `bumps` Gaussians with centres in [-1, 1]^n, widths
 * in [0.2, 0.5] and positive weights, rescaled to unit L^2 norm.
 */
BumpMixture random_bump_mixture(int n, int bumps, std::uint64_t seed);

}  // namespace homoeoid
