#include "homoeoid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace homoeoid
{
namespace
{
void require(bool cond, char const* what)
{
    if (!cond)
        throw std::invalid_argument(what);
}

void require_same_dim(Eigen::Index a, Eigen::Index b)
{
    if (a != b)
    {
        throw std::invalid_argument("dimension mismatch: " + std::to_string(a)
                                    + " vs " + std::to_string(b));
    }
}
}  // namespace

void check_dimension(int n)
{
    if (n < 1 || n > kMaxDim)
    {
        throw std::invalid_argument("dimension " + std::to_string(n)
                                    + " outside 1.." + std::to_string(kMaxDim));
    }
}

double default_cn(int n)
{
    return std::pow(2.0 * n, -1.5) / 4;
}

double max_cn(int n)
{
    return std::pow(2.0 * n, -1.5) / 2;
}

//---------------------------------------------------------------------------//
Radii::Radii(Vec values) : r_(std::move(values))
{
    check_dimension(static_cast<int>(r_.size()));
    for (Eigen::Index j = 0; j < r_.size(); ++j)
    {
        require(std::isfinite(r_[j]) && r_[j] > 0, "radii must be positive");
    }
}

Radii Radii::constant(int n, double r)
{
    check_dimension(n);
    return Radii(Vec::Constant(n, r));
}

bool Radii::within(double lo, double hi) const
{
    return (r_.array() >= lo).all() && (r_.array() <= hi).all();
}

bool Radii::in_restricted_box(double c_n) const
{
    return within(1.0, 1.0 + c_n * c_n);
}

Ellipsoid::Ellipsoid(Vec centre, Radii radii)
    : centre_(std::move(centre)), radii_(std::move(radii))
{
    require_same_dim(centre_.size(), radii_.dim());
}

AnnulusSpec::AnnulusSpec(Ellipsoid ellipsoid, double delta)
    : ellipsoid_(std::move(ellipsoid)), delta_(delta)
{
    require(delta > 0 && delta <= 0.5, "delta must lie in (0, 1/2]");
}

RefinedAnnulusSpec::RefinedAnnulusSpec(AnnulusSpec base, int axis)
    : RefinedAnnulusSpec(base, axis, default_cn(base.dim()))
{
}

RefinedAnnulusSpec::RefinedAnnulusSpec(AnnulusSpec base, int axis, double c_n)
    : base_(std::move(base)), axis_(axis), c_n_(c_n)
{
    require(axis >= 1 && axis <= base_.dim(), "axis must lie in 1..n");
    require(c_n > 0 && c_n <= max_cn(base_.dim()) * (1 + 1e-12),
            "c_n must satisfy 0 < 2 c_n <= (2n)^{-3/2}");
}

AnnulusSpec const& base_of(AnyAnnulus const& spec)
{
    if (auto const* refined = std::get_if<RefinedAnnulusSpec>(&spec))
        return refined->base();
    return std::get<AnnulusSpec>(spec);
}

//---------------------------------------------------------------------------//
DefiningValue defining_function(Vec const& centre, Radii const& r, Vec const& y)
{
    require_same_dim(centre.size(), r.dim());
    require_same_dim(y.size(), r.dim());
    DefiningValue out{-1.0, Vec(y.size())};
    for (Eigen::Index j = 0; j < y.size(); ++j)
    {
        double const inv = 1.0 / (r[j] * r[j]);
        double const dy = y[j] - centre[j];
        out.value += dy * dy * inv;
        out.gradient[j] = 2 * dy * inv;
    }
    return out;
}

double defining_value(Vec const& centre, Radii const& r, Vec const& y)
{
    return defining_function(centre, r, y).value;
}

Vec affine_map(Vec const& centre, Radii const& r, Vec const& w, MapDirection dir)
{
    require_same_dim(centre.size(), r.dim());
    require_same_dim(w.size(), r.dim());
    if (dir == MapDirection::forward)
        return centre + r.values().cwiseProduct(w);
    return (w - centre).cwiseQuotient(r.values());
}

bool annulus_contains(AnnulusSpec const& spec, Vec const& y)
{
    return std::abs(defining_value(spec.centre(), spec.radii(), y)) < spec.delta();
}

bool annulus_contains(RefinedAnnulusSpec const& spec, Vec const& y)
{
    auto const& base = spec.base();
    if (!annulus_contains(base, y))
        return false;
    Vec const omega
        = affine_map(base.centre(), base.radii(), y, MapDirection::inverse);
    return in_refinement(omega, spec.axis(), spec.c_n());
}

bool annulus_contains(AnyAnnulus const& spec, Vec const& y)
{
    return std::visit([&y](auto const& s) { return annulus_contains(s, y); },
                      spec);
}

//---------------------------------------------------------------------------//
AxisFrame AxisFrame::standard(int n, int k)
{
    check_dimension(n);
    require(k >= 1 && k <= n, "axis must lie in 1..n");
    AxisFrame f;
    f.k = k;
    f.d = Vec::Ones(n);
    f.d[k - 1] = 0;
    f.d_tilde = f.d;
    return f;
}

AxisFrame AxisFrame::perturbed(int n, int k, Vec d_tilde, double c_n)
{
    AxisFrame f = standard(n, k);
    require_same_dim(d_tilde.size(), n);
    require((d_tilde - f.d).cwiseAbs().maxCoeff() < c_n * c_n,
            "perturbed direction must stay within c_n^2 of d_k");
    f.d_tilde = std::move(d_tilde);
    return f;
}

TangencyConfig::TangencyConfig(AxisFrame frame, double t, Radii radii)
    : frame_(std::move(frame)), t_(t), radii_(std::move(radii))
{
    require_same_dim(frame_.d.size(), radii_.dim());
    require_same_dim(frame_.d_tilde.size(), radii_.dim());
    require(t >= 0 && t <= 2, "t must lie in [0, 2]");
    require(radii_.within(0.5, 2.0), "tangency radii must lie in [1/2, 2]");
}

//---------------------------------------------------------------------------//
double GramNorm::relative_residual() const
{
    double const scale = std::max({1.0, via_gram, via_cauchy_binet});
    return std::abs(via_gram - via_cauchy_binet) / scale;
}

GramNorm jacobian_gram_norm(TangencyConfig const& cfg, Vec const& omega)
{
    int const n = cfg.dim();
    require_same_dim(omega.size(), n);
    Vec const x = cfg.centre();
    Radii const& r = cfg.radii();

    // Gram path: rows of J are the two gradients
    Eigen::Matrix<double, 2, Eigen::Dynamic, Eigen::RowMajor, 2, kMaxDim> jac(2, n);
    jac.row(0) = 2 * omega.transpose();
    jac.row(1)
        = defining_function(x, r, omega).gradient.transpose();
    Eigen::Matrix2d const gram = jac * jac.transpose();
    double const det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);

    double sum = 0;
    auto const w = as_span(omega);
    auto const rs = as_span(r.values());
    auto const dt = as_span(cfg.frame().d_tilde);
    for (int i = 0; i < n; ++i)
    {
        for (int j = i + 1; j < n; ++j)
        {
            double const g = tangency_minor<double>(i, j, w, cfg.t(), rs, dt);
            sum += g * g;
        }
    }
    return {std::sqrt(std::max(det, 0.0)), 4 * std::sqrt(sum)};
}

PhiValue phi_k(TangencyConfig const& cfg, Vec const& omega)
{
    int const n = cfg.dim();
    require_same_dim(omega.size(), n);
    int const k = cfg.axis() - 1;
    double const t = cfg.t();
    Vec const& r = cfg.radii().values();
    Vec const& dt = cfg.frame().d_tilde;
    auto const w = as_span(omega);
    auto const rs = as_span(r);
    auto const ds = as_span(dt);

    PhiValue out{Vec::Zero(n), Mat::Zero(n, n)};
    double const ik = 1 / (r[k] * r[k]);
    int row = 0;
    for (int j = 0; j < n; ++j)
    {
        if (j == k)
            continue;
        double const ij = 1 / (r[j] * r[j]);
        out.value[row] = tangency_minor<double>(j, k, w, t, rs, ds);
        out.jacobian(row, j) = (ik - ij) * omega[k] - t * dt[k] * ik;
        out.jacobian(row, k) = (ik - ij) * omega[j] + t * dt[j] * ij;
        ++row;
    }
    out.value[n - 1] = (omega.squaredNorm() - 1) / 2;
    out.jacobian.row(n - 1) = omega.transpose();
    return out;
}

//---------------------------------------------------------------------------//
Vec tangency_map(Radii const& r)
{
    Vec const& v = r.values();
    return v.cwiseProduct(v) / v.norm();
}

Radii tangency_radii(Vec const& x)
{
    check_dimension(static_cast<int>(x.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j)
    {
        if (!(x[j] > 0))
            throw std::domain_error("tangency_radii needs a positive point");
    }
    double const s = x.sum();
    return Radii((x * s).cwiseSqrt());
}

}  // namespace homoeoid
