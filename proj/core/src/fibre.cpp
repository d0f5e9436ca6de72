#include "homoeoid/fibre.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

namespace homoeoid
{
namespace
{
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

struct Pair
{
    Vec3 centre;
    Vec3 inv_r2;
    double u1;
    double u2;

    Eigen::Vector2d residual(Vec3 const& w) const
    {
        Vec3 const d = w - centre;
        return {w.squaredNorm() - 1 - u1, d.cwiseProduct(d).dot(inv_r2) - 1 - u2};
    }
    Vec3 grad1(Vec3 const& w) const { return 2 * w; }
    Vec3 grad2(Vec3 const& w) const { return 2 * (w - centre).cwiseProduct(inv_r2); }

    //! Unit tangent and the relative size of the gradient cross product.
    std::pair<Vec3, double> tangent(Vec3 const& w) const
    {
        Vec3 const g1 = grad1(w), g2 = grad2(w);
        Vec3 const c = g1.cross(g2);
        double const scale = g1.norm() * g2.norm();
        double const rel = scale > 0 ? c.norm() / scale : 0.0;
        return {rel > 0 ? Vec3(c / c.norm()) : Vec3::Zero(), rel};
    }
};

constexpr double kDegenerate = 1e-7;

//! Newton onto both level sets and the plane <q - anchor, normal> = 0.
std::optional<Vec3> correct(Pair const& f,
                            Vec3 q,
                            Vec3 const& anchor,
                            Vec3 const& normal,
                            FibreOptions const& opts)
{
    for (int it = 0; it < opts.max_newton; ++it)
    {
        Eigen::Vector2d const r = f.residual(q);
        double const plane = (q - anchor).dot(normal);
        Mat3 jac;
        jac.row(0) = f.grad1(q).transpose();
        jac.row(1) = f.grad2(q).transpose();
        jac.row(2) = normal.transpose();
        Vec3 const rhs(r[0], r[1], plane);
        Vec3 const dq = jac.partialPivLu().solve(rhs);
        if (!dq.allFinite())
            return std::nullopt;
        q -= dq;
        if (dq.norm() < opts.newton_tol && f.residual(q).cwiseAbs().maxCoeff() < opts.newton_tol)
            return q;
    }
    if (f.residual(q).cwiseAbs().maxCoeff() < opts.newton_tol)
        return q;
    return std::nullopt;
}

//! Gauss-Newton (minimum-norm steps) from an arbitrary seed onto the fibre.
std::optional<Vec3> project_to_fibre(Pair const& f, Vec3 q, FibreOptions const& opts, bool* singular)
{
    for (int it = 0; it < 60; ++it)
    {
        Eigen::Vector2d const r = f.residual(q);
        Eigen::Matrix<double, 2, 3> jac;
        jac.row(0) = f.grad1(q).transpose();
        jac.row(1) = f.grad2(q).transpose();
        Eigen::Matrix2d const gram = jac * jac.transpose();
        if (std::abs(gram.determinant()) < 1e-14 * gram.squaredNorm())
        {
            *singular = true;
            return std::nullopt;
        }
        Vec3 const dq = jac.transpose() * gram.ldlt().solve(r);
        double const damp = std::min(1.0, 0.5 / std::max(dq.norm(), 1e-300));
        q -= damp * dq;
        if (dq.norm() < opts.newton_tol && r.cwiseAbs().maxCoeff() < opts.newton_tol)
            return q;
    }
    if (f.residual(q).cwiseAbs().maxCoeff() < opts.newton_tol)
        return q;
    return std::nullopt;
}

double arc_from_chord(double chord, Vec3 const& ta, Vec3 const& tb)
{
    double const cosang = std::clamp(ta.dot(tb), -1.0, 1.0);
    double const half = std::acos(cosang) / 2;
    if (half < 1e-8)
        return chord;
    return chord * half / std::sin(half);
}

FibreComponent trace_component(Pair const& f, Vec3 const start, double h, FibreOptions const& opts)
{
    FibreComponent comp;
    auto [t0, rel0] = f.tangent(start);
    if (rel0 < kDegenerate)
        throw FibreError(FibreError::Kind::degenerate,
                         "level sets meet tangentially: gradients are parallel");

    comp.points.emplace_back(start);
    Vec3 p = start;
    Vec3 tp = t0;
    double travelled = 0;
    double step = h;
    for (std::size_t iter = 0; iter < opts.max_steps; ++iter)
    {
        Vec3 const pred = p + step * tp;
        auto q = correct(f, pred, pred, tp, opts);
        if (!q || (*q - p).norm() > 2 * step)
        {
            step /= 2;
            if (step < h * 1e-6)
                throw FibreError(FibreError::Kind::nonconvergent,
                                 "corrector failed to converge");
            continue;
        }
        auto [tq, rel] = f.tangent(*q);
        if (rel < kDegenerate)
            throw FibreError(FibreError::Kind::degenerate,
                             "gradient cross product vanished along the fibre");
        if (tq.dot(tp) < 0.5)
        {
            step /= 2;
            continue;
        }

        double const before = (p - start).dot(t0);
        double const after = (*q - start).dot(t0);
        if (travelled > 4 * h && before < 0 && after >= 0 && (*q - start).norm() < 4 * h)
        {
            // Close the loop on the plane through the start point.
            auto closing = correct(f, p, start, t0, opts);
            if (!closing)
                throw FibreError(FibreError::Kind::nonconvergent, "closing step failed");
            auto [tc, relc] = f.tangent(*closing);
            (void)relc;
            double const arc = arc_from_chord((*closing - p).norm(), tp, tc);
            comp.segment_arc.push_back(arc);
            comp.length += arc;
            comp.closure_gap = (*closing - start).norm();
            comp.points.emplace_back(*closing);
            return comp;
        }

        double const arc = arc_from_chord((*q - p).norm(), tp, tq);
        comp.segment_arc.push_back(arc);
        comp.length += arc;
        travelled += arc;
        comp.points.emplace_back(*q);
        p = *q;
        tp = tq;
        step = std::min(h, step * 2);
    }
    throw FibreError(FibreError::Kind::nonconvergent, "fibre did not close");
}

double distance_to_polyline(Vec const& q, std::vector<Vec> const& pts)
{
    double best = INFINITY;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    {
        Vec const a = pts[i], b = pts[i + 1];
        Vec const ab = b - a;
        double const len2 = ab.squaredNorm();
        double const s = len2 > 0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (a + s * ab - q).norm());
    }
    return best;
}

Vec to_vec(Vec3 const& v)
{
    Vec out(3);
    out << v[0], v[1], v[2];
    return out;
}
}  // namespace

FibreTrace trace_fibre(Vec const& centre,
                       Radii const& r,
                       std::array<double, 2> u,
                       double step,
                       FibreOptions const& opts)
{
    if (centre.size() != 3 || r.dim() != 3)
        throw std::invalid_argument("fibre tracing is implemented for n = 3 only");
    if (!(u[0] > -1))
        throw std::invalid_argument("level u1 must exceed -1");
    if (!(step > 0))
        throw std::invalid_argument("fibre step must be positive");
    Vec const& rv = r.values();
    Pair const f{Vec3(centre[0], centre[1], centre[2]),
                 Vec3(1 / (rv[0] * rv[0]), 1 / (rv[1] * rv[1]), 1 / (rv[2] * rv[2])),
                 u[0],
                 u[1]};

    FibreTrace trace;
    double const radius = std::sqrt(1 + u[0]);
    int const nseed = std::max(opts.start_seeds, 8);
    double const golden = std::numbers::pi * (3 - std::sqrt(5.0));
    bool saw_degenerate = false;
    for (int s = 0; s < nseed; ++s)
    {
        double const z = 1 - 2 * (s + 0.5) / nseed;
        double const ring = std::sqrt(1 - z * z);
        Vec3 const seed
            = radius * Vec3(ring * std::cos(golden * s), ring * std::sin(golden * s), z);
        bool singular = false;
        auto q = project_to_fibre(f, seed, opts, &singular);
        saw_degenerate = saw_degenerate || singular;
        if (!q)
            continue;
        if (f.tangent(*q).second < kDegenerate)
        {
            saw_degenerate = true;
            continue;
        }
        Vec const qv = to_vec(*q);
        bool known = false;
        for (auto const& c : trace.components)
        {
            if (distance_to_polyline(qv, c.points) < 3 * step)
            {
                known = true;
                break;
            }
        }
        if (known)
            continue;
        FibreComponent comp = trace_component(f, *q, step, opts);
        std::vector<Vec> pts;
        pts.reserve(comp.points.size() + 1);
        for (auto const& p : comp.points)
            pts.push_back(p);
        pts.push_back(pts.front());
        comp.points = std::move(pts);
        comp.segment_arc.push_back(comp.closure_gap);
        comp.length += comp.closure_gap;
        trace.total_length += comp.length;
        trace.components.push_back(std::move(comp));
    }
    if (trace.components.empty() && saw_degenerate)
    {
        throw FibreError(FibreError::Kind::degenerate,
                         "level sets meet tangentially: gradients are parallel");
    }
    return trace;
}

double length_in_ball(FibreTrace const& trace, Vec const& xi, double rho)
{
    double total = 0;
    for (auto const& c : trace.components)
    {
        for (std::size_t i = 0; i + 1 < c.points.size(); ++i)
        {
            Vec const a = c.points[i] - xi;
            Vec const d = c.points[i + 1] - c.points[i];
            double const dd = d.squaredNorm();
            if (dd == 0)
                continue;
            // |a + s d|^2 <= rho^2 for s in [0, 1]
            double const b = a.dot(d);
            double const cc = a.squaredNorm() - rho * rho;
            double const disc = b * b - dd * cc;
            if (disc <= 0)
                continue;
            double const root = std::sqrt(disc);
            double const s0 = std::max(0.0, (-b - root) / dd);
            double const s1 = std::min(1.0, (-b + root) / dd);
            if (s1 > s0)
                total += (s1 - s0) * c.segment_arc[i];
        }
    }
    return total;
}

double fibre_length_in_ball(Vec const& centre,
                            Radii const& r,
                            std::array<double, 2> u,
                            Vec const& xi,
                            double rho,
                            FibreOptions const& opts)
{
    if (!(rho > 0))
        throw std::invalid_argument("ball radius must be positive");
    double const h = opts.step > 0 ? opts.step : std::min(rho / 10, 0.01);
    return length_in_ball(trace_fibre(centre, r, u, h, opts), xi, rho);
}

}  // namespace homoeoid
