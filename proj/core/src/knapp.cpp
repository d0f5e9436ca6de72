#include "homoeoid/knapp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "homoeoid/maximal.hpp"
#include "homoeoid/parallel.hpp"
#include "homoeoid/volume.hpp"

namespace homoeoid
{
Vec normal_direction(int n)
{
    check_dimension(n);
    return Vec::Constant(n, 1 / std::sqrt(static_cast<double>(n)));
}

Mat tangential_frame(int n)
{
    Vec const normal = normal_direction(n);
    Mat frame(n, n);
    std::vector<Vec> basis{normal};
    for (int i = 0; i + 1 < n; ++i)
    {
        Vec v = Vec::Unit(n, i);
        for (auto const& b : basis)
            v -= v.dot(b) * b;
        v.normalize();
        basis.push_back(v);
        frame.row(i) = v.transpose();
    }
    frame.row(n - 1) = normal.transpose();
    return frame;
}

//---------------------------------------------------------------------------//
KnappSlab::KnappSlab(int n, double delta) : delta_(delta), frame_(tangential_frame(n))
{
    if (!(delta > 0 && delta <= 0.5))
        throw std::invalid_argument("slab thickness must lie in (0, 1/2]");
}

KnappSlab knapp_slab(int n, double delta)
{
    return KnappSlab(n, delta);
}

double KnappSlab::volume() const
{
    return delta_ * std::pow(delta_, (dim() - 1) / 2.0);
}

bool KnappSlab::contains(Vec const& y) const
{
    int const n = dim();
    Vec const c = frame_ * y;
    double const half_width = std::sqrt(delta_) / 2;
    for (int i = 0; i + 1 < n; ++i)
    {
        if (std::abs(c[i]) > half_width)
            return false;
    }
    return std::abs(c[n - 1]) <= delta_ / 2;
}

Field KnappSlab::field() const
{
    KnappSlab const copy = *this;
    double const reach = std::sqrt(delta_) * std::sqrt(static_cast<double>(dim()));
    return Field::closure([copy](Vec const& y) { return copy.contains(y) ? 1.0 : 0.0; },
                          Box::cube(dim(), reach),
                          sampler());
}

SupportSampler KnappSlab::sampler() const
{
    Mat const frame_t = frame_.transpose();
    int const n = dim();
    double const half_width = std::sqrt(delta_) / 2;
    double const half_thick = delta_ / 2;
    return {volume(), [frame_t, n, half_width, half_thick](RngCursor& cur) {
                Vec c(n);
                for (int i = 0; i + 1 < n; ++i)
                    c[i] = cur.uniform(-half_width, half_width);
                c[n - 1] = cur.uniform(-half_thick, half_thick);
                return Vec(frame_t * c);
            }};
}

//---------------------------------------------------------------------------//
Mat tangency_map_jacobian(Radii const& r)
{
    Vec const& v = r.values();
    int const n = r.dim();
    double const norm = v.norm();
    double const norm3 = norm * norm * norm;
    Mat jac(n, n);
    for (int i = 0; i < n; ++i)
    {
        for (int j = 0; j < n; ++j)
        {
            jac(i, j) = (i == j ? 2 * v[i] / norm : 0.0) - v[i] * v[i] * v[j] / norm3;
        }
    }
    return jac;
}

std::vector<TangencySample>
sample_tangency_set(int n, std::uint64_t m, std::uint64_t seed, double rho_omega)
{
    check_dimension(n);
    if (!(rho_omega > 0 && rho_omega <= 0.5))
        throw std::invalid_argument("radii ball must lie inside [1, 2]^n");
    CounterRng const rng(seed, 0x74616e67ull);
    std::vector<TangencySample> out;
    out.reserve(m);
    for (std::uint64_t i = 0; i < m; ++i)
    {
        RngCursor cur = rng.cursor(i);
        Vec const dir = cur.unit_vector(n);
        double const rad = rho_omega * std::pow(cur.uniform(), 1.0 / n);
        Radii const r(Vec::Constant(n, 1.5) + rad * dir);
        out.push_back({tangency_map(r), r});
    }
    return out;
}

double knapp_predicted_slope(int n, double p)
{
    return (n - 1) / 2.0 - (n + 1) / (2.0 * p);
}

KnappResult knapp_exponent(KnappConfig const& cfg)
{
    if (!(cfg.p >= 1))
        throw std::invalid_argument("knapp exponent needs p >= 1");
    if (cfg.deltas.size() < 3)
        throw std::invalid_argument("knapp exponent needs at least 3 delta values");
    int const n = cfg.n;
    auto const points = sample_tangency_set(n, cfg.x_samples, cfg.seed, cfg.rho_omega);

    // Weight |det J Phi| turns uniform draws of r into Lebesgue measure on F.
    std::vector<double> weight;
    for (auto const& pt : points)
        weight.push_back(std::abs(tangency_map_jacobian(pt.radii).determinant()));
    double const omega_volume = unit_ball_volume(n) * std::pow(cfg.rho_omega, n);

    KnappResult result;
    std::vector<std::pair<double, double>> uv;
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
    {
        double const delta = cfg.deltas[di];
        KnappSlab const slab(n, delta);
        Field const chi = slab.field();
        auto const values = parallel_map<double>(points.size(), [&](std::size_t i) {
            AnnulusSpec const spec(Ellipsoid(points[i].x, points[i].radii), delta);
            std::uint64_t const s = derive_seed(cfg.seed, 0x6b6eull, i);
            double const avg = annulus_average(chi, spec, cfg.slab_samples, s).value;
            return std::pow(avg, cfg.p) * weight[i];
        });
        Moments mo;
        for (double v : values)
            mo.add(v);
        double const integral = omega_volume * mo.mean();
        double const op = std::pow(integral, 1 / cfg.p);
        double const slab_norm = std::pow(slab.volume(), 1 / cfg.p);
        double const ratio = op / slab_norm;
        double const se = integral > 0
                              ? ratio / cfg.p * mo.std_error() / mo.mean()
                              : 0.0;
        result.rows.push_back({delta, ratio, se, op, slab_norm});
        uv.emplace_back(std::log(delta), std::log(ratio));
    }
    result.fit = fit_line(std::move(uv));
    return result;
}

//---------------------------------------------------------------------------//
CounterexampleField::CounterexampleField(int n, double opening)
    : n_(n), opening_(opening), frame_(tangential_frame(n))
{
    if (n < 2)
        throw std::invalid_argument("counterexample field needs n >= 2");
    if (!(opening >= 1))
        throw std::invalid_argument("slab opening constant must be >= 1");
}

double CounterexampleField::profile(Vec const& rotated) const
{
    double const tang = rotated.head(n_ - 1).norm();
    if (!(tang > 0) || tang > 0.5)
        return 0.0;
    if (std::abs(rotated[n_ - 1]) > opening_ * tang * tang)
        return 0.0;
    double const log_term = std::log2(1 / tang);
    return std::pow(tang, -(n_ - 1)) * std::pow(log_term, -static_cast<double>(n_) / (n_ + 1));
}

Field CounterexampleField::field() const
{
    CounterexampleField const copy = *this;
    return Field::closure([copy](Vec const& y) { return copy(y); }, Box::cube(n_, 1.0));
}

CounterexampleField counterexample_field(int n, double opening)
{
    return CounterexampleField(n, opening);
}

//---------------------------------------------------------------------------//
namespace
{
//! Composite Simpson on [a, b] with an even panel count.
template<class F>
double simpson(F&& f, double a, double b, int panels)
{
    if (panels % 2)
        ++panels;
    double const h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        acc += (i % 2 ? 4 : 2) * f(a + i * h);
    return acc * h / 3;
}
}  // namespace

GlpResult g_lp_norm(int n, double p, double opening, int quad_points)
{
    if (n < 2)
        throw std::invalid_argument("g_lp_norm needs n >= 2");
    if (!(p >= 1))
        throw std::invalid_argument("g_lp_norm needs p >= 1");
    if (quad_points < 4)
        throw std::invalid_argument("g_lp_norm needs at least 4 panels");

    // rho = 2^{-L}: integrand c 2^{-a L} L^{-q} over L in [1, inf)
    double const prefactor
        = 2 * opening * unit_sphere_area(n - 1) * std::numbers::ln2;
    double const a = n + 1 - (n - 1) * p;
    double const q = n * p / (n + 1.0);
    auto integrand = [&](double L) {
        return prefactor * std::exp2(-a * L) * std::pow(L, -q);
    };

    GlpResult out{};
    double total = 0, total_coarse = 0;
    double prev_block = 0;
    int const max_blocks = 200;
    bool converged = false;
    for (int j = 0; j < max_blocks; ++j)
    {
        double const lo = std::ldexp(1.0, j), hi = std::ldexp(1.0, j + 1);
        double const fine = simpson(integrand, lo, hi, 2 * quad_points);
        double const coarse = simpson(integrand, lo, hi, quad_points);
        total += fine;
        total_coarse += coarse;
        out.cutoff_study.emplace_back(std::exp2(-hi), total);
        if (!std::isfinite(total))
            break;
        if (j >= 6)
        {
            double const ratio = fine / prev_block;
            if (!(ratio < 1))
                break;  // blocks no longer shrink: divergent
            double const tail = fine * ratio / (1 - ratio);
            if (tail < 1e-13 * total)
            {
                total += tail;
                total_coarse += tail;
                converged = true;
                break;
            }
        }
        prev_block = fine;
    }
    if (!converged)
    {
        out.norm = INFINITY;
        out.norm_p = INFINITY;
        out.finite = false;
        out.richardson_gap = 0;
        return out;
    }
    out.norm_p = total;
    out.norm = std::pow(total, 1 / p);
    out.finite = true;
    out.richardson_gap = std::abs(total - total_coarse) / total;
    return out;
}

//---------------------------------------------------------------------------//
namespace
{
struct ShellGeometry
{
    int n;
    Mat frame;  // rows: V basis then N
    Vec normal;
    Vec centre;
    Vec inv_r2;
    double opening;
    double q;  // n / (n + 1)

    /*!
     * Scaled height eta with rho s_hat + rho^2 eta N on the ellipsoid, plus
     * the area factor. The linear term along V vanishes for a tangency sample
     * and is dropped so that tiny rho does not drown in rounding.
     */
    bool graph(Vec const& s_hat, double rho, double& eta, double& area) const
    {
        double a = 0, b = 0, c = 0;
        for (int j = 0; j < n; ++j)
        {
            a += normal[j] * normal[j] * inv_r2[j];
            b += 2 * normal[j] * (rho * s_hat[j] - centre[j]) * inv_r2[j];
            c += s_hat[j] * s_hat[j] * inv_r2[j];
        }
        a *= rho * rho;
        double const disc = b * b - 4 * a * c;
        if (disc < 0)
            return false;
        double const q = b < 0 ? (std::sqrt(disc) - b) / 2 : -(b + std::sqrt(disc)) / 2;
        eta = c / q;
        Vec const y = rho * s_hat + (rho * rho * eta) * normal;
        Vec const grad = 2 * (y - centre).cwiseProduct(inv_r2);
        area = grad.norm() / std::abs(grad.dot(normal));
        return true;
    }
};

ShellGeometry make_geometry(TangencySample const& pt, double opening)
{
    int const n = pt.radii.dim();
    Vec const& r = pt.radii.values();
    Mat const frame = tangential_frame(n);
    return {n,
            frame,
            frame.row(n - 1).transpose(),
            pt.x,
            r.cwiseProduct(r).cwiseInverse(),
            opening,
            n / (n + 1.0)};
}

double ellipsoid_area(TangencySample const& pt, std::uint64_t seed)
{
    Vec const& r = pt.radii.values();
    int const n = pt.radii.dim();
    return mc_mean(1 << 20, seed, 0x61726561ull, [&](RngCursor& cur) {
               return surface_weight(r, cur.unit_vector(n));
           }).value;
}
}  // namespace

ShellSums shell_partial_sums(TangencySample const& point,
                             int shells,
                             std::uint64_t m,
                             std::uint64_t seed,
                             double opening)
{
    if (shells < 4)
        throw std::invalid_argument("shell sums need L >= 4");
    if (m == 0)
        throw std::invalid_argument("sample count must be positive");
    ShellGeometry const geo = make_geometry(point, opening);
    int const n = geo.n;
    double const sigma = ellipsoid_area(point, seed);
    double const sphere = unit_sphere_area(n - 1);
    Mat const v_basis = geo.frame.topRows(n - 1).transpose();  // n x (n-1)

    auto terms = parallel_map<ShellTerm>(static_cast<std::size_t>(shells), [&](std::size_t idx) {
        int const ell = static_cast<int>(idx) + 1;
        double const u_lo = ell / 2.0, u_hi = (ell + 1) / 2.0;
        RngCursor cur = CounterRng(seed, 0x7368656c6cull).cursor(idx);
        Moments value, area;
        double max_offset = 0;
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < m; ++i)
        {
            double const u = cur.uniform(u_lo, u_hi);
            Vec const e = cur.unit_vector(n - 1);
            double const rho = std::exp2(-u);
            Vec const s_hat = v_basis * e;
            double eta = 0, jac = 0;
            if (!geo.graph(s_hat, rho, eta, jac))
            {
                value.add(0);
                area.add(0);
                continue;
            }
            // measure of the shell in (u, e) coordinates
            double const cell = (u_hi - u_lo) * sphere;
            double const ds = std::numbers::ln2 * std::exp2(-u * (n - 1)) * jac * cell;
            area.add(ds);
            max_offset = std::max(max_offset, std::abs(eta) * std::exp2(ell - 2 * u));
            bool const in_slab = rho <= 0.5 && std::abs(eta) <= opening;
            if (in_slab)
            {
                ++hits;
                value.add(std::numbers::ln2 * std::pow(u, -geo.q) * jac * cell);
            }
            else
            {
                value.add(0);
            }
        }
        return ShellTerm{ell,
                         value.mean() / sigma,
                         value.std_error() / sigma,
                         area.mean() / sigma,
                         max_offset,
                         hits};
    });

    ShellSums out;
    out.surface_area = sigma;
    double running = 0;
    for (auto const& t : terms)
    {
        running += t.value;
        out.partial.push_back(running);
    }
    out.terms = std::move(terms);
    return out;
}

std::vector<ShellTerm> shell_terms_by_surface_sampling(TangencySample const& point,
                                                       int shells,
                                                       std::uint64_t m,
                                                       std::uint64_t seed,
                                                       double opening)
{
    int const n = point.radii.dim();
    CounterexampleField const f(n, opening);
    Ellipsoid const e(point.x, point.radii);
    auto const samples = sample_surface(e, m, seed);
    Vec const normal = normal_direction(n);

    double sigma = 0;
    for (auto const& s : samples)
        sigma += s.weight;
    sigma /= static_cast<double>(samples.size());

    std::vector<Moments> value(shells), area(shells);
    std::vector<double> offset(shells, 0.0);
    std::vector<std::uint64_t> hits(shells, 0);
    for (auto const& s : samples)
    {
        double const along = s.point.dot(normal);
        double const tang = (s.point - along * normal).norm();
        int shell = -1;
        if (tang > 0)
        {
            shell = static_cast<int>(std::floor(-2 * std::log2(tang)));
            // shells are half-open: 2^{-(l+1)/2} < |s| <= 2^{-l/2}
            if (std::exp2(-shell / 2.0) < tang)
                --shell;
        }
        for (int ell = 1; ell <= shells; ++ell)
        {
            bool const in = ell == shell;
            double const fv = in ? f(s.point) : 0.0;
            value[ell - 1].add(fv * s.weight / sigma);
            area[ell - 1].add(in ? s.weight / sigma : 0.0);
            if (in && fv > 0)
            {
                ++hits[ell - 1];
                offset[ell - 1] = std::max(offset[ell - 1], std::abs(along) * std::ldexp(1.0, ell));
            }
        }
    }
    std::vector<ShellTerm> out;
    for (int ell = 1; ell <= shells; ++ell)
    {
        out.push_back({ell,
                       value[ell - 1].mean(),
                       value[ell - 1].std_error(),
                       area[ell - 1].mean(),
                       offset[ell - 1],
                       hits[ell - 1]});
    }
    return out;
}

}  // namespace homoeoid
