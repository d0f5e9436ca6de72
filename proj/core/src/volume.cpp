#include "homoeoid/volume.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "homoeoid/parallel.hpp"

namespace homoeoid
{
double unit_ball_volume(int n)
{
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1);
}

double unit_sphere_area(int n)
{
    return n * unit_ball_volume(n);
}

double shell_volume(Radii const& r, double delta)
{
    if (!(delta > 0 && delta < 1))
        throw std::invalid_argument("shell_volume needs delta in (0, 1)");
    int const n = r.dim();
    return r.product() * unit_ball_volume(n)
           * (std::pow(1 + delta, n / 2.0) - std::pow(1 - delta, n / 2.0));
}

//---------------------------------------------------------------------------//
AnnulusKernel::AnnulusKernel(AnyAnnulus const& spec)
{
    AnnulusSpec const& base = base_of(spec);
    centre_ = base.centre();
    radii_ = base.radii().values();
    inv_r2_ = radii_.cwiseProduct(radii_).cwiseInverse();
    delta_ = base.delta();
    if (auto const* refined = std::get_if<RefinedAnnulusSpec>(&spec))
    {
        axis_ = refined->axis();
        c_n_ = refined->c_n();
    }
    volume_ = shell_volume(base.radii(), delta_);
    int const n = dim();
    s_lo_n_ = std::pow(1 - delta_, n / 2.0);
    s_hi_n_ = std::pow(1 + delta_, n / 2.0);
}

Vec AnnulusKernel::sample(RngCursor& cur, Vec* preimage) const
{
    int const n = dim();
    Vec omega = cur.unit_vector(n);
    double const u = s_lo_n_ + (s_hi_n_ - s_lo_n_) * cur.uniform();
    omega *= std::pow(u, 1.0 / n);
    Vec y = centre_ + radii_.cwiseProduct(omega);
    if (preimage)
        *preimage = std::move(omega);
    return y;
}

double sample_shell_radius(RngCursor& cur, int n, double delta)
{
    double const lo = std::pow(1 - delta, n / 2.0);
    double const hi = std::pow(1 + delta, n / 2.0);
    return std::pow(lo + (hi - lo) * cur.uniform(), 1.0 / n);
}

namespace
{
template<class T, class F>
std::vector<T> chunked_collect(std::uint64_t m, std::uint64_t seed, std::uint64_t stream, F&& make)
{
    CounterRng const rng(seed, stream);
    auto parts = parallel_map<std::vector<T>>(chunk_count(m), [&](std::size_t c) {
        RngCursor cur = rng.cursor(c);
        std::uint64_t const begin = c * kChunkSize;
        std::uint64_t const end = std::min(m, begin + kChunkSize);
        std::vector<T> out;
        out.reserve(end - begin);
        for (std::uint64_t i = begin; i < end; ++i)
            out.push_back(make(cur));
        return out;
    });
    std::vector<T> all;
    all.reserve(m);
    for (auto& p : parts)
        std::move(p.begin(), p.end(), std::back_inserter(all));
    return all;
}
}  // namespace

std::vector<Vec> sample_annulus(AnnulusSpec const& spec, std::uint64_t m, std::uint64_t seed)
{
    if (m == 0)
        throw std::invalid_argument("sample count must be positive");
    AnnulusKernel const kernel{AnyAnnulus{spec}};
    return chunked_collect<Vec>(m, seed, 0, [&](RngCursor& cur) {
        for (;;)
        {
            // Rounding at the shell boundary can put a point on |F| = delta.
            Vec y = kernel.sample(cur);
            if (kernel.contains(y))
                return y;
        }
    });
}

double surface_weight(Vec const& radii, Vec const& theta)
{
    int const n = static_cast<int>(radii.size());
    double q = 0;
    for (int j = 0; j < n; ++j)
        q += theta[j] * theta[j] / (radii[j] * radii[j]);
    return unit_sphere_area(n) * radii.prod() * std::sqrt(q);
}

std::vector<SurfaceSample>
sample_surface(Ellipsoid const& e, std::uint64_t m, std::uint64_t seed)
{
    if (m == 0)
        throw std::invalid_argument("sample count must be positive");
    int const n = e.dim();
    Vec const& r = e.radii().values();
    return chunked_collect<SurfaceSample>(m, seed, 0, [&](RngCursor& cur) {
        Vec const theta = cur.unit_vector(n);
        return SurfaceSample{e.centre() + r.cwiseProduct(theta), surface_weight(r, theta)};
    });
}

MCEstimate intersection_volume(AnyAnnulus const& a,
                               AnyAnnulus const& b,
                               std::uint64_t m,
                               std::uint64_t seed)
{
    if (m == 0)
        throw std::invalid_argument("sample count must be positive");
    AnnulusKernel const ka(a), kb(b);
    if (ka.dim() != kb.dim())
        throw std::invalid_argument("annuli of different dimension");
    MCEstimate est = mc_mean(m, seed, 0, [&](RngCursor& cur) {
        Vec const y = ka.sample(cur);
        return (ka.refinement_ok(y) && kb.contains(y)) ? 1.0 : 0.0;
    });
    est.value *= ka.volume();
    est.std_error *= ka.volume();
    return est;
}

//---------------------------------------------------------------------------//
double volume_bound(double delta, double t)
{
    return std::log(1 / delta) * delta * delta / (delta + t);
}

std::pair<AnyAnnulus, AnyAnnulus> normalised_pair(
    int k, double t, Radii const& r1, Radii const& r2, double delta, double c_n, bool refined)
{
    int const n = r1.dim();
    AxisFrame const frame = AxisFrame::standard(n, k);
    Vec const d_tilde = frame.d.cwiseQuotient(r1.values());
    AnnulusSpec const first(Ellipsoid(Vec::Zero(n), Radii::constant(n, 1.0)), delta);
    AnnulusSpec const second(Ellipsoid(t * d_tilde, Radii(r2.values().cwiseQuotient(r1.values()))),
                             delta);
    if (!refined)
        return {first, second};
    return {RefinedAnnulusSpec(first, k, c_n), RefinedAnnulusSpec(second, k, c_n)};
}

VolumeScanResult volume_bound_scan(VolumeScanConfig const& cfg)
{
    if (cfg.deltas.empty() || cfg.ts.empty() || cfg.pair_trials < 1)
        throw std::invalid_argument("volume scan needs non-empty grids");
    for (double d : cfg.deltas)
    {
        if (!(d > 0 && d <= 0.5))
            throw std::invalid_argument("volume scan needs delta in (0, 1/2]");
    }
    for (double t : cfg.ts)
    {
        if (!(t > 0 && t <= 2))
            throw std::invalid_argument("volume scan needs t in (0, 2]");
    }
    double const c_n = cfg.c_n > 0 ? cfg.c_n : default_cn(cfg.n);
    double const width = c_n * c_n;

    // Radii pairs are shared by every (delta, t) cell.
    std::vector<std::pair<Radii, Radii>> pairs;
    CounterRng const radii_rng(cfg.seed, 0x7261646969ull);
    for (int p = 0; p < cfg.pair_trials; ++p)
    {
        RngCursor cur = radii_rng.cursor(static_cast<std::uint64_t>(p));
        Vec a(cfg.n), b(cfg.n);
        for (int j = 0; j < cfg.n; ++j)
            a[j] = 1 + width * cur.uniform();
        for (int j = 0; j < cfg.n; ++j)
            b[j] = 1 + width * cur.uniform();
        pairs.emplace_back(Radii(a), Radii(b));
    }

    VolumeScanResult result;
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
    {
        double const delta = cfg.deltas[di];
        double worst = 0;
        for (std::size_t ti = 0; ti < cfg.ts.size(); ++ti)
        {
            double const t = cfg.ts[ti];
            double const bound = volume_bound(delta, t);
            for (int p = 0; p < cfg.pair_trials; ++p)
            {
                auto const [a, b] = normalised_pair(
                    cfg.k, t, pairs[p].first, pairs[p].second, delta, c_n, cfg.refined);
                std::uint64_t const s = derive_seed(cfg.seed, di * 1000 + ti, p);
                MCEstimate const v = intersection_volume(a, b, cfg.samples, s);
                double const ratio = v.value / bound;
                worst = std::max(worst, ratio);
                result.rows.push_back({delta, t, p, s, v, bound, ratio});
            }
        }
        result.max_ratio_by_delta.emplace_back(delta, worst);
    }
    double lo = INFINITY, hi = 0;
    for (auto const& [d, w] : result.max_ratio_by_delta)
    {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    result.drift = lo > 0 ? hi / lo : INFINITY;
    return result;
}

//---------------------------------------------------------------------------//
double tangential_threshold(double t, double delta)
{
    return 2 * std::sqrt(t * delta);
}

BandDecomposition banded_intersection_scan(int k,
                                           double t,
                                           Radii const& r,
                                           double delta,
                                           std::uint64_t m,
                                           std::uint64_t seed,
                                           double c_n)
{
    if (!(t > 10 * delta))
        throw std::invalid_argument("band decomposition needs t > 10 delta");
    int const n = r.dim();
    if (c_n <= 0)
        c_n = default_cn(n);
    AxisFrame const frame = AxisFrame::standard(n, k);
    AnnulusSpec const first(Ellipsoid(Vec::Zero(n), Radii::constant(n, 1.0)), delta);
    AnnulusSpec const second(Ellipsoid(t * frame.d_tilde, r), delta);
    AnnulusKernel const ka{AnyAnnulus{RefinedAnnulusSpec(first, k, c_n)}};
    AnnulusKernel const kb{AnyAnnulus{second}};

    double const tang = tangential_threshold(t, delta);
    std::vector<double> edges;  // lower edges of dyadic bands
    for (double rho = tang; rho < t; rho *= 2)
        edges.push_back(rho);
    std::size_t const nb = edges.size();
    // classes: 0 = tang, 1..nb = dyadic bands, nb + 1 = trans, nb + 2 = total
    std::size_t const nclass = nb + 3;

    CounterRng const rng(seed, 0);
    auto parts = parallel_map<std::vector<Moments>>(chunk_count(m), [&](std::size_t c) {
        RngCursor cur = rng.cursor(c);
        std::uint64_t const begin = c * kChunkSize;
        std::uint64_t const end = std::min(m, begin + kChunkSize);
        std::vector<Moments> acc(nclass);
        for (std::uint64_t i = begin; i < end; ++i)
        {
            Vec const y = ka.sample(cur);
            std::size_t cls = nclass;  // none
            if (ka.refinement_ok(y) && kb.contains(y))
            {
                double const jn = jacobian_norm(y, kb.centre(), kb.inv_r2());
                if (jn < tang)
                    cls = 0;
                else if (jn >= t)
                    cls = nb + 1;
                else
                    cls = std::min(
                        nb, 1 + static_cast<std::size_t>(std::floor(std::log2(jn / tang))));
            }
            for (std::size_t q = 0; q + 1 < nclass; ++q)
                acc[q].add(q == cls ? 1.0 : 0.0);
            acc[nb + 2].add(cls < nclass ? 1.0 : 0.0);
        }
        return acc;
    });
    std::vector<Moments> total(nclass);
    for (auto const& p : parts)
    {
        for (std::size_t q = 0; q < nclass; ++q)
            total[q].merge(p[q]);
    }
    auto scaled = [&](Moments const& mo) {
        MCEstimate e = mo.estimate(seed);
        e.value *= ka.volume();
        e.std_error *= ka.volume();
        return e;
    };

    BandDecomposition out;
    out.t = t;
    out.delta = delta;
    out.tang = scaled(total[0]);
    for (std::size_t b = 0; b < nb; ++b)
        out.dyadic_bands.push_back({edges[b], std::min(2 * edges[b], t), scaled(total[1 + b])});
    out.trans = scaled(total[nb + 1]);
    out.total = scaled(total[nb + 2]);
    return out;
}

//---------------------------------------------------------------------------//
std::vector<int> single_linkage(std::vector<Vec> const& points, double scale, int* count)
{
    std::size_t const npts = points.size();
    std::vector<int> parent(npts);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i)
        {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    };
    double const s2 = scale * scale;
    for (std::size_t i = 0; i < npts; ++i)
    {
        for (std::size_t j = i + 1; j < npts; ++j)
        {
            if ((points[i] - points[j]).squaredNorm() <= s2)
            {
                int const a = find(static_cast<int>(i));
                int const b = find(static_cast<int>(j));
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
        }
    }
    std::vector<int> label(npts, -1), root_label(npts, -1);
    int next = 0;
    for (std::size_t i = 0; i < npts; ++i)
    {
        int const root = find(static_cast<int>(i));
        if (root_label[root] < 0)
            root_label[root] = next++;
        label[i] = root_label[root];
    }
    if (count)
        *count = next;
    return label;
}

ClusterReport low_jacobian_cluster(ClusterConfig const& cfg)
{
    int const n = static_cast<int>(cfg.radii.size());
    if (!(cfg.delta <= cfg.rho && cfg.rho <= 1))
        throw std::invalid_argument("clustering needs delta <= rho <= 1");
    if (!(cfg.t > 0 && cfg.t <= 2))
        throw std::invalid_argument("clustering needs t in (0, 2]");
    double const c_n = cfg.c_n > 0 ? cfg.c_n : default_cn(n);
    AxisFrame const frame = AxisFrame::standard(n, cfg.k);
    AnnulusSpec const first(Ellipsoid(Vec::Zero(n), Radii::constant(n, 1.0)), cfg.delta);
    AnnulusKernel const ka{AnyAnnulus{RefinedAnnulusSpec(first, cfg.k, c_n)}};
    Vec const centre = cfg.t * frame.d_tilde;
    Vec const inv_r2 = cfg.radii.cwiseProduct(cfg.radii).cwiseInverse();

    CounterRng const rng(cfg.seed, 0);
    auto parts = parallel_map<std::vector<Vec>>(chunk_count(cfg.samples), [&](std::size_t c) {
        RngCursor cur = rng.cursor(c);
        std::uint64_t const begin = c * kChunkSize;
        std::uint64_t const end = std::min(cfg.samples, begin + kChunkSize);
        std::vector<Vec> hits;
        for (std::uint64_t i = begin; i < end; ++i)
        {
            Vec const y = ka.sample(cur);
            if (ka.refinement_ok(y) && jacobian_norm(y, centre, inv_r2) < cfg.rho)
                hits.push_back(y);
        }
        return hits;
    });

    ClusterReport report;
    report.rho = cfg.rho;
    report.t = cfg.t;
    report.sample_count = cfg.samples;
    std::vector<Vec> points;
    for (auto& p : parts)
    {
        report.accepted += p.size();
        for (auto& v : p)
        {
            if (points.size() < cfg.max_points)
                points.push_back(std::move(v));
        }
    }
    if (points.empty())
        return report;

    double const scale = 2 * cfg.link_constant * cfg.rho / cfg.t;
    report.labels = single_linkage(points, scale, &report.cluster_count);
    report.diameters.assign(report.cluster_count, 0.0);
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        for (std::size_t j = i + 1; j < points.size(); ++j)
        {
            if (report.labels[i] == report.labels[j])
            {
                double& d = report.diameters[report.labels[i]];
                d = std::max(d, (points[i] - points[j]).norm());
            }
        }
    }
    return report;
}

}  // namespace homoeoid
