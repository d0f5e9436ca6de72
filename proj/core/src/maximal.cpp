#include "homoeoid/maximal.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "homoeoid/parallel.hpp"
#include "homoeoid/volume.hpp"

namespace homoeoid
{
namespace
{
using Wide = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>>;

constexpr double kQuantum = 0x1.0p48;

Int128 quantise(double v)
{
    if (!(v >= 0) || !(v < 0x1.0p62))
        throw std::domain_error("field value outside the fixed-point range");
    return static_cast<Int128>(std::floor(v * kQuantum));
}

Wide to_wide(Int128 v)
{
    bool const neg = v < 0;
    unsigned __int128 const mag = neg ? -static_cast<unsigned __int128>(v)
                                      : static_cast<unsigned __int128>(v);
    Wide w = Wide(static_cast<std::uint64_t>(mag >> 64));
    w = ldexp(w, 64) + Wide(static_cast<std::uint64_t>(mag));
    return neg ? Wide(-w) : w;
}

Wide exact_value(ExactAverage const& a)
{
    return Wide(a.scale) * to_wide(a.sum);
}

struct Partial
{
    std::vector<Int128> sums;
    std::vector<Moments> moments;
};

/*!
 * Shared-sample accumulation: slot 0 is the unrefined sum, slot k the
 * refined sum for axis k (only when all_axes is set).
 */
struct Accumulated
{
    std::vector<Int128> sums;
    std::vector<Moments> moments;
    double scale;  //!< multiply a sum by this to get the average
    double moment_scale;  //!< multiply a sample mean by this
};

Accumulated accumulate(Field const& f,
                       AnnulusSpec const& spec,
                       double c_n,
                       std::uint64_t m,
                       std::uint64_t seed,
                       bool all_axes,
                       int single_axis,
                       AverageMode mode)
{
    if (m == 0)
        throw std::invalid_argument("sample count must be positive");
    if (f.dim() != spec.dim())
        throw std::invalid_argument("field and annulus differ in dimension");
    int const n = spec.dim();
    AnnulusKernel const kernel{AnyAnnulus{spec}};
    Vec const& centre = kernel.centre();
    Vec const& radii = kernel.radii();
    double const shell = kernel.volume();
    SupportSampler const* support = f.support();
    bool const from_support = support && support->volume < shell;
    std::size_t const slots = all_axes ? static_cast<std::size_t>(n + 1) : 1;
    double const two_cn = 2 * c_n;

    CounterRng const rng(seed, 0);
    auto parts = parallel_map<Partial>(chunk_count(m), [&](std::size_t c) {
        RngCursor cur = rng.cursor(c);
        std::uint64_t const begin = c * kChunkSize;
        std::uint64_t const end = std::min(m, begin + kChunkSize);
        Partial acc{std::vector<Int128>(slots, 0), std::vector<Moments>(slots)};
        Vec omega(n);
        for (std::uint64_t i = begin; i < end; ++i)
        {
            Vec y;
            bool inside = true;
            if (from_support)
            {
                y = support->draw(cur);
                inside = kernel.contains_unrefined(y);
                omega = (y - centre).cwiseQuotient(radii);
            }
            else
            {
                y = kernel.sample(cur, &omega);
            }
            double v = inside ? f(y) : 0.0;
            if (mode == AverageMode::absolute)
                v = std::abs(v);
            auto keep = [&](int axis) {
                double const w = std::abs(omega[axis - 1]);
                return w * w * w >= two_cn;
            };
            if (all_axes)
            {
                Int128 const q = mode == AverageMode::absolute ? quantise(v) : 0;
                acc.sums[0] += q;
                acc.moments[0].add(v);
                for (int k = 1; k <= n; ++k)
                {
                    bool const in_k = keep(k);
                    if (in_k)
                        acc.sums[k] += q;
                    acc.moments[k].add(in_k ? v : 0.0);
                }
            }
            else
            {
                if (single_axis > 0 && !keep(single_axis))
                    v = 0;
                if (mode == AverageMode::absolute)
                    acc.sums[0] += quantise(v);
                acc.moments[0].add(v);
            }
        }
        return acc;
    });

    Accumulated out{std::vector<Int128>(slots, 0), std::vector<Moments>(slots), 0, 1};
    for (auto const& p : parts)
    {
        for (std::size_t s = 0; s < slots; ++s)
        {
            out.sums[s] += p.sums[s];
            out.moments[s].merge(p.moments[s]);
        }
    }
    out.moment_scale = from_support ? support->volume / shell : 1.0;
    out.scale = out.moment_scale / (kQuantum * static_cast<double>(m));
    return out;
}
}  // namespace

MCEstimate annulus_average(Field const& f,
                           AnyAnnulus const& spec,
                           std::uint64_t m,
                           std::uint64_t seed,
                           AverageMode mode)
{
    int axis = 0;
    double c_n = default_cn(base_of(spec).dim());
    if (auto const* refined = std::get_if<RefinedAnnulusSpec>(&spec))
    {
        axis = refined->axis();
        c_n = refined->c_n();
    }
    Accumulated const acc = accumulate(f, base_of(spec), c_n, m, seed, false, axis, mode);
    MCEstimate est = acc.moments[0].estimate(seed);
    est.std_error *= acc.moment_scale;
    if (mode == AverageMode::absolute)
        est.value = ExactAverage{acc.scale, acc.sums[0]}.value();
    else
        est.value *= acc.moment_scale;
    return est;
}

std::vector<ExactAverage> shared_averages(Field const& f,
                                          AnnulusSpec const& spec,
                                          double c_n,
                                          std::uint64_t m,
                                          std::uint64_t seed)
{
    Accumulated const acc
        = accumulate(f, spec, c_n, m, seed, true, 0, AverageMode::absolute);
    std::vector<ExactAverage> out;
    for (auto const& s : acc.sums)
        out.push_back({acc.scale, s});
    return out;
}

//---------------------------------------------------------------------------//
RadiiNet::RadiiNet(int n, double lo, double hi, double delta)
    : n_(n), lo_(lo), hi_(hi)
{
    check_dimension(n);
    if (!(lo > 0 && hi >= lo))
        throw std::invalid_argument("radii net needs 0 < lo <= hi");
    if (!(delta > 0))
        throw std::invalid_argument("radii net needs delta > 0");
    double const width = hi - lo;
    step_ = width > 0 ? std::min(delta / 4, width / 4) : delta / 4;
    per_axis_ = width > 0 ? static_cast<int>(std::ceil(width / step_ - 1e-9)) + 1 : 1;
    total_ = 1;
    for (int j = 0; j < n; ++j)
        total_ *= static_cast<std::size_t>(per_axis_);
}

RadiiNet RadiiNet::restricted(int n, double c_n, double delta)
{
    return RadiiNet(n, 1.0, 1.0 + c_n * c_n, delta);
}

Radii RadiiNet::at(std::size_t index) const
{
    if (index >= total_)
        throw std::out_of_range("radii net index");
    Vec r(n_);
    double const spacing = per_axis_ > 1 ? (hi_ - lo_) / (per_axis_ - 1) : 0.0;
    for (int j = n_ - 1; j >= 0; --j)
    {
        auto const i = static_cast<int>(index % per_axis_);
        index /= per_axis_;
        r[j] = i == per_axis_ - 1 ? hi_ : lo_ + i * spacing;
    }
    return Radii(r);
}

std::vector<Radii> RadiiNet::points() const
{
    std::vector<Radii> out;
    out.reserve(total_);
    for (std::size_t i = 0; i < total_; ++i)
        out.push_back(at(i));
    return out;
}

std::uint64_t point_seed(std::uint64_t seed, Vec const& x, Radii const& r)
{
    std::uint64_t h = seed;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        h = derive_seed(h, std::bit_cast<std::uint64_t>(x[j]));
    for (int j = 0; j < r.dim(); ++j)
        h = derive_seed(h, std::bit_cast<std::uint64_t>(r[j]));
    return h;
}

double discretised_maximal(Field const& f,
                           Vec const& x,
                           double delta,
                           std::vector<Radii> const& net,
                           int k,
                           std::uint64_t m,
                           std::uint64_t seed,
                           double c_n)
{
    if (net.empty())
        throw std::invalid_argument("radii net is empty");
    int const n = static_cast<int>(x.size());
    if (k < 0 || k > n)
        throw std::invalid_argument("axis must lie in 0..n");
    if (c_n <= 0)
        c_n = default_cn(n);
    double best = 0;
    for (auto const& r : net)
    {
        AnnulusSpec const spec(Ellipsoid(x, r), delta);
        Accumulated const acc = accumulate(
            f, spec, c_n, m, point_seed(seed, x, r), false, k, AverageMode::absolute);
        best = std::max(best, ExactAverage{acc.scale, acc.sums[0]}.value());
    }
    return best;
}

DominationResult domination_check(Field const& f,
                                  std::vector<Vec> const& xs,
                                  double delta,
                                  std::vector<Radii> const& net,
                                  std::uint64_t m,
                                  std::uint64_t seed,
                                  double c_n)
{
    if (net.empty())
        throw std::invalid_argument("radii net is empty");
    if (xs.empty())
        return {};
    int const n = static_cast<int>(xs.front().size());
    if (c_n <= 0)
        c_n = default_cn(n);

    struct Gap
    {
        double gap;
        double plain;
        double refined_sum;
    };
    auto gaps = parallel_map<Gap>(xs.size(), [&](std::size_t i) {
        Vec const& x = xs[i];
        std::vector<Wide> best(static_cast<std::size_t>(n + 1), Wide(0));
        for (auto const& r : net)
        {
            AnnulusSpec const spec(Ellipsoid(x, r), delta);
            auto const avgs = shared_averages(f, spec, c_n, m, point_seed(seed, x, r));
            for (std::size_t s = 0; s < avgs.size(); ++s)
            {
                Wide const v = exact_value(avgs[s]);
                if (v > best[s])
                    best[s] = v;
            }
        }
        Wide sum(0);
        for (int k = 1; k <= n; ++k)
            sum += best[k];
        Wide const gap = best[0] - sum;
        return Gap{gap.convert_to<double>(), best[0].convert_to<double>(), sum.convert_to<double>()};
    });

    DominationResult out;
    out.max_violation = -INFINITY;
    for (auto const& g : gaps)
    {
        out.max_violation = std::max(out.max_violation, g.gap);
        if (g.gap > 0)
            ++out.violations;
        out.plain.push_back(g.plain);
        out.refined_sum.push_back(g.refined_sum);
    }
    return out;
}

MCEstimate lp_norm(Field const& f, double p, Box const& region, std::uint64_t m, std::uint64_t seed)
{
    if (!(p >= 1))
        throw std::invalid_argument("lp_norm needs p >= 1");
    if (m == 0)
        throw std::invalid_argument("sample count must be positive");
    double const vol = region.volume();
    MCEstimate const mean = mc_mean(m, seed, 0, [&](RngCursor& cur) {
        return std::pow(std::abs(f(region.sample(cur))), p);
    });
    MCEstimate out = mean;
    double const integral = vol * mean.value;
    out.value = std::pow(integral, 1 / p);
    out.std_error = integral > 0 ? out.value / (p * integral) * vol * mean.std_error : 0.0;
    return out;
}

//---------------------------------------------------------------------------//
GrowthScan l2_growth_scan(std::function<Field(int)> const& family, GrowthConfig const& cfg)
{
    if (cfg.deltas.size() < 3)
        throw std::invalid_argument("growth scan needs at least 3 delta values");
    for (std::size_t i = 1; i < cfg.deltas.size(); ++i)
    {
        if (!(cfg.deltas[i] < cfg.deltas[i - 1]))
            throw std::invalid_argument("growth scan deltas must decrease");
    }
    if (cfg.family_size < 1 || cfg.x_samples < 2)
        throw std::invalid_argument("growth scan needs a family and x samples");
    double const c_n = cfg.c_n > 0 ? cfg.c_n : default_cn(cfg.n);

    std::vector<Vec> xs;
    RngCursor xcur = CounterRng(cfg.seed, 0x78ull).cursor(0);
    for (std::uint64_t i = 0; i < cfg.x_samples; ++i)
        xs.push_back(cfg.x_region.sample(xcur));
    double const region_vol = cfg.x_region.volume();

    std::vector<Field> fields;
    for (int id = 0; id < cfg.family_size; ++id)
        fields.push_back(family(id));

    GrowthScan scan;
    std::vector<std::pair<double, double>> uv;
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
    {
        double const delta = cfg.deltas[di];
        auto const net = RadiiNet::restricted(cfg.n, c_n, delta).points();
        double mean_norm = 0;
        for (int id = 0; id < cfg.family_size; ++id)
        {
            std::uint64_t const s = derive_seed(cfg.seed, di, static_cast<std::uint64_t>(id));
            auto const values = parallel_map<double>(xs.size(), [&](std::size_t i) {
                return discretised_maximal(fields[id], xs[i], delta, net, 0, cfg.samples, s, c_n);
            });
            Moments mo;
            for (double v : values)
                mo.add(v * v);
            double const integral = region_vol * mo.mean();
            MCEstimate norm = mo.estimate(s);
            norm.value = std::sqrt(integral);
            norm.std_error = integral > 0 ? region_vol * mo.std_error() / (2 * norm.value) : 0.0;
            scan.rows.push_back({delta, id, norm});
            mean_norm += norm.value / cfg.family_size;
        }
        uv.emplace_back(std::log(1 / delta), std::log(mean_norm));
    }
    scan.fit = fit_line(std::move(uv));
    return scan;
}

}  // namespace homoeoid
