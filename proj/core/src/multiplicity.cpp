#include "homoeoid/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "homoeoid/parallel.hpp"
#include "homoeoid/volume.hpp"

namespace homoeoid
{
std::size_t max_family_size(double delta)
{
    return static_cast<std::size_t>(std::floor(2 / delta)) + 1;
}

std::size_t default_family_size(double delta)
{
    return static_cast<std::size_t>(std::floor(1 / delta));
}

EllipsoidFamily generate_family(
    int n, int k, double delta, std::size_t count, std::uint64_t seed, double c_n)
{
    check_dimension(n);
    if (!(delta > 0 && delta <= 0.5))
        throw std::invalid_argument("family needs delta in (0, 1/2]");
    if (count < 1 || count > max_family_size(delta))
        throw std::invalid_argument("family size too large for delta-separation in [-1, 1]");
    if (c_n <= 0)
        c_n = default_cn(n);
    AxisFrame const frame = AxisFrame::standard(n, k);

    // Gaps are integers in units of delta / 2^20 so separation holds exactly
    // before rounding; the fix-up below absorbs the final rounding.
    constexpr std::int64_t kUnits = std::int64_t{1} << 20;
    double const unit = delta / kUnits;
    auto const spare_units = static_cast<std::int64_t>(
        std::floor(std::max(0.0, 2 - static_cast<double>(count - 1) * delta) / unit));
    RngCursor cur = CounterRng(seed, 0x66616d696c79ull).cursor(0);
    std::vector<std::int64_t> cuts;
    for (std::size_t i = 0; i < count; ++i)
    {
        auto const c = static_cast<std::int64_t>(cur.uniform() * static_cast<double>(spare_units + 1));
        cuts.push_back(std::min(c, spare_units));
    }
    std::sort(cuts.begin(), cuts.end());

    EllipsoidFamily fam;
    fam.k = k;
    fam.delta = delta;
    fam.c_n = c_n;
    for (std::size_t i = 0; i < count; ++i)
    {
        double t = -1 + static_cast<double>(static_cast<std::int64_t>(i) * kUnits + cuts[i]) * unit;
        if (!fam.ts.empty())
        {
            while (t - fam.ts.back() < delta)
                t = std::nextafter(t, INFINITY);
        }
        if (t > 1)
            throw std::runtime_error("separated family overflowed [-1, 1]");
        fam.ts.push_back(t);
    }
    double const width = c_n * c_n;
    for (std::size_t i = 0; i < count; ++i)
    {
        Vec r(n);
        for (int j = 0; j < n; ++j)
            r[j] = 1 + width * cur.uniform();
        fam.members.emplace_back(fam.ts[i] * frame.d, Radii(r));
    }
    return fam;
}

//---------------------------------------------------------------------------//
namespace
{
struct PairVolumes
{
    Moments refined;
    Moments unrefined;
    bool skipped{false};
    std::uint64_t samples{0};
};

double bounding_radius(Ellipsoid const& e, double delta)
{
    return e.radii().values().maxCoeff() * std::sqrt(1 + delta);
}

PairVolumes pair_volumes(AnnulusKernel const& ka,
                         AnnulusKernel const& kb,
                         std::uint64_t m,
                         std::uint64_t seed)
{
    PairVolumes out;
    out.samples = m;
    CounterRng const rng(seed, 0);
    for (std::uint64_t c = 0; c < chunk_count(m); ++c)
    {
        RngCursor cur = rng.cursor(c);
        std::uint64_t const end = std::min(m, (c + 1) * kChunkSize);
        for (std::uint64_t i = c * kChunkSize; i < end; ++i)
        {
            Vec const y = ka.sample(cur);
            bool const in_plain = kb.contains_unrefined(y);
            out.unrefined.add(in_plain ? 1.0 : 0.0);
            bool const in_refined = in_plain && ka.refinement_ok(y) && kb.refinement_ok(y);
            out.refined.add(in_refined ? 1.0 : 0.0);
        }
    }
    return out;
}
}  // namespace

OverlapResult overlap_l2(EllipsoidFamily const& family, OverlapOptions const& opts, std::uint64_t seed)
{
    std::size_t const count = family.size();
    if (count == 0)
        throw std::invalid_argument("family is empty");
    double const delta = family.delta;

    std::vector<AnnulusKernel> refined;
    for (auto const& e : family.members)
    {
        AnnulusSpec const spec(e, delta);
        refined.emplace_back(AnyAnnulus{RefinedAnnulusSpec(spec, family.k, family.c_n)});
    }

    struct Job
    {
        std::size_t i, j;
        int dyadic;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < count; ++i)
    {
        jobs.push_back({i, i, -1});
        for (std::size_t j = i + 1; j < count; ++j)
        {
            double const gap = std::abs(family.ts[j] - family.ts[i]);
            int const dy = std::max(0, static_cast<int>(std::floor(std::log2(gap / delta))));
            jobs.push_back({i, j, dy});
        }
    }

    auto results = parallel_map<PairVolumes>(jobs.size(), [&](std::size_t idx) {
        Job const& job = jobs[idx];
        auto const& a = family.members[job.i];
        auto const& b = family.members[job.j];
        if ((a.centre() - b.centre()).norm() > bounding_radius(a, delta) + bounding_radius(b, delta))
        {
            PairVolumes skip;
            skip.skipped = true;
            return skip;
        }
        double const tau = job.dyadic < 0 ? delta : std::ldexp(delta, job.dyadic);
        auto const m = std::max<std::uint64_t>(
            opts.min_samples,
            static_cast<std::uint64_t>(std::ceil(static_cast<double>(opts.samples) * std::sqrt(delta / tau))));
        std::uint64_t const s = derive_seed(seed, job.i, job.j);
        return pair_volumes(refined[job.i], refined[job.j], m, s);
    });

    double square = 0, square_var = 0, plain_square = 0, plain_var = 0;
    OverlapResult out;
    std::map<int, PairClass> classes;
    std::vector<std::map<int, std::size_t>> per_member(count);
    for (std::size_t idx = 0; idx < jobs.size(); ++idx)
    {
        Job const& job = jobs[idx];
        PairVolumes const& pv = results[idx];
        PairClass& cls = classes[job.dyadic];
        cls.dyadic = job.dyadic;
        ++cls.pairs;
        if (job.dyadic >= 0)
        {
            ++per_member[job.i][job.dyadic];
            ++per_member[job.j][job.dyadic];
        }
        if (pv.skipped)
        {
            ++cls.skipped;
            continue;
        }
        cls.samples_per_pair = std::max(cls.samples_per_pair, pv.samples);
        double const vol = refined[job.i].volume();
        double const mult = job.dyadic < 0 ? 1.0 : 2.0;
        double const v = vol * pv.refined.mean();
        double const se = vol * pv.refined.std_error();
        double const pvv = vol * pv.unrefined.mean();
        double const pse = vol * pv.unrefined.std_error();
        square += mult * v;
        square_var += mult * mult * se * se;
        plain_square += mult * pvv;
        plain_var += mult * mult * pse * pse;
        cls.volume_sum += v;
        if (job.dyadic < 0)
            out.diagonal += v;
    }
    for (auto const& [dy, cls] : classes)
        out.classes.push_back(cls);
    for (auto const& counts : per_member)
    {
        for (auto const& [dy, c] : counts)
        {
            double const tau_over_delta = std::ldexp(1.0, dy);
            out.max_count_ratio = std::max(out.max_count_ratio, c / tau_over_delta);
        }
    }

    out.square = {square, std::sqrt(square_var), jobs.size(), seed};
    double const norm = std::sqrt(square);
    out.norm = {norm, norm > 0 ? std::sqrt(square_var) / (2 * norm) : 0.0, jobs.size(), seed};
    double const pnorm = std::sqrt(plain_square);
    out.unrefined_norm
        = {pnorm, pnorm > 0 ? std::sqrt(plain_var) / (2 * pnorm) : 0.0, jobs.size(), seed};
    return out;
}

MCEstimate direct_overlap_square(EllipsoidFamily const& family,
                                 bool refined,
                                 std::uint64_t m,
                                 std::uint64_t seed)
{
    if (family.size() == 0)
        throw std::invalid_argument("family is empty");
    int const n = family.members.front().dim();
    std::vector<AnnulusKernel> kernels;
    Vec lo = Vec::Constant(n, INFINITY), hi = Vec::Constant(n, -INFINITY);
    for (auto const& e : family.members)
    {
        AnnulusSpec const spec(e, family.delta);
        if (refined)
            kernels.emplace_back(AnyAnnulus{RefinedAnnulusSpec(spec, family.k, family.c_n)});
        else
            kernels.emplace_back(AnyAnnulus{spec});
        double const reach = bounding_radius(e, family.delta);
        lo = lo.cwiseMin(e.centre() - Vec::Constant(n, reach));
        hi = hi.cwiseMax(e.centre() + Vec::Constant(n, reach));
    }
    double const box_volume = (hi - lo).prod();
    MCEstimate est = mc_mean(m, seed, 0, [&](RngCursor& cur) {
        Vec y(n);
        for (int j = 0; j < n; ++j)
            y[j] = cur.uniform(lo[j], hi[j]);
        int c = 0;
        for (auto const& k : kernels)
            c += k.contains(y) ? 1 : 0;
        return static_cast<double>(c * c);
    });
    est.value *= box_volume;
    est.std_error *= box_volume;
    return est;
}

double multiplicity_bound(double delta, std::size_t count)
{
    return std::log(1 / delta) * std::sqrt(delta) * std::sqrt(static_cast<double>(count));
}

CordobaResult cordoba_check(CordobaConfig const& cfg)
{
    if (cfg.deltas.size() < 3)
        throw std::invalid_argument("cordoba check needs at least 3 delta values");
    if (cfg.trials < 1)
        throw std::invalid_argument("cordoba check needs at least one trial");
    CordobaResult out;
    for (std::size_t di = 0; di < cfg.deltas.size(); ++di)
    {
        double const delta = cfg.deltas[di];
        std::size_t const count = default_family_size(delta);
        double worst = 0;
        for (int trial = 0; trial < cfg.trials; ++trial)
        {
            std::uint64_t const ts = derive_seed(cfg.seed, di, static_cast<std::uint64_t>(trial));
            auto const fam = generate_family(cfg.n, cfg.k, delta, count, ts, cfg.c_n);
            auto const ov = overlap_l2(fam, cfg.overlap, derive_seed(ts, 1));
            double const bound = multiplicity_bound(delta, count);
            CordobaRow row{delta,
                           ts,
                           count,
                           ov.norm,
                           ov.unrefined_norm,
                           bound,
                           ov.norm.value / bound,
                           ov.unrefined_norm.value / bound,
                           ov.max_count_ratio};
            worst = std::max(worst, row.constant);
            out.rows.push_back(row);
        }
        out.worst_by_delta.emplace_back(delta, worst);
    }
    double lo = INFINITY, hi = 0;
    for (auto const& [d, w] : out.worst_by_delta)
    {
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    out.drift = lo > 0 ? hi / lo : INFINITY;
    return out;
}

}  // namespace homoeoid
