#include <algorithm>
#include <cmath>

#include "detail.hpp"
#include "homoeoid/fibre.hpp"
#include "homoeoid/multiplicity.hpp"
#include "homoeoid/parallel.hpp"
#include "homoeoid/rng.hpp"
#include "homoeoid/volume.hpp"
#include "homoeoid_tools/limits.hpp"

namespace homoeoid::tools::detail
{
namespace
{
std::vector<double> t_grid(int coarsest_exp)
{
    std::vector<double> ts;
    for (int e = coarsest_exp; e >= 0; --e)
        ts.push_back(std::ldexp(1.0, -e));
    return ts;
}

Radii restricted_radii(RngCursor& cur, int n, double c_n)
{
    Vec r(n);
    for (int j = 0; j < n; ++j)
        r[j] = 1 + c_n * c_n * cur.uniform();
    return Radii(r);
}

/*
 * (t, r) for which the unit sphere and E(t d_1, r) have a critical pair at
 * omega with omega_2, omega_3 < 0 and |omega_1|^3 well above 2 c_3. Solves
 * omega_j (r_j^2 - r_1^2) = -r_1^2 t for r_2, r_3.
 */
std::pair<double, Vec> tangent_config(RngCursor& cur)
{
    for (;;)
    {
        double const t = cur.uniform(0.5, 2);
        double const r1 = cur.uniform(0.5, 2);
        double const w2 = -cur.uniform(0.1, 1);
        double const w3 = -cur.uniform(0.1, 1);
        if (w2 * w2 + w3 * w3 > 0.85)
            continue;
        double const a = r1 * r1 * (1 - t / w2);
        double const b = r1 * r1 * (1 - t / w3);
        if (a > 4 || b > 4)
            continue;
        Vec r(3);
        r << r1, std::sqrt(a), std::sqrt(b);
        return {t, r};
    }
}
}  // namespace

ExperimentResult volume_bound(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    reject_p(cfg);
    allow_overrides(cfg, {"pairs", "k", "c_n", "t_levels"});
    VolumeScanConfig vc;
    vc.n = cfg.n;
    vc.k = static_cast<int>(cfg.count_or("k", 1));
    vc.deltas = deltas_or(cfg, dyadic(5, 9));
    vc.ts = t_grid(static_cast<int>(cfg.count_or("t_levels", 5)) - 1);
    vc.pair_trials = static_cast<int>(cfg.count_or("pairs", 50));
    vc.samples = cfg.samples.value_or(100000);
    vc.seed = cfg.seed;
    vc.c_n = cfg.override_or("c_n", 0);
    auto const scan = volume_bound_scan(vc);

    ExperimentResult res;
    res.table.columns = {"delta", "t", "pair", "seed", "measured", "std_error", "bound", "ratio"};
    for (auto const& r : scan.rows)
        res.table.add({r.delta, r.t, static_cast<std::int64_t>(r.pair), r.seed, r.measured.value,
                       r.measured.std_error, r.bound, r.ratio});
    double constant = 0;
    for (auto const& [d, m] : scan.max_ratio_by_delta)
    {
        res.metrics["max_ratio_by_delta"].push_back({{"delta", d}, {"max_ratio", m}});
        constant = std::max(constant, m);
    }
    res.metrics["uniform_constant"] = constant;
    res.metrics["drift"] = scan.drift;
    res.pass = scan.drift <= limits::volume_drift;
    return res;
}

ExperimentResult bands(RunConfig const& cfg)
{
    require_n(cfg, 3, 3);
    reject_p(cfg);
    allow_overrides(cfg, {"radii", "C", "c_n", "k"});
    auto const deltas = deltas_or(cfg, dyadic(6, 9));
    std::vector<double> const ts{0.25, 0.5, 1.0};
    auto const draws = cfg.count_or("radii", 4);
    double const limit = cfg.override_or("C", limits::band_constant);
    double const c_n = cfg.override_or("c_n", default_cn(3));
    int const k = static_cast<int>(cfg.count_or("k", 1));
    std::uint64_t const m = cfg.samples.value_or(200000);

    ExperimentResult res;
    res.table.columns = {"delta", "t", "radii_id", "class", "lo", "hi", "volume", "std_error", "ratio"};
    double worst_z = 0, worst_c = 0;
    for (std::size_t di = 0; di < deltas.size(); ++di)
    {
        double const delta = deltas[di];
        double worst_delta = 0;
        for (std::size_t ti = 0; ti < ts.size(); ++ti)
        {
            double const t = ts[ti];
            if (!(t > 10 * delta))
                throw ConfigError("bands needs t > 10 delta for every grid point");
            for (std::uint64_t q = 0; q < draws; ++q)
            {
                RngCursor cur = CounterRng(derive_seed(cfg.seed, di, q), ti).cursor(0);
                Radii const r = restricted_radii(cur, 3, c_n);
                auto const b = banded_intersection_scan(k, t, r, delta, m, derive_seed(cfg.seed, 0x62, di * 100 + ti * 10 + q), c_n);
                AnnulusSpec const first(Ellipsoid(Vec::Zero(3), Radii::constant(3, 1)), delta);
                AnnulusSpec const second(Ellipsoid(t * AxisFrame::standard(3, k).d_tilde, r), delta);
                MCEstimate const indep = intersection_volume(AnyAnnulus{RefinedAnnulusSpec(first, k, c_n)},
                                                             AnyAnnulus{second},
                                                             m,
                                                             derive_seed(cfg.seed, 0x69, di * 100 + ti * 10 + q));
                double const scale = delta * delta / t;
                auto const id = static_cast<std::int64_t>(q);
                auto row = [&](char const* cls, double lo, double hi, MCEstimate const& e) {
                    res.table.add({delta, t, id, std::string(cls), lo, hi, e.value, e.std_error, e.value / scale});
                };
                row("tang", 0, tangential_threshold(t, delta), b.tang);
                double local = b.trans.value / scale;
                double sum = b.tang.value + b.trans.value;
                for (auto const& band : b.dyadic_bands)
                {
                    row("band", band.lo, band.hi, band.volume);
                    local = std::max(local, band.volume.value / scale);
                    sum += band.volume.value;
                }
                row("trans", t, INFINITY, b.trans);
                row("total", 0, INFINITY, b.total);
                row("independent", 0, INFINITY, indep);
                double const se = std::hypot(b.total.std_error, indep.std_error);
                double const z = se > 0 ? std::abs(sum - indep.value) / se : 0.0;
                worst_z = std::max(worst_z, z);
                worst_delta = std::max(worst_delta, local);
            }
        }
        res.metrics["band_constant_by_delta"].push_back({{"delta", delta}, {"constant", worst_delta}});
        worst_c = std::max(worst_c, worst_delta);
    }
    res.metrics["band_constant"] = worst_c;
    res.metrics["band_constant_limit"] = limit;
    res.metrics["partition_max_sigmas"] = worst_z;
    res.pass = worst_c <= limit && worst_z <= limits::band_sigmas;
    return res;
}

ExperimentResult clusters(RunConfig const& cfg)
{
    require_n(cfg, 3, 3);
    reject_p(cfg);
    allow_overrides(cfg, {"configs", "rho_level", "C_n", "C", "max_points"});
    if (!cfg.deltas.empty())
        throw ConfigError("clusters derives delta from rho; no delta grid");
    auto const configs = cfg.count_or("configs", 100);
    int const level = static_cast<int>(cfg.count_or("rho_level", 5));
    double const limit = cfg.override_or("C", limits::cluster_constant);
    double const link = cfg.override_or("C_n", 8);
    if (!(link > 0))
        throw ConfigError("C_n must be positive");

    ExperimentResult res;
    res.table.columns = {"config", "halving", "t", "r1", "r2", "r3", "rho", "delta",
                         "accepted", "clusters", "max_diameter", "constant"};
    double cmax[2] = {0, 0};
    int max_count = 0;
    std::uint64_t nonempty[2] = {0, 0};
    for (std::uint64_t i = 0; i < configs; ++i)
    {
        RngCursor cur = CounterRng(derive_seed(cfg.seed, 0x636c), i).cursor(0);
        auto const [t, radii] = tangent_config(cur);
        for (int h = 0; h < 2; ++h)
        {
            ClusterConfig cc;
            cc.t = t;
            cc.radii = radii;
            cc.rho = t * std::ldexp(1.0, -level - h);
            cc.delta = std::min(cc.rho, std::ldexp(1.0, -7));
            cc.samples = cfg.samples.value_or(500000);
            cc.seed = derive_seed(cfg.seed, i, static_cast<std::uint64_t>(h));
            cc.link_constant = link;
            cc.max_points = cfg.count_or("max_points", 3000);
            auto const rep = low_jacobian_cluster(cc);
            double const diam = rep.diameters.empty()
                                    ? 0.0
                                    : *std::max_element(rep.diameters.begin(), rep.diameters.end());
            double const constant = diam * t / cc.rho;
            if (!rep.empty())
            {
                ++nonempty[h];
                cmax[h] = std::max(cmax[h], constant);
            }
            max_count = std::max(max_count, rep.cluster_count);
            res.table.add({i, static_cast<std::int64_t>(h), t, radii[0], radii[1], radii[2], cc.rho, cc.delta,
                           rep.accepted, static_cast<std::int64_t>(rep.cluster_count), diam, constant});
        }
    }
    double const dr = drift({cmax[0], cmax[1]});
    res.metrics["max_cluster_count"] = max_count;
    res.metrics["constant_at_rho"] = cmax[0];
    res.metrics["constant_at_half_rho"] = cmax[1];
    res.metrics["constant_drift"] = dr;
    res.metrics["nonempty"] = {nonempty[0], nonempty[1]};
    res.pass = max_count <= limits::cluster_count && cmax[0] <= limit && cmax[1] <= limit
               && dr <= limits::cluster_drift;
    return res;
}

ExperimentResult fibre(RunConfig const& cfg)
{
    require_n(cfg, 3, 3);
    reject_p(cfg);
    allow_overrides(cfg, {"configs", "levels"});
    if (!cfg.deltas.empty())
        throw ConfigError("fibre takes no delta grid");
    auto const configs = cfg.count_or("configs", 50);
    auto const levels = static_cast<int>(cfg.count_or("levels", 4));
    std::vector<double> rhos;
    for (int l = 0; l < levels; ++l)
        rhos.push_back(std::ldexp(1.0, -3 - l));

    ExperimentResult res;
    res.table.columns = {"config", "status", "t", "r1", "r2", "r3", "u1", "u2", "rho", "length", "ratio"};

    Vec cx(3);
    cx << 0.5, 0, 0;
    Vec cr(3);
    cr << 1.2, 1, 1;
    FibreTrace const cal = trace_fibre(cx, Radii(cr), {0, 0.25 / 1.44}, 0.01);
    double const cal_err = std::abs(cal.total_length - 2 * M_PI);
    res.table.add({std::string("calibration"), std::string("ok"), 0.0, 1.2, 1.0, 1.0, 0.0, 0.25 / 1.44,
                   NAN, cal.total_length, NAN});
    bool degenerate_flagged = false;
    try
    {
        trace_fibre(Vec::Zero(3), Radii(cr), {0, 0}, 0.01);
    }
    catch (FibreError const& e)
    {
        degenerate_flagged = e.kind() == FibreError::Kind::degenerate;
    }

    struct Outcome
    {
        std::string status;
        double t, u1, u2;
        Vec r;
        std::vector<double> lengths;
    };
    auto const outcomes = parallel_map<Outcome>(configs, [&](std::size_t i) {
        RngCursor cur = CounterRng(derive_seed(cfg.seed, 0x6669), i).cursor(0);
        Outcome o;
        o.t = cur.uniform(0.5, 1.5);
        o.r = Vec(3);
        for (int j = 0; j < 3; ++j)
            o.r[j] = cur.uniform(0.75, 1.5);
        Vec dir = cur.unit_vector(3);
        while (std::abs(dir[0]) < 0.2)
            dir = cur.unit_vector(3);
        o.u1 = cur.uniform(-0.1, 0.1);
        Vec const xi = dir * std::sqrt(1 + o.u1);
        Vec const centre = o.t * AxisFrame::standard(3, 1).d;
        o.u2 = defining_value(centre, Radii(o.r), xi);
        try
        {
            FibreTrace const tr = trace_fibre(centre, Radii(o.r), {o.u1, o.u2}, std::min(rhos.back() / 10, 0.01));
            for (double rho : rhos)
                o.lengths.push_back(length_in_ball(tr, xi, rho));
            o.status = "ok";
        }
        catch (FibreError const& e)
        {
            o.status = e.kind() == FibreError::Kind::degenerate ? "degenerate" : "nonconvergent";
        }
        return o;
    });

    std::vector<double> worst(rhos.size(), 0.0);
    std::uint64_t failures = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i)
    {
        auto const& o = outcomes[i];
        if (o.status != "ok")
        {
            ++failures;
            res.table.add({std::to_string(i), o.status, o.t, o.r[0], o.r[1], o.r[2],
                           o.u1, o.u2, NAN, NAN, NAN});
            continue;
        }
        for (std::size_t l = 0; l < rhos.size(); ++l)
        {
            double const ratio = o.lengths[l] / rhos[l];
            worst[l] = std::max(worst[l], ratio);
            res.table.add({std::to_string(i), o.status, o.t, o.r[0], o.r[1], o.r[2], o.u1, o.u2, rhos[l],
                           o.lengths[l], ratio});
        }
    }
    for (std::size_t l = 0; l < rhos.size(); ++l)
        res.metrics["max_ratio_by_rho"].push_back({{"rho", rhos[l]}, {"max_ratio", worst[l]}});
    double const dr = drift(worst);
    res.metrics["ratio_drift"] = dr;
    res.metrics["calibration_length"] = cal.total_length;
    res.metrics["calibration_error"] = cal_err;
    res.metrics["degenerate_example_flagged"] = degenerate_flagged;
    res.metrics["failed_traces"] = failures;
    res.pass = cal_err <= limits::fibre_calibration && dr <= limits::fibre_drift && degenerate_flagged
               && failures < configs;
    return res;
}

ExperimentResult multiplicity(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    reject_p(cfg);
    allow_overrides(cfg, {"trials", "min_samples", "k", "c_n", "oracle_families", "oracle_samples"});
    CordobaConfig cc;
    cc.n = cfg.n;
    cc.k = static_cast<int>(cfg.count_or("k", 1));
    cc.deltas = deltas_or(cfg, dyadic(4, 8));
    cc.trials = static_cast<int>(cfg.count_or("trials", 2));
    cc.overlap.samples = cfg.samples.value_or(20000);
    cc.overlap.min_samples = cfg.count_or("min_samples", 2000);
    cc.seed = cfg.seed;
    cc.c_n = cfg.override_or("c_n", 0);
    auto const result = cordoba_check(cc);

    ExperimentResult res;
    res.table.columns = {"kind", "delta", "trial_seed", "count", "value", "std_error",
                         "unrefined", "bound", "constant", "max_count_ratio", "z"};
    for (auto const& r : result.rows)
        res.table.add({std::string("cordoba"), r.delta, r.trial_seed, static_cast<std::uint64_t>(r.count),
                       r.norm.value, r.norm.std_error, r.unrefined_norm.value, r.bound, r.constant,
                       r.max_count_ratio, NAN});
    for (auto const& [d, w] : result.worst_by_delta)
        res.metrics["constant_by_delta"].push_back({{"delta", d}, {"constant", w}});
    res.metrics["drift"] = result.drift;

    // small families: pairwise expansion against direct box sampling
    auto const families = cfg.count_or("oracle_families", 6);
    auto const direct_m = cfg.count_or("oracle_samples", 2000000);
    double worst_z = 0;
    for (std::uint64_t f = 0; f < families; ++f)
    {
        double const delta = 0.125;
        std::uint64_t const fs = derive_seed(cfg.seed, 0x6f72, f);
        auto const fam = generate_family(cfg.n, cc.k, delta, 8, fs, cc.c_n);
        auto const ov = overlap_l2(fam, cc.overlap, derive_seed(fs, 1));
        auto const dir = direct_overlap_square(fam, true, direct_m, derive_seed(fs, 2));
        double const se = std::hypot(ov.square.std_error, dir.std_error);
        double const z = se > 0 ? (ov.square.value - dir.value) / se : 0.0;
        worst_z = std::max(worst_z, std::abs(z));
        res.table.add({std::string("oracle"), delta, fs, std::uint64_t{8}, ov.square.value, ov.square.std_error,
                       dir.value, NAN, NAN, NAN, z});
    }
    res.metrics["oracle_max_sigmas"] = worst_z;
    res.pass = result.drift <= limits::multiplicity_drift && worst_z <= limits::multiplicity_sigmas;
    return res;
}

ExperimentResult explore_unrefined(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    reject_p(cfg);
    allow_overrides(cfg, {"pairs", "k", "c_n", "t_levels"});
    VolumeScanConfig vc;
    vc.n = cfg.n;
    vc.k = static_cast<int>(cfg.count_or("k", 1));
    vc.deltas = deltas_or(cfg, dyadic(5, 7));
    vc.ts = t_grid(static_cast<int>(cfg.count_or("t_levels", 7)) - 1);
    vc.pair_trials = static_cast<int>(cfg.count_or("pairs", 10));
    vc.samples = cfg.samples.value_or(20000);
    vc.seed = cfg.seed;
    vc.c_n = cfg.override_or("c_n", 0);
    vc.refined = true;
    auto const refined = volume_bound_scan(vc);
    vc.refined = false;
    auto const plain = volume_bound_scan(vc);

    ExperimentResult res;
    res.gating = false;
    res.table.columns = {"delta", "t", "pair", "refined_ratio", "unrefined_ratio", "excess"};
    double top = 0;
    nlohmann::json best;
    for (std::size_t i = 0; i < plain.rows.size(); ++i)
    {
        auto const& a = refined.rows[i];
        auto const& b = plain.rows[i];
        double const excess = a.ratio > 0 ? b.ratio / a.ratio : INFINITY;
        res.table.add({b.delta, b.t, static_cast<std::int64_t>(b.pair), a.ratio, b.ratio, excess});
        if (b.ratio > top)
        {
            top = b.ratio;
            best = {{"delta", b.delta}, {"t", b.t}, {"pair", b.pair}, {"unrefined_ratio", b.ratio}};
        }
    }
    res.metrics["exploratory"] = true;
    res.metrics["largest_unrefined"] = best;
    res.metrics["refined_drift"] = refined.drift;
    res.metrics["unrefined_drift"] = plain.drift;
    res.pass = true;
    return res;
}

}  // namespace homoeoid::tools::detail
