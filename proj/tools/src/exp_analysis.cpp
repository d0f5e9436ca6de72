#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"
#include "homoeoid/field.hpp"
#include "homoeoid/knapp.hpp"
#include "homoeoid/maximal.hpp"
#include "homoeoid/parallel.hpp"
#include "homoeoid/rng.hpp"
#include "homoeoid/volume.hpp"
#include "homoeoid_tools/limits.hpp"

namespace homoeoid::tools::detail
{
namespace
{
// Midpoint rule in u = L^{-1/2}, independent of the dyadic-block quadrature.
double radial_oracle(int n, double p, double opening, int panels)
{
    double const a = n + 1 - (n - 1) * p;
    double const q = n * p / (n + 1.0);
    double const pref = 2 * opening * unit_sphere_area(n - 1) * std::numbers::ln2;
    double sum = 0;
    for (int i = 0; i < panels; ++i)
    {
        double const u = (i + 0.5) / panels;
        double const L = 1 / (u * u);
        sum += pref * std::exp2(-a * L) * std::pow(L, -q) * 2 / (u * u * u);
    }
    return sum / panels;
}
}  // namespace

ExperimentResult l2_growth(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    reject_p(cfg);
    allow_overrides(cfg, {"family", "x_samples", "bumps", "c_n", "half_width"});
    GrowthConfig gc;
    gc.n = cfg.n;
    gc.deltas = deltas_or(cfg, dyadic(4, 8));
    gc.family_size = static_cast<int>(cfg.count_or("family", 3));
    gc.x_region = Box::cube(cfg.n, cfg.override_or("half_width", 1.5));
    gc.x_samples = cfg.count_or("x_samples", 64);
    gc.samples = cfg.samples.value_or(2000);
    gc.seed = cfg.seed;
    gc.c_n = cfg.override_or("c_n", 0);
    int const bumps = static_cast<int>(cfg.count_or("bumps", 4));
    std::uint64_t const fs = derive_seed(cfg.seed, 0x62756d70);
    auto const scan = l2_growth_scan(
        [&](int id) { return random_bump_mixture(cfg.n, bumps, derive_seed(fs, static_cast<std::uint64_t>(id))).field(); },
        gc);

    ExperimentResult res;
    res.table.columns = {"delta", "field_id", "norm", "std_error"};
    for (auto const& r : scan.rows)
        res.table.add({r.delta, static_cast<std::int64_t>(r.field_id), r.norm.value, r.norm.std_error});
    res.metrics["slope"] = scan.fit.slope;
    res.metrics["intercept"] = scan.fit.intercept;
    res.metrics["max_abs_residual"] = scan.fit.max_abs_residual;
    res.pass = scan.fit.slope <= limits::growth_slope;
    return res;
}

ExperimentResult domination(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    reject_p(cfg);
    allow_overrides(cfg, {"x_count", "covering_samples", "bumps", "c_n", "half_width"});
    auto const deltas = deltas_or(cfg, {std::ldexp(1.0, -6)});
    auto const x_count = cfg.count_or("x_count", 1000);
    auto const covering = cfg.count_or("covering_samples", 1000000);
    double const c_n = cfg.override_or("c_n", default_cn(cfg.n));
    if (!(c_n > 0 && c_n <= max_cn(cfg.n)))
        throw ConfigError("c_n must lie in (0, (2n)^{-3/2}/2]");
    Box const region = Box::cube(cfg.n, cfg.override_or("half_width", 1.5));
    Field const f = random_bump_mixture(cfg.n, static_cast<int>(cfg.count_or("bumps", 4)),
                                        derive_seed(cfg.seed, 0x646f6d))
                        .field();
    std::vector<Vec> xs;
    RngCursor xc = CounterRng(cfg.seed, 0x78).cursor(0);
    for (std::uint64_t i = 0; i < x_count; ++i)
        xs.push_back(region.sample(xc));

    ExperimentResult res;
    res.table.columns = {"kind", "delta", "index", "plain", "refined_sum", "gap", "count"};
    std::uint64_t violations = 0, uncovered = 0;
    double max_gap = -INFINITY;
    for (std::size_t di = 0; di < deltas.size(); ++di)
    {
        double const delta = deltas[di];
        auto const net = RadiiNet::restricted(cfg.n, c_n, delta).points();
        auto const dom = domination_check(f, xs, delta, net, cfg.samples.value_or(600),
                                          derive_seed(cfg.seed, 0x6d, di), c_n);
        violations += dom.violations;
        max_gap = std::max(max_gap, dom.max_violation);
        for (std::size_t i = 0; i < xs.size(); ++i)
            res.table.add({std::string("domination"), delta, static_cast<std::uint64_t>(i), dom.plain[i],
                           dom.refined_sum[i], dom.plain[i] - dom.refined_sum[i], std::uint64_t{0}});

        AnnulusKernel const shell{AnyAnnulus{AnnulusSpec(Ellipsoid(Vec::Zero(cfg.n), Radii::constant(cfg.n, 1)), delta)}};
        CounterRng const rng(derive_seed(cfg.seed, 0x636f76, di), 0);
        auto const misses = parallel_map<std::uint64_t>(chunk_count(covering), [&](std::size_t c) {
            RngCursor cur = rng.cursor(c);
            std::uint64_t const end = std::min<std::uint64_t>(covering, (c + 1) * kChunkSize);
            std::uint64_t miss = 0;
            for (std::uint64_t i = c * kChunkSize; i < end; ++i)
            {
                Vec w;
                shell.sample(cur, &w);
                bool covered = false;
                for (int k = 1; k <= cfg.n && !covered; ++k)
                    covered = in_refinement(w, k, c_n);
                miss += covered ? 0 : 1;
            }
            return miss;
        });
        std::uint64_t miss = 0;
        for (auto v : misses)
            miss += v;
        uncovered += miss;
        res.table.add({std::string("covering"), delta, covering, NAN, NAN, NAN, miss});
    }
    res.metrics["violations"] = violations;
    res.metrics["max_gap"] = max_gap;
    res.metrics["uncovered_shell_samples"] = uncovered;
    res.pass = violations == 0 && uncovered == 0;
    return res;
}

ExperimentResult knapp_exponent(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    allow_overrides(cfg, {"x_samples", "rho_omega"});
    KnappConfig kc;
    kc.n = cfg.n;
    kc.p = cfg.p.value_or(2);
    kc.deltas = deltas_or(cfg, dyadic(4, 10));
    kc.x_samples = cfg.count_or("x_samples", 400);
    kc.slab_samples = cfg.samples.value_or(4000);
    kc.seed = cfg.seed;
    kc.rho_omega = cfg.override_or("rho_omega", 0.1);
    auto const result = homoeoid::knapp_exponent(kc);

    ExperimentResult res;
    res.table.columns = {"delta", "ratio", "std_error", "operator_norm", "slab_norm"};
    for (auto const& r : result.rows)
        res.table.add({r.delta, r.ratio, r.std_error, r.operator_norm, r.slab_norm});
    double const predicted = knapp_predicted_slope(cfg.n, kc.p);
    double const tol = kc.p == 2 ? limits::knapp_tolerance_p2 : limits::knapp_tolerance;
    res.metrics["p"] = kc.p;
    res.metrics["slope"] = result.fit.slope;
    res.metrics["predicted"] = predicted;
    res.metrics["tolerance"] = tol;
    res.metrics["max_abs_residual"] = result.fit.max_abs_residual;
    res.pass = std::abs(result.fit.slope - predicted) <= tol;
    return res;
}

ExperimentResult divergence(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    reject_p(cfg);
    allow_overrides(cfg, {"shells", "C", "oracle_samples", "oracle_shells"});
    if (!cfg.deltas.empty())
        throw ConfigError("divergence takes no delta grid");
    auto const shells = static_cast<int>(cfg.count_or("shells", 4096));
    if (shells < 16)
        throw ConfigError("divergence needs at least 16 shells");
    double const opening = cfg.override_or("C", 4);
    if (!(opening >= 1))
        throw ConfigError("C must be at least 1");
    auto const point = sample_tangency_set(cfg.n, 1, derive_seed(cfg.seed, 0x7074))[0];
    auto const sums = shell_partial_sums(point, shells, cfg.samples.value_or(2000), derive_seed(cfg.seed, 0x73), opening);

    auto const oracle_shells = static_cast<int>(cfg.count_or("oracle_shells", 5));
    auto const direct = shell_terms_by_surface_sampling(point, oracle_shells, cfg.count_or("oracle_samples", 2000000),
                                                        derive_seed(cfg.seed, 0x6f), opening);

    ExperimentResult res;
    res.table.columns = {"shell", "value", "std_error", "surface_fraction", "max_normal_offset", "hits",
                         "partial", "oracle_value", "oracle_std_error"};
    for (std::size_t i = 0; i < sums.terms.size(); ++i)
    {
        auto const& t = sums.terms[i];
        double ov = NAN, ose = NAN;
        if (i < direct.size())
        {
            ov = direct[i].value;
            ose = direct[i].std_error;
        }
        res.table.add({static_cast<std::int64_t>(t.shell), t.value, t.std_error, t.surface_fraction,
                       t.max_normal_offset, t.hits, sums.partial[i], ov, ose});
    }
    double worst_z = 0;
    for (std::size_t i = 1; i < direct.size(); ++i)
    {
        double const se = std::hypot(sums.terms[i].std_error, direct[i].std_error);
        if (se > 0)
            worst_z = std::max(worst_z, std::abs(sums.terms[i].value - direct[i].value) / se);
    }
    std::vector<std::pair<double, double>> pts;
    for (int L : {shells / 4, shells / 2, shells})
        pts.emplace_back(L, sums.partial[L - 1]);
    auto const fit = fit_power_law(pts);
    double const target = 1.0 / (cfg.n + 1);
    res.metrics["slope"] = fit.slope;
    res.metrics["target_slope"] = target;
    res.metrics["fit_points"] = {shells / 4, shells / 2, shells};
    res.metrics["partial_sum"] = sums.partial.back();
    res.metrics["oracle_max_sigmas"] = worst_z;
    res.metrics["tangency_point"] = std::vector<double>(point.x.data(), point.x.data() + point.x.size());
    res.pass = std::abs(fit.slope - target) <= limits::divergence_tolerance;
    return res;
}

ExperimentResult glpnorm(RunConfig const& cfg)
{
    require_n(cfg, 2, kMaxDim);
    allow_overrides(cfg, {"C", "panels", "oracle_panels", "cutoff_p"});
    if (!cfg.deltas.empty())
        throw ConfigError("glpnorm takes no delta grid");
    double const p = cfg.p.value_or(2);
    double const opening = cfg.override_or("C", 4);
    if (!(opening >= 1))
        throw ConfigError("C must be at least 1");
    double const cutoff_p = cfg.override_or("cutoff_p", 2.5);
    auto const main = g_lp_norm(cfg.n, p, opening, static_cast<int>(cfg.count_or("panels", 64)));
    auto const cut = g_lp_norm(cfg.n, cutoff_p, opening, static_cast<int>(cfg.count_or("panels", 64)));

    ExperimentResult res;
    res.table.columns = {"kind", "p", "cutoff_radius", "value"};
    res.table.add({std::string("norm"), p, NAN, main.norm});
    double oracle = NAN, rel = NAN;
    if (main.finite)
    {
        oracle = std::pow(radial_oracle(cfg.n, p, opening, static_cast<int>(cfg.count_or("oracle_panels", 1 << 20))), 1 / p);
        rel = std::abs(main.norm - oracle) / oracle;
        res.table.add({std::string("oracle"), p, NAN, oracle});
    }
    for (auto const& [radius, partial] : main.cutoff_study)
        res.table.add({std::string("cutoff"), p, radius, partial});
    for (auto const& [radius, partial] : cut.cutoff_study)
        res.table.add({std::string("cutoff"), cutoff_p, radius, partial});

    bool growing = cut.cutoff_study.size() >= 2;
    for (std::size_t i = 1; i < cut.cutoff_study.size(); ++i)
        growing = growing && cut.cutoff_study[i].second > cut.cutoff_study[i - 1].second;
    res.metrics["p"] = p;
    res.metrics["norm"] = main.finite ? nlohmann::json(main.norm) : nlohmann::json("inf");
    res.metrics["finite"] = main.finite;
    res.metrics["oracle"] = oracle;
    res.metrics["relative_error"] = rel;
    res.metrics["richardson_gap"] = main.richardson_gap;
    res.metrics["cutoff_p"] = cutoff_p;
    res.metrics["cutoff_divergent"] = !cut.finite && growing;
    bool const agrees = !main.finite || rel <= limits::glp_relative;
    res.pass = agrees && !cut.finite && growing;
    return res;
}

}  // namespace homoeoid::tools::detail
