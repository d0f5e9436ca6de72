#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "homoeoid/parallel.hpp"
#include "homoeoid_tools/experiments.hpp"
#include "homoeoid_tools/limits.hpp"
#include "small_configs.hpp"

using homoeoid::tools::ExperimentResult;
using homoeoid::tools::RunConfig;
using homoeoid::tools::run_experiment;

namespace
{
struct Outcome
{
    bool pass;
    std::string detail;
};

RunConfig defaults(std::string name, std::optional<double> p = {})
{
    RunConfig cfg;
    cfg.experiment = std::move(name);
    cfg.p = p;
    return cfg;
}

std::string num(nlohmann::json const& v)
{
    if (v.is_number())
        return homoeoid::tools::format_number(v.get<double>());
    return v.dump();
}

Outcome metric_check(ExperimentResult const& r, std::vector<char const*> keys)
{
    std::string detail;
    for (auto const* k : keys)
        detail += std::string(detail.empty() ? "" : " ") + k + "=" + num(r.metrics.value(k, nlohmann::json()));
    return {r.pass, detail};
}

}  // namespace

int main()
{
    namespace limits = homoeoid::tools::limits;
    ExperimentResult const identities = run_experiment(defaults("identities"));

    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"identity suite",
         [&] {
             bool const ok = identities.metrics["identities_pass"].get<bool>();
             return Outcome{ok, "float_max=" + num(identities.metrics["identity_float_max"]) + " exact_max="
                                    + num(identities.metrics["identity_exact_max"]) + " limit="
                                    + num(limits::identity_residual)};
         }},
        {"Cauchy-Binet dual path",
         [&] {
             return Outcome{identities.metrics["cauchy_binet_pass"].get<bool>(),
                            "residual=" + num(identities.metrics["cauchy_binet_residual"])};
         }},
        {"tangency-map Jacobian",
         [&] {
             return Outcome{identities.metrics["jacobian_pass"].get<bool>(),
                            "homogeneity=" + num(identities.metrics["det_homogeneity_max"]) + " det_n2="
                                + num(identities.metrics["det_n2_at_one"]) + " min_three_halves="
                                + num(identities.metrics["det_three_halves_min"])};
         }},
        {"volume bound",
         [&] { return metric_check(run_experiment(defaults("volume-bound")), {"drift", "uniform_constant"}); }},
        {"band decomposition",
         [&] {
             return metric_check(run_experiment(defaults("bands")), {"band_constant", "partition_max_sigmas"});
         }},
        {"cluster structure",
         [&] {
             return metric_check(run_experiment(defaults("clusters")),
                                 {"max_cluster_count", "constant_at_rho", "constant_at_half_rho", "constant_drift"});
         }},
        {"fibre length",
         [&] {
             return metric_check(run_experiment(defaults("fibre")),
                                 {"ratio_drift", "calibration_error", "degenerate_example_flagged"});
         }},
        {"multiplicity",
         [&] { return metric_check(run_experiment(defaults("multiplicity")), {"drift", "oracle_max_sigmas"}); }},
        {"Knapp exponents",
         [&] {
             bool ok = true;
             std::string detail;
             for (double p : {1.5, 2.0, 3.0})
             {
                 auto const r = run_experiment(defaults("knapp-exponent", p));
                 ok = ok && r.pass;
                 detail += "p=" + num(p) + ":slope=" + num(r.metrics["slope"]) + " ";
             }
             return Outcome{ok, detail};
         }},
        {"divergence series",
         [&] {
             auto const div = run_experiment(defaults("divergence"));
             auto const glp = run_experiment(defaults("glpnorm"));
             return Outcome{div.pass && glp.pass,
                            "slope=" + num(div.metrics["slope"]) + " target=" + num(div.metrics["target_slope"])
                                + " g_norm=" + num(glp.metrics["norm"]) + " rel_err="
                                + num(glp.metrics["relative_error"]) + " p2.5_divergent="
                                + num(glp.metrics["cutoff_divergent"])};
         }},
        {"domination and covering",
         [&] {
             return metric_check(run_experiment(defaults("domination")),
                                 {"violations", "uncovered_shell_samples"});
         }},
        {"L2 growth", [&] { return metric_check(run_experiment(defaults("l2-growth")), {"slope"}); }},
        {"reproducibility across workers",
         [&] {
             std::string bad;
             for (auto const& cfg : homoeoid::testing::small_configs())
             {
                 homoeoid::set_worker_count(1);
                 auto const one = homoeoid::tools::to_csv(run_experiment(cfg).table);
                 homoeoid::set_worker_count(3);
                 auto const three = homoeoid::tools::to_csv(run_experiment(cfg).table);
                 homoeoid::set_worker_count(0);
                 if (one != three)
                     bad += cfg.experiment + " ";
             }
             return Outcome{bad.empty(), bad.empty() ? "all experiments byte-identical" : "differs: " + bad};
         }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i)
    {
        auto const start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = criteria[i].second();
        }
        catch (std::exception const& e)
        {
            out = {false, std::string("error: ") + e.what()};
        }
        double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %2zu %-32s %s  %s  (%.1fs)\n", i + 1, criteria[i].first.c_str(),
                    out.pass ? "PASS" : "FAIL", out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += out.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
