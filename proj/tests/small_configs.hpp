#pragma once

#include <string>
#include <vector>

#include "homoeoid_tools/experiments.hpp"

namespace homoeoid::testing
{
//! Cheap configuration of every experiment, for reproducibility runs.
inline std::vector<tools::RunConfig> small_configs()
{
    using tools::RunConfig;
    auto make = [](std::string name, std::vector<double> deltas, std::uint64_t samples,
                   std::vector<std::pair<std::string, double>> overrides) {
        RunConfig cfg;
        cfg.experiment = std::move(name);
        cfg.seed = 3;
        cfg.deltas = std::move(deltas);
        cfg.samples = samples;
        for (auto const& [k, v] : overrides)
            cfg.overrides[k] = v;
        return cfg;
    };
    std::vector<RunConfig> out{
        make("identities", {}, 20, {{"exact_trials", 3}, {"tuples", 100}, {"r_samples", 2}}),
        make("nondeg", {}, 20, {{"seeds", 2}, {"max_configs", 200}}),
        make("volume-bound", {1.0 / 32, 1.0 / 64, 1.0 / 128}, 70000, {{"pairs", 2}, {"t_levels", 2}}),
        make("bands", {1.0 / 64, 1.0 / 128}, 70000, {{"radii", 1}}),
        make("clusters", {}, 70000, {{"configs", 3}}),
        make("fibre", {}, 1, {{"configs", 3}, {"levels", 2}}),
        make("multiplicity", {1.0 / 4, 1.0 / 8, 1.0 / 16}, 2000,
             {{"trials", 1}, {"min_samples", 500}, {"oracle_families", 1}, {"oracle_samples", 70000}}),
        make("l2-growth", {1.0 / 8, 1.0 / 16, 1.0 / 32}, 200, {{"family", 1}, {"x_samples", 4}}),
        make("knapp-exponent", {1.0 / 8, 1.0 / 16, 1.0 / 32}, 300, {{"x_samples", 8}}),
        make("divergence", {}, 200, {{"shells", 64}, {"oracle_shells", 2}, {"oracle_samples", 70000}}),
        make("glpnorm", {}, 1, {{"oracle_panels", 4096}}),
        make("explore-unrefined", {1.0 / 32, 1.0 / 64, 1.0 / 128}, 2000, {{"pairs", 1}, {"t_levels", 2}}),
        make("domination", {1.0 / 16}, 300, {{"x_count", 6}, {"covering_samples", 70000}}),
    };
    return out;
}

}  // namespace homoeoid::testing
