#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>

#include "detail.hpp"
#include "homoeoid/parallel.hpp"

namespace homoeoid::tools
{
namespace detail
{
std::vector<double> dyadic(int first, int last)
{
    std::vector<double> out;
    for (int e = first; e <= last; ++e)
        out.push_back(std::ldexp(1.0, -e));
    return out;
}

std::vector<double> deltas_or(RunConfig const& cfg, std::vector<double> fallback)
{
    auto const& ds = cfg.deltas.empty() ? fallback : cfg.deltas;
    for (double d : ds)
    {
        if (!(d > 0 && d <= 0.5))
            throw ConfigError("delta must lie in (0, 1/2], got " + format_number(d));
    }
    return ds;
}

void require_n(RunConfig const& cfg, int lo, int hi)
{
    if (cfg.n < lo || cfg.n > hi)
        throw ConfigError(cfg.experiment + " needs n in [" + std::to_string(lo) + ", "
                          + std::to_string(hi) + "]");
}

void allow_overrides(RunConfig const& cfg, std::initializer_list<char const*> keys)
{
    for (auto const& [key, value] : cfg.overrides)
    {
        bool const known = std::any_of(keys.begin(), keys.end(), [&](char const* k) { return key == k; });
        if (!known)
            throw ConfigError("override " + key + " is not used by " + cfg.experiment);
    }
}

void reject_p(RunConfig const& cfg)
{
    if (cfg.p)
        throw ConfigError(cfg.experiment + " takes no --p");
}

char const* verdict(bool ok)
{
    return ok ? "pass" : "fail";
}

double drift(std::vector<double> const& values)
{
    if (values.empty())
        return INFINITY;
    auto const [lo, hi] = std::minmax_element(values.begin(), values.end());
    return *lo > 0 ? *hi / *lo : INFINITY;
}
}  // namespace detail

namespace
{
using Runner = std::function<ExperimentResult(RunConfig const&)>;

std::vector<std::pair<std::string, Runner>> const& registry()
{
    static std::vector<std::pair<std::string, Runner>> const table{
        {"identities", detail::identities},
        {"nondeg", detail::nondeg},
        {"volume-bound", detail::volume_bound},
        {"bands", detail::bands},
        {"clusters", detail::clusters},
        {"fibre", detail::fibre},
        {"multiplicity", detail::multiplicity},
        {"l2-growth", detail::l2_growth},
        {"knapp-exponent", detail::knapp_exponent},
        {"divergence", detail::divergence},
        {"glpnorm", detail::glpnorm},
        {"explore-unrefined", detail::explore_unrefined},
        {"domination", detail::domination},
    };
    return table;
}
}  // namespace

std::vector<std::string> const& experiment_names()
{
    static std::vector<std::string> const names = [] {
        std::vector<std::string> out;
        for (auto const& [name, fn] : registry())
            out.push_back(name);
        return out;
    }();
    return names;
}

ExperimentResult run_experiment(RunConfig const& cfg)
{
    if (cfg.samples && *cfg.samples == 0)
        throw ConfigError("--samples must be positive");
    if (cfg.p && !(*cfg.p >= 1 && std::isfinite(*cfg.p)))
        throw ConfigError("--p must be a finite exponent >= 1");
    for (auto const& [name, fn] : registry())
    {
        if (name != cfg.experiment)
            continue;
        try
        {
            ExperimentResult res = fn(cfg);
            res.experiment = cfg.experiment;
            res.config = cfg;
            res.metrics["pass"] = res.pass;
            return res;
        }
        catch (std::invalid_argument const& e)
        {
            // core validation failures are configuration errors at this level
            throw ConfigError(e.what());
        }
    }
    throw ConfigError("unknown experiment: " + cfg.experiment);
}

nlohmann::json summary_json(ExperimentResult const& result)
{
    auto const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    nlohmann::json j;
    j["experiment"] = result.experiment;
    j["config"] = result.config.to_json();
    j["seed"] = result.config.seed;
    j["metrics"] = result.metrics;
    j["pass"] = result.pass;
    j["gating"] = result.gating;
    j["table"] = to_json(result.table);
    j["metadata"] = {{"tool_version", HOMOEOID_VERSION},
                     {"created", stamp},
                     {"workers", worker_count()}};
    return j;
}

void write_artifacts(ExperimentResult const& result, std::filesystem::path const& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw OutputError("cannot create " + dir.string() + ": " + ec.message());
    auto write = [&](std::filesystem::path const& path, std::string const& body) {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os << body;
        os.flush();
        if (!os)
            throw OutputError("cannot write " + path.string());
    };
    write(dir / "results.csv", to_csv(result.table));
    write(dir / "summary.json", summary_json(result).dump(2) + "\n");
}

}  // namespace homoeoid::tools
