#include <charconv>
#include <cmath>

#include "homoeoid_tools/experiments.hpp"

namespace homoeoid::tools
{
double RunConfig::override_or(std::string const& key, double fallback) const
{
    auto const it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
}

std::uint64_t RunConfig::count_or(std::string const& key, std::uint64_t fallback) const
{
    auto const it = overrides.find(key);
    if (it == overrides.end())
        return fallback;
    double const v = it->second;
    if (!(v >= 1) || v != std::floor(v) || v > 1e12)
        throw ConfigError("override " + key + " must be a positive integer");
    return static_cast<std::uint64_t>(v);
}

nlohmann::json RunConfig::to_json() const
{
    nlohmann::json j;
    j["experiment"] = experiment;
    j["n"] = n;
    j["seed"] = seed;
    j["delta_grid"] = deltas;
    j["samples"] = samples ? nlohmann::json(*samples) : nlohmann::json(nullptr);
    j["p"] = p ? nlohmann::json(*p) : nlohmann::json(nullptr);
    j["overrides"] = overrides;
    return j;
}

void add_override(RunConfig& cfg, std::string const& text)
{
    auto const eq = text.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key=value: " + text);
    std::string const key = text.substr(0, eq);
    std::string const value = text.substr(eq + 1);
    double v = 0;
    auto const res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size() || !std::isfinite(v))
        throw ConfigError("override value is not a number: " + text);
    cfg.overrides[key] = v;
}

int exit_code(ExperimentResult const& result)
{
    return result.pass || !result.gating ? 0 : 1;
}

}  // namespace homoeoid::tools
