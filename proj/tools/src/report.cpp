#include <algorithm>
#include <fstream>
#include <tuple>

#include "homoeoid_tools/experiments.hpp"

namespace homoeoid::tools
{
namespace
{
struct Entry
{
    std::string experiment;
    std::uint64_t seed;
    std::string path;
    nlohmann::json summary;
};

void flatten(std::string const& prefix, nlohmann::json const& value, Entry const& e, Table& table)
{
    if (value.is_object())
    {
        for (auto const& [key, child] : value.items())
            flatten(prefix.empty() ? key : prefix + "." + key, child, e, table);
    }
    else if (value.is_array())
    {
        for (std::size_t i = 0; i < value.size(); ++i)
            flatten(prefix + "[" + std::to_string(i) + "]", value[i], e, table);
    }
    else if (value.is_number())
    {
        table.add({e.experiment, e.seed, prefix, value.get<double>()});
    }
    else if (value.is_boolean())
    {
        table.add({e.experiment, e.seed, prefix, value.get<bool>() ? 1.0 : 0.0});
    }
}
}  // namespace

Report emit_report(std::filesystem::path const& dir)
{
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw ConfigError("report directory does not exist: " + dir.string());

    Report report;
    std::vector<Entry> entries;
    for (auto const& item : std::filesystem::recursive_directory_iterator(dir, ec))
    {
        if (!item.is_regular_file() || item.path().filename() != "summary.json")
            continue;
        std::ifstream is(item.path());
        auto j = nlohmann::json::parse(is, nullptr, false);
        if (j.is_discarded() || !j.is_object() || !j.contains("experiment") || !j["experiment"].is_string()
            || !j.contains("seed") || !j["seed"].is_number_unsigned() || !j.contains("metrics"))
        {
            ++report.skipped;
            continue;
        }
        auto const rel = std::filesystem::relative(item.path(), dir).generic_string();
        entries.push_back({j["experiment"].get<std::string>(), j["seed"].get<std::uint64_t>(), rel, std::move(j)});
    }
    if (entries.empty())
        throw ConfigError("no usable summary.json under " + dir.string());
    std::sort(entries.begin(), entries.end(), [](Entry const& a, Entry const& b) {
        return std::tie(a.experiment, a.seed, a.path) < std::tie(b.experiment, b.seed, b.path);
    });

    report.table.columns = {"experiment", "seed", "metric", "value"};
    nlohmann::json runs = nlohmann::json::array();
    for (auto const& e : entries)
    {
        flatten("", e.summary["metrics"], e, report.table);
        nlohmann::json run;
        run["path"] = e.path;
        run["experiment"] = e.experiment;
        run["seed"] = e.seed;
        run["config"] = e.summary.value("config", nlohmann::json::object());
        run["metrics"] = e.summary["metrics"];
        run["pass"] = e.summary.value("pass", false);
        run["gating"] = e.summary.value("gating", true);
        if (e.summary.contains("metadata"))
            run["tool_version"] = e.summary["metadata"].value("tool_version", "");
        runs.push_back(std::move(run));
    }
    report.merged["tool_version"] = HOMOEOID_VERSION;
    report.merged["runs"] = std::move(runs);
    report.merged["skipped"] = report.skipped;
    return report;
}

}  // namespace homoeoid::tools
