#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace homoeoid::tools
{
//! Bad flags, overrides or experiment names; maps to exit code 2.
struct ConfigError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

//! Artifact directory could not be written; also exit code 2.
struct OutputError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RunConfig
{
    std::string experiment;
    int n{3};
    std::uint64_t seed{1};
    std::vector<double> deltas;  //!< empty selects the experiment default
    std::optional<std::uint64_t> samples;
    std::optional<double> p;
    std::map<std::string, double> overrides;
    std::filesystem::path out;

    double override_or(std::string const& key, double fallback) const;
    std::uint64_t count_or(std::string const& key, std::uint64_t fallback) const;
    nlohmann::json to_json() const;
};

//! Parses "key=value" into the override map; throws ConfigError.
void add_override(RunConfig& cfg, std::string const& text);

//---------------------------------------------------------------------------//
using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

//! Locale-independent shortest round-trip formatting.
std::string format_number(double v);
std::string to_csv(Table const& table);
nlohmann::json to_json(Table const& table);

//---------------------------------------------------------------------------//
struct ExperimentResult
{
    std::string experiment;
    RunConfig config;
    Table table;
    nlohmann::json metrics = nlohmann::json::object();
    bool pass{false};
    bool gating{true};  //!< false for exploratory runs
};

std::vector<std::string> const& experiment_names();

//! Throws ConfigError for unknown experiments or invalid settings.
ExperimentResult run_experiment(RunConfig const& cfg);

//! Writes results.csv and summary.json into cfg.out; throws OutputError.
void write_artifacts(ExperimentResult const& result, std::filesystem::path const& dir);

nlohmann::json summary_json(ExperimentResult const& result);

struct Report
{
    nlohmann::json merged;
    Table table;  //!< one row per numeric metric
    std::size_t skipped{0};
};

//! Merges every summary.json under dir; throws ConfigError if none is usable.
Report emit_report(std::filesystem::path const& dir);

//! 0 pass, 1 threshold violated.
int exit_code(ExperimentResult const& result);

}  // namespace homoeoid::tools
