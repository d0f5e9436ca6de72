#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "homoeoid_tools/experiments.hpp"

namespace
{
using namespace homoeoid::tools;

std::vector<double> parse_grid(std::string const& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        double v = 0;
        auto const* end = item.data() + item.size();
        auto [ptr, ec] = std::from_chars(item.data(), end, v);
        if (ec != std::errc{} || ptr != end)
            throw ConfigError("bad --delta-grid entry: " + item);
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("--delta-grid is empty");
    return out;
}

void write_report(Report const& report, std::filesystem::path const& out)
{
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    std::ofstream js(out / "report.json", std::ios::binary | std::ios::trunc);
    js << report.merged.dump(2) << "\n";
    std::ofstream csv(out / "report.csv", std::ios::binary | std::ios::trunc);
    csv << to_csv(report.table);
    if (!js || !csv)
        throw OutputError("cannot write report into " + out.string());
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Numerical experiments on ellipsoidal maximal averages"};
    app.set_version_flag("--version", HOMOEOID_VERSION);

    RunConfig cfg;
    std::string grid;
    std::uint64_t samples = 0;
    double p = 0;
    std::vector<std::string> overrides;
    std::string report_dir;
    std::string out = "artifacts";
    bool list = false;

    app.add_option("--experiment", cfg.experiment, "experiment name");
    app.add_option("--n", cfg.n, "dimension");
    app.add_option("--seed", cfg.seed, "base seed");
    auto* grid_opt = app.add_option("--delta-grid", grid, "comma-separated delta values");
    auto* samples_opt = app.add_option("--samples", samples, "main sample budget");
    auto* p_opt = app.add_option("--p", p, "Lebesgue exponent");
    app.add_option("--out", out, "artifact directory");
    app.add_option("--override", overrides, "key=value constant override (repeatable)");
    app.add_option("--report", report_dir, "merge summaries under DIR into --out");
    app.add_flag("--list", list, "print experiment names");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (list)
        {
            for (auto const& name : experiment_names())
                std::cout << name << "\n";
            return 0;
        }
        if (!report_dir.empty())
        {
            auto const report = emit_report(report_dir);
            std::filesystem::path const dest = app.count("--out") ? out : report_dir;
            write_report(report, dest);
            if (report.skipped)
                std::cerr << "warning: skipped " << report.skipped << " unreadable summaries\n";
            return 0;
        }
        if (cfg.experiment.empty())
            throw ConfigError("--experiment is required");
        if (*grid_opt)
            cfg.deltas = parse_grid(grid);
        if (*samples_opt)
            cfg.samples = samples;
        if (*p_opt)
            cfg.p = p;
        for (auto const& text : overrides)
            add_override(cfg, text);
        cfg.out = out;

        auto const result = run_experiment(cfg);
        write_artifacts(result, cfg.out);
        std::cout << result.experiment << ": " << (result.pass ? "pass" : "fail")
                  << (result.gating ? "" : " (exploratory)") << "\n"
                  << result.metrics.dump() << "\n";
        return exit_code(result);
    }
    catch (ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (OutputError const& e)
    {
        std::cerr << "output error: " << e.what() << "\n";
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
