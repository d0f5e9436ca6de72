#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "homoeoid/parallel.hpp"
#include "homoeoid_tools/experiments.hpp"
#include "small_configs.hpp"

namespace homoeoid::tools
{
namespace
{
namespace fs = std::filesystem;

int run_cli(std::string const& args)
{
    std::string const cmd = std::string(HOMOEOID_CLI) + " " + args + " > /dev/null 2>&1";
    int const status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

fs::path scratch(std::string const& name)
{
    fs::path const dir = fs::temp_directory_path() / ("homoeoid_cli_" + name);
    fs::remove_all(dir);
    return dir;
}

RunConfig glp(std::uint64_t seed)
{
    RunConfig cfg;
    cfg.experiment = "glpnorm";
    cfg.seed = seed;
    cfg.overrides["oracle_panels"] = 4096;
    return cfg;
}

TEST(Cli, ExitCodes)
{
    fs::path const out = scratch("exit");
    EXPECT_EQ(run_cli("--experiment glpnorm --override oracle_panels=4096 --out " + out.string()), 0);
    EXPECT_TRUE(fs::exists(out / "results.csv"));
    EXPECT_TRUE(fs::exists(out / "summary.json"));
    EXPECT_EQ(run_cli("--experiment volume-bound --delta-grid 0.7 --out " + out.string()), 2);
    EXPECT_EQ(run_cli("--experiment no-such-thing --out " + out.string()), 2);
    EXPECT_EQ(run_cli("--experiment glpnorm --override bogus=1 --out " + out.string()), 2);
    EXPECT_EQ(run_cli("--experiment glpnorm --override oracle_panels --out " + out.string()), 2);
    EXPECT_EQ(run_cli("--experiment glpnorm --out /proc/homoeoid/forbidden"), 2);
    EXPECT_EQ(run_cli("--experiment glpnorm --samples 0 --out " + out.string()), 2);
    // the cutoff exponent inside the finite range turns the study into a failure
    EXPECT_EQ(run_cli("--experiment glpnorm --override cutoff_p=1.5 --override oracle_panels=4096 --out "
                      + out.string()),
              1);
}

TEST(Cli, SummarySchema)
{
    auto const res = run_experiment(glp(4));
    auto const j = summary_json(res);
    for (char const* key : {"experiment", "config", "seed", "metrics", "pass", "metadata"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j["experiment"], "glpnorm");
    EXPECT_EQ(j["seed"], 4);
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["metrics"]["pass"], j["pass"]);
}

TEST(Cli, CsvIsLocaleFree)
{
    Table t;
    t.columns = {"a", "b", "c"};
    t.add({0.5, std::string("x,y"), std::int64_t{-3}});
    t.add({NAN, std::string("plain"), std::uint64_t{7}});
    EXPECT_EQ(to_csv(t), "a,b,c\n0.5,\"x,y\",-3\nnan,plain,7\n");
    EXPECT_EQ(format_number(1e-300), "1e-300");
}

TEST(Report, OrdersBySeedAndSkipsCorrupted)
{
    fs::path const dir = scratch("report");
    write_artifacts(run_experiment(glp(9)), dir / "b");
    write_artifacts(run_experiment(glp(2)), dir / "a");
    auto const single = emit_report(dir / "a");
    ASSERT_EQ(single.merged["runs"].size(), 1u);
    EXPECT_EQ(single.skipped, 0u);

    fs::create_directories(dir / "c");
    std::ofstream(dir / "c" / "summary.json") << "{ not json";
    auto const rep = emit_report(dir);
    ASSERT_EQ(rep.merged["runs"].size(), 2u);
    EXPECT_EQ(rep.merged["runs"][0]["seed"], 2);
    EXPECT_EQ(rep.merged["runs"][1]["seed"], 9);
    EXPECT_EQ(rep.skipped, 1u);
    EXPECT_EQ(rep.merged["skipped"], 1);
    EXPECT_TRUE(rep.merged.contains("tool_version"));
    EXPECT_TRUE(rep.merged["runs"][0].contains("config"));
    EXPECT_EQ(rep.table.columns.front(), "experiment");

    EXPECT_EQ(run_cli("--report " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "report.json"));
    EXPECT_TRUE(fs::exists(dir / "report.csv"));
}

TEST(Report, EmptyDirectoryIsAnError)
{
    fs::path const dir = scratch("empty");
    fs::create_directories(dir);
    EXPECT_THROW(emit_report(dir), ConfigError);
    EXPECT_EQ(run_cli("--report " + dir.string()), 2);
}

TEST(Reproducibility, SameConfigSameCsv)
{
    auto const cfg = testing::small_configs()[5];  // fibre
    EXPECT_EQ(to_csv(run_experiment(cfg).table), to_csv(run_experiment(cfg).table));
}

TEST(Reproducibility, WorkerCountDoesNotChangeCsv)
{
    for (auto const& cfg : testing::small_configs())
    {
        if (cfg.experiment != "volume-bound" && cfg.experiment != "domination" && cfg.experiment != "divergence")
            continue;
        set_worker_count(1);
        std::string const one = to_csv(run_experiment(cfg).table);
        set_worker_count(3);
        std::string const three = to_csv(run_experiment(cfg).table);
        set_worker_count(0);
        EXPECT_EQ(one, three) << cfg.experiment;
    }
}

}  // namespace
}  // namespace homoeoid::tools
