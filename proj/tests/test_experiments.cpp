#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "slicesim/core/errors.hpp"
#include "slicesim/experiments/config.hpp"
#include "slicesim/experiments/experiments.hpp"
#include "slicesim/experiments/report.hpp"

using namespace slicesim;
using namespace slicesim::experiments;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("slicesim_test_" + name);
    fs::remove_all(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SLICESIM_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST(Config, SerializeParseRoundTrip) {
    ExperimentConfig c;
    c.reward_b = {1.5, 6};
    c.agents = {"dqn"};
    c.grm.hidden = {16, 8};
    c.grm.gamma = 0.9;
    c.deltas = {5, -5};
    c.dc_capacity = 420;
    std::istringstream in(serialize_config(c));
    auto back = parse_config(in);
    EXPECT_EQ(back, c);
    EXPECT_EQ(config_hash(back), config_hash(c));
    EXPECT_NE(config_hash(c), config_hash(ExperimentConfig{}));
    // Every listed key reads back.
    for (const auto& k : config_keys()) EXPECT_NO_THROW(get_config_value(c, k.name)) << k.name;
}

TEST(Config, CommentsAndOverrides) {
    std::istringstream in("# header\n\ninfrastructure.dc_capacity = 600  # wider DCs\ngrm.reward_b = 2,4\n");
    auto c = parse_config(in);
    EXPECT_EQ(c.dc_capacity, 600);
    EXPECT_EQ(c.reward_b, (std::vector<double>{2, 4}));
    apply_override(c, "grm.reward_b=3");
    EXPECT_EQ(c.reward_b, (std::vector<double>{3}));
    EXPECT_EQ(c.scenario(5.0).tenants[1].immediate_reward, 5.0);
}

TEST(Config, RejectsBadInput) {
    ExperimentConfig c;
    EXPECT_THROW(set_config_value(c, "no.such.key", "1"), ConfigError);
    EXPECT_THROW(set_config_value(c, "infrastructure.dc_capacity", "lots"), ConfigError);
    EXPECT_THROW(apply_override(c, "missing_equals"), ConfigError);
    std::istringstream in("infrastructure.dc_capacity 300\n");
    EXPECT_THROW(parse_config(in), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/dir/cfg.txt"), IoError);
    c.seeds.clear();
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(run_experiment(ExperimentConfig{}, "bogus"), ConfigError);
}

TEST(Statistics, Helpers) {
    EXPECT_DOUBLE_EQ(mean({1, 2, 3, 4}), 2.5);
    EXPECT_NEAR(sample_std({2, 4, 4, 4, 5, 5, 7, 9}), 2.138089935, 1e-9);
    EXPECT_EQ(sample_std({3}), 0.0);
    EXPECT_DOUBLE_EQ(quantile({5, 1, 3}, 0.5), 3.0);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile({1, 2, 3, 4}, 1.0), 4.0);
}

TEST(Report, ExportWritesCsvsAndManifest) {
    ExperimentConfig c;
    c.agents = {"greedy", "oracle"};
    c.reward_b = {1, 6};
    c.seeds = {1, 2};
    c.horizon_hours = 4;
    auto report = run_experiment(c, "revenue");
    ASSERT_EQ(report.revenue.size(), 8u);
    ASSERT_EQ(report.oracle.size(), 2u);
    const auto dir = scratch_dir("export");
    auto files = export_report(report, c, {"revenue", "all"}, dir.string());
    for (const auto& f : files) EXPECT_TRUE(fs::exists(dir / f)) << f;
    auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    EXPECT_EQ(manifest["experiment"], "revenue");
    EXPECT_EQ(manifest["traffic_checksums"].size(), report.traffic.size());
    const auto head = slurp(dir / "revenue.csv");
    EXPECT_EQ(head.substr(0, head.find('\n')), "agent,reward_b,seed,revenue_total,revenue_per_hour");
    fs::remove_all(dir);
}

TEST(Report, UnwritableDirectoryIsIoError) {
    const auto blocker = scratch_dir("blocker");
    std::ofstream(blocker) << "file";
    EXPECT_THROW(export_report(MetricsReport{}, ExperimentConfig{}, {"revenue"},
                               (blocker / "sub").string()),
                 IoError);
    fs::remove(blocker);
}

TEST(Cli, ExitCodes) {
    const auto out = scratch_dir("cli");
    EXPECT_EQ(run_cli("run --experiment revenue --agent greedy --seed 3 --set grm.reward_b=2 "
                      "--set grm.horizon_hours=2 --out " + out.string()),
              0);
    EXPECT_TRUE(fs::exists(out / "manifest.json"));
    EXPECT_TRUE(fs::exists(out / "revenue.csv"));
    // Config errors.
    EXPECT_EQ(run_cli("run --experiment revenue --set no.such.key=1 --out " + out.string()), 2);
    EXPECT_EQ(run_cli("run --experiment nonsense --out " + out.string()), 2);
    EXPECT_EQ(run_cli("run --experiment delay --agent oracle --out " + out.string()), 2);
    // IO errors.
    EXPECT_EQ(run_cli("run --config /nonexistent/cfg.txt --out " + out.string()), 3);
    const auto blocker = scratch_dir("cli_blocker");
    std::ofstream(blocker) << "file";
    EXPECT_EQ(run_cli("run --experiment revenue --agent greedy --seed 1 --set grm.reward_b=1 "
                      "--set grm.horizon_hours=1 --out " + (blocker / "x").string()),
              3);
    fs::remove(blocker);
    fs::remove_all(out);
}
