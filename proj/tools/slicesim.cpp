// slicesim: run the admission / adaptation experiments and write CSVs.
//
//   slicesim run --config cfg.txt --experiment revenue --agent dqn --seed 3 --out out/
//   slicesim keys            # list every config key with its default

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "slicesim/core/errors.hpp"
#include "slicesim/experiments/config.hpp"
#include "slicesim/experiments/experiments.hpp"
#include "slicesim/experiments/report.hpp"

namespace ex = slicesim::experiments;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

int run(const std::string& config_path, const std::string& experiment, const std::string& agent,
        std::optional<std::uint64_t> seed, const std::string& out_dir,
        const std::vector<std::string>& overrides) {
    ex::ExperimentConfig config;
    if (!config_path.empty()) config = ex::load_config(config_path);
    for (const auto& o : overrides) ex::apply_override(config, o);
    if (seed) config.seeds = {*seed};
    if (agent != "all") {
        config.agents = {agent};
        if (agent != "oracle") {
            config.delay_agents = {agent};
            config.satisfaction_agent = agent;
        } else if (experiment == "satisfaction" || experiment == "delay") {
            throw slicesim::ConfigError("the oracle agent only applies to revenue and acceptance");
        }
    }
    config.validate();

    const auto report = ex::run_experiment(config, experiment);
    const auto files = ex::export_report(report, config, {experiment, agent}, out_dir);
    for (const auto& f : files) std::cout << out_dir << "/" << f << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network slicing admission and adaptation simulator"};
    app.require_subcommand(1);

    std::string config_path, experiment = "all", agent = "all", out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;

    auto* run_cmd = app.add_subcommand("run", "run an experiment");
    run_cmd->add_option("--config", config_path, "key = value config file");
    run_cmd->add_option("--experiment", experiment, "experiment to run")
        ->check(CLI::IsMember({"revenue", "acceptance", "satisfaction", "delay", "all"}));
    run_cmd->add_option("--agent", agent, "restrict to one agent")
        ->check(CLI::IsMember({"greedy", "qlearn", "dqn", "ddqn", "oracle", "all"}));
    run_cmd->add_option("--seed", seed, "evaluate this seed only");
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--set", overrides, "override a config key (key=value)");

    auto* keys_cmd = app.add_subcommand("keys", "list config keys and defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*keys_cmd) {
            const ex::ExperimentConfig defaults;
            for (const auto& k : ex::config_keys())
                std::cout << k.name << " = " << ex::get_config_value(defaults, k.name) << "  # "
                          << k.help << "\n";
            return 0;
        }
        return run(config_path, experiment, agent, seed, out_dir, overrides);
    } catch (const slicesim::IoError& e) {
        std::cerr << "slicesim: " << e.what() << "\n";
        return kExitIo;
    } catch (const slicesim::ConfigError& e) {
        std::cerr << "slicesim: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const slicesim::Error& e) {
        std::cerr << "slicesim: " << e.what() << "\n";
        return kExitConfig;
    }
}
