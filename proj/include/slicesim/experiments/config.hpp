#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "slicesim/agents/agent.hpp"
#include "slicesim/grm/framework.hpp"
#include "slicesim/lrm/adaptation.hpp"

namespace slicesim::experiments {

struct SliceTypeParams {
    std::size_t num_vnfs = 4;
    std::size_t total_flows = 180;
    double flow_arrival_interval = 2.0;
    double flow_service_time = 200.0;
    Units units_per_request_per_dc = 60;
    bool operator==(const SliceTypeParams&) const = default;
};

struct TenantParams {
    double request_rate = 10.0;
    double completion_rate = 6.0;
    double reward = 2.0;
    std::size_t slice_type = 1;
    bool operator==(const TenantParams&) const = default;
};

struct LearnerParams {
    double gamma = 0.95;
    std::vector<std::size_t> hidden{64, 64};
    double learning_rate = 1e-3;
    double learning_rate_final = 1e-3; // linear decay over training
    double momentum = 0.9;
    std::size_t replay_capacity = 10'000;
    std::size_t batch_size = 32;
    std::size_t target_sync = 200;
    double reward_scale = 0.0; // 0: divide rewards by the largest immediate reward
    double reward_centering = 0.0; // running-average step, 0 = off
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_fraction = 0.5;
    double alpha = 0.1;
    double alpha_decay_visits = 0.0;
    double alpha_exponent = 1.0;
    bool operator==(const LearnerParams&) const = default;
};

// Admission learner defaults: the table needs a decaying step to settle.
inline LearnerParams admission_learner_defaults() {
    LearnerParams p;
    p.alpha_decay_visits = 1000.0;
    return p;
}

/// Every tunable of a run. Each field is reachable through a dotted key; see
/// config_keys().
struct ExperimentConfig {
    // network
    std::size_t num_nodes = 10;
    std::size_t attachment = 2;
    std::size_t num_dcs = 5;
    std::size_t num_inps = 2;
    Units dc_capacity = 300;
    std::string placement = "spread_then_reuse";

    SliceTypeParams type1{4, 180, 2.0, 200.0, 60};
    SliceTypeParams type2{4, 60, 5.0, 300.0, 60};
    TenantParams tenant_a{10.0, 6.0, 2.0, 1};
    TenantParams tenant_b{12.0, 6.0, 1.0, 2};

    std::string chain_units = "per_vnf";
    double satisfaction_norm = 0.0; // 0: the slice type's flow count
    double measurement_period = 1.0;

    // admission study
    double horizon_hours = 48.0;
    std::vector<double> reward_b{1, 2, 3, 4, 5, 6};
    std::vector<std::string> agents{"greedy", "qlearn", "dqn", "oracle"};
    std::vector<std::uint64_t> seeds{1,  2,  3,  4,  5,  6,  7,  8,  9,  10,
                                     11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
    std::uint64_t train_seed = 7919;
    std::size_t train_episodes = 500;         // network learners
    std::size_t tabular_train_episodes = 2000; // qlearn is cheap but slow to converge
    bool satisfaction_feedback = false;
    bool onehot_counts = false;
    LearnerParams grm = admission_learner_defaults();

    // slice adaptation
    double revenue_rate_type1 = 1.0;
    double revenue_rate_type2 = 1.0;
    double unit_cost = 0.01;
    double op_cost = 0.1;
    std::vector<Units> deltas{10, 20, -10};
    std::size_t satisfaction_bins = 10;
    std::size_t lrm_train_episodes = 20;
    LearnerParams lrm;

    // satisfaction study
    double satisfaction_horizon_s = 2000.0;
    std::string satisfaction_agent = "dqn";
    std::size_t satisfaction_grm_episodes = 100;

    // delay study
    std::vector<std::size_t> delay_num_vnfs{4, 8, 12, 16};
    std::vector<std::string> delay_agents{"greedy", "qlearn", "dqn", "ddqn"};
    double delay_horizon_s = 600.0;

    // output
    bool log_wallclock = false;
    bool detail_logs = true;

    bool operator==(const ExperimentConfig&) const = default;

    /// Throws ConfigError on values no run can use.
    void validate() const;

    /// Scenario for the admission/adaptation framework with tenant B's
    /// reward replaced by `reward_b` when given.
    grm::ScenarioConfig scenario(double reward_b = -1.0) const;
    lrm::AdaptActionSet action_set() const { return {deltas}; }
    lrm::AdaptCostModel cost_model() const;
    lrm::LrmOptions lrm_options() const;
};

struct ConfigKey {
    std::string name;
    std::string help;
};

/// All accepted keys, in serialization order.
std::vector<ConfigKey> config_keys();

/// Set one key from its textual value. Throws ConfigError for unknown keys
/// and unparsable values.
void set_config_value(ExperimentConfig& config, const std::string& key, const std::string& value);
std::string get_config_value(const ExperimentConfig& config, const std::string& key);

/// "key = value" lines; '#' starts a comment; blank lines ignored.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path); // IoError, ConfigError

/// Apply "key=value".
void apply_override(ExperimentConfig& config, const std::string& assignment);

/// Every key, one per line, in config_keys() order.
std::string serialize_config(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

} // namespace slicesim::experiments
