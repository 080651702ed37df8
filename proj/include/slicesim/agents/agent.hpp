#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "slicesim/agents/qnetwork.hpp"
#include "slicesim/agents/qtable.hpp"
#include "slicesim/agents/replay.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::agents {

/// What an environment shows a decision maker. Network agents read
/// `features`, tabular agents read `discrete`, the greedy baseline reads
/// only `feasible`.
struct Observation {
    std::vector<double> features;
    std::size_t discrete = 0;
    std::vector<char> feasible; // per action; empty means all feasible
};

class Agent {
public:
    virtual ~Agent() = default;

    virtual std::string name() const = 0;
    virtual std::size_t action_count() const = 0;
    virtual std::size_t act(const Observation& obs) = 0;

    /// Transition feedback. Agents that do not learn ignore it.
    virtual void learn(const Observation& /*state*/, std::size_t /*action*/, double /*reward*/,
                       const Observation& /*next*/, bool /*terminal*/) {}
    virtual bool learns() const { return false; }
    virtual void set_exploration(double /*epsilon*/) {}
};

/// Takes `preferred` whenever it is feasible, `fallback` otherwise.
class GreedyAgent final : public Agent {
public:
    GreedyAgent(std::size_t action_count, std::size_t preferred, std::size_t fallback)
        : actions_(action_count), preferred_(preferred), fallback_(fallback) {}

    std::string name() const override { return "greedy"; }
    std::size_t action_count() const override { return actions_; }
    std::size_t act(const Observation& obs) override;

private:
    std::size_t actions_, preferred_, fallback_;
};

/// Looks the action up by the discrete state index.
class TablePolicyAgent final : public Agent {
public:
    TablePolicyAgent(std::string name, std::size_t action_count, std::vector<std::size_t> policy)
        : name_(std::move(name)), actions_(action_count), policy_(std::move(policy)) {}

    std::string name() const override { return name_; }
    std::size_t action_count() const override { return actions_; }
    std::size_t act(const Observation& obs) override { return policy_.at(obs.discrete); }

private:
    std::string name_;
    std::size_t actions_;
    std::vector<std::size_t> policy_;
};

class ConstantAgent final : public Agent {
public:
    ConstantAgent(std::string name, std::size_t action_count, std::size_t action)
        : name_(std::move(name)), actions_(action_count), action_(action) {}

    std::string name() const override { return name_; }
    std::size_t action_count() const override { return actions_; }
    std::size_t act(const Observation&) override { return action_; }

private:
    std::string name_;
    std::size_t actions_, action_;
};

struct TabularConfig {
    std::size_t num_states = 1;
    std::size_t num_actions = 2;
    StepSchedule schedule;
    double gamma = 0.95;
};

class TabularQAgent final : public Agent {
public:
    TabularQAgent(const TabularConfig& config, std::uint64_t seed);

    std::string name() const override { return "qlearn"; }
    std::size_t action_count() const override { return table_.num_actions(); }
    std::size_t act(const Observation& obs) override;
    void learn(const Observation& state, std::size_t action, double reward,
               const Observation& next, bool terminal) override;
    bool learns() const override { return true; }
    void set_exploration(double epsilon) override { epsilon_ = epsilon; }

    QTable& table() { return table_; }
    const QTable& table() const { return table_; }

private:
    QTable table_;
    sim::RngStream explore_;
    double epsilon_ = 0.0;
};

struct DqnConfig {
    std::vector<std::size_t> hidden{64, 64};
    double gamma = 0.95;
    double learning_rate = 1e-3;
    double momentum = 0.9;
    std::size_t replay_capacity = 10'000;
    std::size_t batch_size = 32;
    std::size_t target_sync = 200;
    double reward_scale = 1.0; // rewards are multiplied by this before storage
    /// Step size of the running average reward subtracted from the targets;
    /// 0 leaves rewards uncentered. A constant shift of every reward moves all
    /// Q-values by the same amount, so the greedy policy is unaffected.
    double reward_centering = 0.0;
    DqnVariant variant = DqnVariant::Dqn;
};

class DqnAgent final : public Agent {
public:
    DqnAgent(std::size_t state_dim, std::size_t action_count, const DqnConfig& config,
             std::uint64_t seed);

    std::string name() const override {
        return config_.variant == DqnVariant::Double ? "ddqn" : "dqn";
    }
    std::size_t action_count() const override { return net_.action_count(); }
    std::size_t act(const Observation& obs) override;
    void learn(const Observation& state, std::size_t action, double reward,
               const Observation& next, bool terminal) override;
    bool learns() const override { return true; }
    void set_exploration(double epsilon) override { epsilon_ = epsilon; }

    /// Learning rate used by subsequent training steps.
    void set_learning_rate(double lr) { learning_rate_ = lr; }

    QNetwork& network() { return net_; }
    const QNetwork& network() const { return net_; }
    const ReplayBuffer& replay() const { return replay_; }
    std::size_t train_steps() const { return train_steps_; }
    double last_loss() const { return last_loss_; }
    double average_reward() const { return average_reward_; } // scaled units

private:
    DqnConfig config_;
    QNetwork net_;
    ReplayBuffer replay_;
    sim::RngStream explore_;
    sim::RngStream sampler_;
    double epsilon_ = 0.0;
    double learning_rate_;
    std::size_t train_steps_ = 0;
    double last_loss_ = 0.0;
    double average_reward_ = 0.0;
};

} // namespace slicesim::agents
