#include "slicesim/agents/agent.hpp"

#include "slicesim/agents/policy.hpp"
#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

std::size_t GreedyAgent::act(const Observation& obs) {
    if (obs.feasible.empty() || obs.feasible.at(preferred_)) return preferred_;
    return fallback_;
}

TabularQAgent::TabularQAgent(const TabularConfig& config, std::uint64_t seed)
    : table_(config.num_states, config.num_actions, config.schedule, config.gamma),
      explore_(seed, "exploration") {}

std::size_t TabularQAgent::act(const Observation& obs) {
    return epsilon_greedy(table_.row(obs.discrete), epsilon_, explore_);
}

void TabularQAgent::learn(const Observation& state, std::size_t action, double reward,
                          const Observation& next, bool terminal) {
    table_.update(state.discrete, action, reward, next.discrete, terminal);
}

DqnAgent::DqnAgent(std::size_t state_dim, std::size_t action_count, const DqnConfig& config,
                   std::uint64_t seed)
    : config_(config), net_(state_dim, action_count, config.hidden),
      replay_(config.replay_capacity), explore_(seed, "exploration"),
      sampler_(seed, "replay-sampling"), learning_rate_(config.learning_rate) {
    if (config.batch_size == 0) throw InvalidParams("batch size must be positive");
    sim::RngStream init(seed, "weight-init");
    net_.initialize(init);
    net_.set_momentum(config.momentum);
}

std::size_t DqnAgent::act(const Observation& obs) {
    const auto q = net_.q_values(obs.features);
    return epsilon_greedy(q, epsilon_, explore_);
}

void DqnAgent::learn(const Observation& state, std::size_t action, double reward,
                     const Observation& next, bool terminal) {
    const double scaled = reward * config_.reward_scale;
    replay_.push(Experience{state.features, action, scaled, next.features, terminal});
    if (config_.reward_centering > 0)
        average_reward_ += config_.reward_centering * (scaled - average_reward_);
    if (replay_.size() < config_.batch_size) return;
    const auto batch = replay_.sample(config_.batch_size, sampler_);
    last_loss_ = dqn_train_step(net_, batch, config_.gamma, learning_rate_, config_.variant,
                                average_reward_);
    ++train_steps_;
    if (config_.target_sync > 0 && train_steps_ % config_.target_sync == 0) net_.sync_target();
}

} // namespace slicesim::agents
