#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "slicesim/agents/mlp.hpp"
#include "slicesim/agents/replay.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::agents {

enum class DqnVariant { Dqn, Double };

/// Online Q approximator plus its target copy.
class QNetwork {
public:
    QNetwork() = default;
    QNetwork(std::size_t state_dim, std::size_t action_count,
             std::vector<std::size_t> hidden = {64, 64});

    /// Random online weights; the target becomes an exact copy.
    void initialize(sim::RngStream& stream);

    std::size_t state_dim() const { return online_.input_dim(); }
    std::size_t action_count() const { return online_.output_dim(); }

    std::vector<double> q_values(std::span<const double> state) const;
    std::vector<double> target_q_values(std::span<const double> state) const;

    /// target <- online, bit-exact.
    void sync_target();

    Mlp& online() { return online_; }
    const Mlp& online() const { return online_; }
    Mlp& target() { return target_; }
    const Mlp& target() const { return target_; }

    double momentum() const { return momentum_; }
    void set_momentum(double m) { momentum_ = m; }
    std::vector<double>& velocity() { return velocity_; }

private:
    Mlp online_;
    Mlp target_;
    double momentum_ = 0.0;
    std::vector<double> velocity_;
    mutable Mlp::Workspace ws_;

    friend double dqn_train_step(QNetwork&, std::span<const Experience* const>, double, double,
                                 DqnVariant, double);
};

/// Bootstrap targets y = r - shift + gamma * (1 - terminal) * T, with
/// T = max_a Q_target(s', a) (Dqn) or Q_target(s', argmax_a Q_online(s', a)) (Double).
std::vector<double> td_targets(const QNetwork& net, std::span<const Experience* const> batch,
                               double gamma, DqnVariant variant, double reward_shift = 0.0);

/// Mean squared error over the batch between Q_online(s_i, a_i) and the fixed
/// `targets`; adds its gradient w.r.t. the online parameters to `grad`.
double td_loss_and_gradient(const Mlp& online, std::span<const Experience* const> batch,
                            std::span<const double> targets, std::span<double> grad);

/// One SGD (optionally momentum) step on the TD loss. Returns the loss
/// before the step. Throws EmptyBatch.
double dqn_train_step(QNetwork& net, std::span<const Experience* const> batch, double gamma,
                      double learning_rate, DqnVariant variant, double reward_shift = 0.0);

} // namespace slicesim::agents
