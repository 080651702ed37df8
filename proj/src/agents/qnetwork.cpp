#include "slicesim/agents/qnetwork.hpp"

#include <algorithm>

#include "slicesim/agents/kernels.hpp"
#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

namespace {

std::vector<std::size_t> layer_sizes(std::size_t in, std::size_t out,
                                     const std::vector<std::size_t>& hidden) {
    std::vector<std::size_t> sizes{in};
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(out);
    return sizes;
}

std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

} // namespace

QNetwork::QNetwork(std::size_t state_dim, std::size_t action_count,
                   std::vector<std::size_t> hidden)
    : online_(layer_sizes(state_dim, action_count, hidden)),
      target_(layer_sizes(state_dim, action_count, hidden)),
      velocity_(online_.param_count(), 0.0) {}

void QNetwork::initialize(sim::RngStream& stream) {
    online_.initialize(stream);
    sync_target();
    std::fill(velocity_.begin(), velocity_.end(), 0.0);
}

std::vector<double> QNetwork::q_values(std::span<const double> state) const {
    online_.forward(state, ws_);
    return ws_.activations.back();
}

std::vector<double> QNetwork::target_q_values(std::span<const double> state) const {
    target_.forward(state, ws_);
    return ws_.activations.back();
}

void QNetwork::sync_target() {
    std::copy(online_.params().begin(), online_.params().end(), target_.params().begin());
}

std::vector<double> td_targets(const QNetwork& net, std::span<const Experience* const> batch,
                               double gamma, DqnVariant variant, double reward_shift) {
    std::vector<double> y;
    y.reserve(batch.size());
    for (const Experience* e : batch) {
        double boot = 0.0;
        if (!e->terminal) {
            auto tq = net.target_q_values(e->next_state);
            if (variant == DqnVariant::Dqn) {
                boot = *std::max_element(tq.begin(), tq.end());
            } else {
                auto oq = net.q_values(e->next_state);
                boot = tq[argmax(oq)];
            }
        }
        y.push_back(e->reward - reward_shift + gamma * boot);
    }
    return y;
}

double td_loss_and_gradient(const Mlp& online, std::span<const Experience* const> batch,
                            std::span<const double> targets, std::span<double> grad) {
    if (batch.empty()) throw EmptyBatch("empty training batch");
    Mlp::Workspace ws;
    std::vector<double> dout(online.output_dim(), 0.0);
    const double scale = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Experience& e = *batch[i];
        if (e.action >= online.output_dim()) throw InvalidParams("action index out of range");
        online.forward(e.state, ws);
        const double err = ws.activations.back()[e.action] - targets[i];
        loss += err * err;
        std::fill(dout.begin(), dout.end(), 0.0);
        dout[e.action] = 2.0 * err * scale;
        online.backward(ws, dout, grad);
    }
    return loss * scale;
}

double dqn_train_step(QNetwork& net, std::span<const Experience* const> batch, double gamma,
                      double learning_rate, DqnVariant variant, double reward_shift) {
    if (batch.empty()) throw EmptyBatch("empty training batch");
    const auto targets = td_targets(net, batch, gamma, variant, reward_shift);
    std::vector<double> grad(net.online_.param_count(), 0.0);
    const double loss = td_loss_and_gradient(net.online_, batch, targets, grad);
    auto params = net.online_.params();
    if (net.velocity_.size() != params.size()) net.velocity_.assign(params.size(), 0.0);
    kernels::active().momentum_step(params.data(), net.velocity_.data(), grad.data(),
                                    learning_rate, net.momentum_, params.size());
    return loss;
}

} // namespace slicesim::agents
