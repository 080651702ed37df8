#include "slicesim/agents/policy.hpp"

#include <algorithm>

#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

std::size_t argmax(std::span<const double> values) {
    if (values.empty()) throw EmptyActionSet("argmax over no actions");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

std::size_t epsilon_greedy(std::span<const double> q_values, double epsilon,
                           sim::RngStream& stream) {
    if (q_values.empty()) throw EmptyActionSet("epsilon_greedy over no actions");
    if (stream.uniform() < epsilon) return stream.uniform_index(q_values.size());
    return argmax(q_values);
}

bool greedy_decision(const GreedyContext& context) {
    if (context.residual.size() != context.demand.size())
        throw InvalidParams("greedy context: residual and demand differ in length");
    for (std::size_t i = 0; i < context.residual.size(); ++i)
        if (context.residual[i] < context.demand[i]) return false;
    return true;
}

double annealed_epsilon(double progress, double start, double end, double fraction) {
    if (fraction <= 0.0 || progress >= fraction) return end;
    progress = std::max(progress, 0.0);
    return start + (end - start) * (progress / fraction);
}

} // namespace slicesim::agents
