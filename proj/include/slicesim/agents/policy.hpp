#pragma once

#include <cstddef>
#include <span>

#include "slicesim/core/types.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::agents {

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

/// Uniform random action with probability epsilon, else argmax. Always
/// consumes exactly one uniform draw, plus one index draw when exploring.
/// Throws EmptyActionSet.
std::size_t epsilon_greedy(std::span<const double> q_values, double epsilon,
                           sim::RngStream& stream);

struct GreedyContext {
    std::span<const Units> residual; // per DC the request touches
    std::span<const Units> demand;   // same order as residual
};

/// The non-intelligent rule: go ahead iff every DC can supply its demand.
/// Reward values are never consulted.
bool greedy_decision(const GreedyContext& context);

/// Linear annealing from `start` to `end` over the first `fraction` of
/// training progress in [0, 1], constant afterwards.
double annealed_epsilon(double progress, double start, double end, double fraction);

} // namespace slicesim::agents
