#pragma once

#include <cstddef>
#include <vector>

#include "slicesim/sim/rng.hpp"

namespace slicesim::agents {

struct Outcome {
    std::size_t next = 0;
    double prob = 0.0;
};

/// Finite discrete-time MDP with expected immediate rewards r(s, a).
struct MdpSpec {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<std::vector<Outcome>> transitions; // [s * num_actions + a]
    std::vector<double> rewards;                   // [s * num_actions + a]
    double discount = 0.95;

    MdpSpec() = default;
    MdpSpec(std::size_t states, std::size_t actions, double discount);

    const std::vector<Outcome>& outcomes(std::size_t s, std::size_t a) const {
        return transitions[s * num_actions + a];
    }
    std::vector<Outcome>& outcomes(std::size_t s, std::size_t a) {
        return transitions[s * num_actions + a];
    }
    double reward(std::size_t s, std::size_t a) const { return rewards[s * num_actions + a]; }
    double& reward(std::size_t s, std::size_t a) { return rewards[s * num_actions + a]; }

    /// Throws NonFiniteMdp unless sizes are consistent, every value is finite
    /// and each (s, a) row is a probability distribution (sum within 1e-9).
    void validate() const;
};

struct RateOutcome {
    std::size_t next = 0;
    double rate = 0.0;
};

/// Continuous-time MDP: per (s, a) transition rates plus a lump reward
/// earned when action a is taken in s.
struct CtmdpSpec {
    std::size_t num_states = 0;
    std::size_t num_actions = 0;
    std::vector<std::vector<RateOutcome>> rates; // [s * num_actions + a]
    std::vector<double> rewards;                 // [s * num_actions + a]

    double max_outflow() const;
};

/// Uniformize with constant `lambda` >= max total outflow rate: p(s'|s,a) =
/// rate / lambda, with the remainder as a self-loop. Throws InvalidParams if
/// lambda is too small.
MdpSpec uniformize(const CtmdpSpec& ct, double lambda, double discount);

struct ValueIterationResult {
    std::vector<double> values;
    std::vector<std::size_t> policy; // greedy, ties to the lowest action
    double residual = 0.0;           // sup-norm of T(V) - V at exit
    std::size_t iterations = 0;
};

/// Discounted value iteration until the sup-norm Bellman residual of the
/// returned values is below `tolerance`.
ValueIterationResult value_iteration(const MdpSpec& mdp, double tolerance,
                                     std::size_t max_iterations = 10'000'000);

struct AverageRewardResult {
    double gain = 0.0;         // average reward per step
    std::vector<double> bias;  // relative values, bias[reference] = 0
    std::vector<std::size_t> policy;
    double span = 0.0;         // span of T(h) - h at exit
    std::size_t iterations = 0;
};

/// Relative value iteration for the long-run average reward criterion.
/// `aperiodicity` in (0, 1] mixes in a self-loop (P' = tau P + (1 - tau) I),
/// which leaves the gain and the optimal policy unchanged.
AverageRewardResult relative_value_iteration(const MdpSpec& mdp, double tolerance,
                                             std::size_t reference_state = 0,
                                             double aperiodicity = 1.0,
                                             std::size_t max_iterations = 10'000'000);

/// Q(s, a) = r(s, a) + discount * sum p(s'|s,a) V(s').
std::vector<double> q_from_values(const MdpSpec& mdp, const std::vector<double>& values);

/// Draw s' ~ p(.|s, a).
std::size_t sample_next_state(const MdpSpec& mdp, std::size_t s, std::size_t a,
                              sim::RngStream& stream);

} // namespace slicesim::agents
