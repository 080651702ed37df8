#pragma once

#include <cstddef>
#include <vector>

#include "slicesim/sim/rng.hpp"

namespace slicesim::agents {

struct Experience {
    std::vector<double> state;
    std::size_t action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool terminal = false;
};

/// Fixed-capacity ring of transitions; once full the oldest entry is
/// overwritten first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Experience e);
    std::size_t size() const { return items_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return items_.empty(); }

    const Experience& at(std::size_t i) const { return items_.at(i); }

    /// `count` entries drawn uniformly with replacement.
    std::vector<const Experience*> sample(std::size_t count, sim::RngStream& stream) const;

    /// Storage slot of the i-th draw made by sample(); exposed for tests.
    std::vector<std::size_t> sample_indices(std::size_t count, sim::RngStream& stream) const;

private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;
    std::vector<Experience> items_;
};

} // namespace slicesim::agents
