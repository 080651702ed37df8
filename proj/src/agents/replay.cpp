#include "slicesim/agents/replay.hpp"

#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InvalidParams("replay capacity must be positive");
    items_.reserve(capacity);
}

void ReplayBuffer::push(Experience e) {
    if (e.state.size() != e.next_state.size())
        throw InvalidParams("experience state and next_state differ in dimension");
    if (items_.size() < capacity_) {
        items_.push_back(std::move(e));
    } else {
        items_[cursor_] = std::move(e);
    }
    cursor_ = (cursor_ + 1) % capacity_;
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count,
                                                      sim::RngStream& stream) const {
    if (items_.empty()) throw EmptyBatch("sampling from an empty replay buffer");
    std::vector<std::size_t> idx(count);
    for (auto& i : idx) i = stream.uniform_index(items_.size());
    return idx;
}

std::vector<const Experience*> ReplayBuffer::sample(std::size_t count,
                                                    sim::RngStream& stream) const {
    std::vector<const Experience*> batch;
    batch.reserve(count);
    for (auto i : sample_indices(count, stream)) batch.push_back(&items_[i]);
    return batch;
}

} // namespace slicesim::agents
