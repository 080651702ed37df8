#include "slicesim/agents/qtable.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "slicesim/core/errors.hpp"

namespace slicesim::agents {

double StepSchedule::at(std::size_t visits) const {
    if (decay_visits <= 0.0) return alpha;
    return alpha * std::pow(decay_visits / (decay_visits + static_cast<double>(visits)), exponent);
}

QTable::QTable(std::size_t num_states, std::size_t num_actions, StepSchedule schedule,
               double gamma)
    : num_states_(num_states), num_actions_(num_actions), schedule_(schedule), gamma_(gamma),
      values_(num_states * num_actions, 0.0), visits_(num_states * num_actions, 0) {
    if (num_states == 0 || num_actions == 0) throw InvalidParams("empty Q-table");
    if (schedule.alpha < 0.0 || schedule.alpha > 1.0) throw InvalidParams("alpha outside [0,1]");
}

std::size_t QTable::index(std::size_t s, std::size_t a) const {
    if (s >= num_states_ || a >= num_actions_) throw InvalidParams("Q-table index out of range");
    return s * num_actions_ + a;
}

std::span<const double> QTable::row(std::size_t s) const {
    return std::span<const double>(values_).subspan(index(s, 0), num_actions_);
}

double QTable::max_value(std::size_t s) const {
    auto r = row(s);
    return *std::max_element(r.begin(), r.end());
}

void QTable::update(std::size_t s, std::size_t a, double reward, std::size_t next,
                    bool terminal) {
    const std::size_t i = index(s, a);
    const double alpha = schedule_.at(visits_[i]);
    const double boot = terminal ? 0.0 : max_value(next);
    values_[i] += alpha * (reward + gamma_ * boot - values_[i]);
    ++visits_[i];
}

void QTable::write_csv(std::ostream& out) const {
    out << "state,action,value\n";
    char buf[96];
    for (std::size_t s = 0; s < num_states_; ++s) {
        for (std::size_t a = 0; a < num_actions_; ++a) {
            std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g\n", s, a, values_[s * num_actions_ + a]);
            out << buf;
        }
    }
}

} // namespace slicesim::agents
