#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace slicesim::agents {

/// Step-size schedule of the tabular learner. With decay_visits = 0 the step
/// is the constant `alpha`; otherwise the n-th update of a (state, action)
/// pair uses alpha * (decay_visits / (decay_visits + n))^exponent.
struct StepSchedule {
    double alpha = 0.1;
    double decay_visits = 0.0;
    double exponent = 1.0;

    double at(std::size_t visits) const;
};

/// Dense (state, action) table. Entries that were never written read 0.0.
class QTable {
public:
    QTable(std::size_t num_states, std::size_t num_actions, StepSchedule schedule, double gamma);

    std::size_t num_states() const { return num_states_; }
    std::size_t num_actions() const { return num_actions_; }
    double gamma() const { return gamma_; }
    const StepSchedule& schedule() const { return schedule_; }

    double get(std::size_t s, std::size_t a) const { return values_[index(s, a)]; }
    void set(std::size_t s, std::size_t a, double v) { values_[index(s, a)] = v; }
    std::span<const double> row(std::size_t s) const;
    std::size_t visits(std::size_t s, std::size_t a) const { return visits_[index(s, a)]; }
    double max_value(std::size_t s) const;

    /// Q(s,a) += alpha_n * (r + gamma * max_a' Q(s',a') * (1 - terminal) - Q(s,a))
    void update(std::size_t s, std::size_t a, double reward, std::size_t next, bool terminal);

    /// "state,action,value" rows, header included.
    void write_csv(std::ostream& out) const;

private:
    std::size_t index(std::size_t s, std::size_t a) const;

    std::size_t num_states_;
    std::size_t num_actions_;
    StepSchedule schedule_;
    double gamma_;
    std::vector<double> values_;
    std::vector<std::size_t> visits_;
};

inline void q_learning_update(QTable& table, std::size_t s, std::size_t a, double reward,
                              std::size_t next, bool terminal) {
    table.update(s, a, reward, next, terminal);
}

} // namespace slicesim::agents
