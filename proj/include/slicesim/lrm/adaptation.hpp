#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slicesim/agents/agent.hpp"
#include "slicesim/core/types.hpp"
#include "slicesim/infra/topology.hpp"
#include "slicesim/sim/engine.hpp"
#include "slicesim/slicing/slice.hpp"

namespace slicesim::lrm {

struct AdaptCostModel {
    double revenue_rate = 1.0;                          // per satisfaction point per check
    std::map<std::size_t, double> revenue_rate_by_type; // overrides, keyed by slice type id
    double unit_cost = 0.01;                            // per unit added
    double op_cost = 0.1;                               // per reconfiguration
    double revenue_for(std::size_t slice_type) const;
    void validate() const; // InvalidParams on negative values
    bool operator==(const AdaptCostModel&) const = default;
};

/// delta == 0 is NoOp; anything else changes the allocation at every host DC.
struct AdaptAction {
    Units delta = 0;
    bool is_adapt() const { return delta != 0; }
};

/// Agent action index 0 is NoOp; index i > 0 is deltas[i - 1].
struct AdaptActionSet {
    std::vector<Units> deltas{10, 20, -10};
    std::size_t size() const { return deltas.size() + 1; }
    AdaptAction at(std::size_t index) const;
    std::string label(std::size_t index) const; // "noop", "+10", "-10", ...
    void validate() const;
};

struct AdaptState {
    double satisfaction = 1.0;
    double residual_pool = 0.0; // unallocated fraction of the slice's host DCs
    std::size_t slice_type = 1;
    std::vector<double> vnf_host_residual; // per VNF, residual fraction of its host
};

struct RewardParts {
    double revenue = 0.0;
    double unit_cost = 0.0;
    double op_cost = 0.0;
    double total() const { return revenue - unit_cost - op_cost; }
};

/// Bin of s in [0, 1] among `bins` equal bins; s = 1 falls in the top bin.
std::size_t satisfaction_bin(double s, std::size_t bins);

/// Revenue for the satisfaction reached, minus the cost of units added over
/// all host DCs, minus the reconfiguration charge.
RewardParts adaptation_reward_parts(const AdaptState& after, const AdaptAction& action,
                                    std::size_t host_count, const AdaptCostModel& model);
inline double adaptation_reward(const AdaptState& after, const AdaptAction& action,
                                std::size_t host_count, const AdaptCostModel& model) {
    return adaptation_reward_parts(after, action, host_count, model).total();
}

AdaptState observe_slice(const slicing::SliceInstance& slice, const infra::Topology& topology);

/// Whether `delta` can be applied now: every VNF host has the residual for
/// a grow, and a shrink keeps every host at or above the in-service count.
bool adaptation_feasible(const slicing::SliceInstance& slice, const infra::Topology& topology,
                         Units delta);

/// Change the slice's allocation by `delta` at each host DC and promote
/// waiting flows into any new room. Throws InsufficientResidual (nothing
/// changed) when the change is infeasible. Returns the total units moved.
Units apply_adaptation(slicing::SliceInstance& slice, Units delta, infra::Topology& topology,
                       sim::Engine& engine, double now);

struct LrmOptions {
    AdaptActionSet actions;
    AdaptCostModel costs;
    std::size_t satisfaction_bins = 10;
    std::size_t num_slice_types = 2;
    bool training = false;
    bool keep_log = true;
};

/// Width of the feature vector for slices with `num_vnfs` VNFs.
inline std::size_t lrm_feature_dim(std::size_t num_vnfs) { return 3 + num_vnfs; }

struct AdaptationRecord {
    double time = 0.0;
    TenantIndex tenant = 0;
    SliceId slice = 0;
    std::size_t action = 0; // index chosen by the agent
    Units delta = 0;        // applied; 0 when coerced
    bool coerced = false;
    double satisfaction_before = 1.0;
    double satisfaction_after = 1.0;
    double reward = 0.0;
    double wallclock_us = 0.0;
};

struct DelaySample {
    double decision_us = 0.0; // observe + decide + apply
    double update_us = 0.0;   // learning step done at the same check
};

/// Per-tenant slice adaptation. The reward of an action is settled at the
/// slice's next check, once the satisfaction it led to is known.
class LocalManager {
public:
    LocalManager(TenantIndex tenant, agents::Agent& agent, LrmOptions options);

    TenantIndex tenant() const { return tenant_; }
    agents::Agent& agent() { return agent_; }
    const LrmOptions& options() const { return options_; }
    void set_training(bool training) { options_.training = training; }

    agents::Observation observe(const slicing::SliceInstance& slice,
                                const infra::Topology& topology) const;

    /// Handle one AdaptationCheck of `slice` at `now`.
    void on_check(slicing::SliceInstance& slice, infra::Topology& topology, sim::Engine& engine,
                  double now);

    /// Forget the unsettled action of a slice that has terminated.
    void on_terminate(SliceId slice) { pending_.erase(slice); }

    const std::vector<AdaptationRecord>& records() const { return records_; }
    const std::vector<DelaySample>& delays() const { return delays_; }
    const RewardParts& reward_totals() const { return totals_; }
    double cumulative_reward() const { return cumulative_reward_; }
    std::size_t adapt_events() const { return adapt_events_; }
    std::size_t coerced_actions() const { return coerced_; }

private:
    struct Pending {
        agents::Observation obs;
        std::size_t action = 0;
        Units delta = 0;
        bool coerced = false;
        double satisfaction_before = 1.0;
        double time = 0.0;
        double decision_us = 0.0;
    };

    TenantIndex tenant_;
    agents::Agent& agent_;
    LrmOptions options_;
    std::map<SliceId, Pending> pending_;
    std::vector<AdaptationRecord> records_;
    std::vector<DelaySample> delays_;
    RewardParts totals_;
    double cumulative_reward_ = 0.0;
    std::size_t adapt_events_ = 0;
    std::size_t coerced_ = 0;
};

void write_adaptation_csv_header(std::ostream& out);
void write_adaptation_csv(const AdaptationRecord& record, const std::string& tenant,
                          const AdaptActionSet& actions, std::ostream& out);

} // namespace slicesim::lrm
