#include "slicesim/lrm/adaptation.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <set>

#include "slicesim/agents/policy.hpp"
#include "slicesim/core/errors.hpp"

namespace slicesim::lrm {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

} // namespace

double AdaptCostModel::revenue_for(std::size_t slice_type) const {
    auto it = revenue_rate_by_type.find(slice_type);
    return it == revenue_rate_by_type.end() ? revenue_rate : it->second;
}

void AdaptCostModel::validate() const {
    if (revenue_rate < 0 || unit_cost < 0 || op_cost < 0)
        throw InvalidParams("adaptation costs must be non-negative");
    for (auto [type, rate] : revenue_rate_by_type)
        if (rate < 0) throw InvalidParams("adaptation revenue rate must be non-negative");
}

AdaptAction AdaptActionSet::at(std::size_t index) const {
    if (index == 0) return {};
    if (index > deltas.size()) throw InvalidParams("adaptation action index out of range");
    return {deltas[index - 1]};
}

std::string AdaptActionSet::label(std::size_t index) const {
    const Units d = at(index).delta;
    if (d == 0) return "noop";
    return (d > 0 ? "+" : "") + std::to_string(d);
}

void AdaptActionSet::validate() const {
    std::set<Units> seen;
    for (Units d : deltas) {
        if (d == 0) throw InvalidParams("adaptation delta 0 duplicates NoOp");
        if (!seen.insert(d).second) throw InvalidParams("duplicate adaptation delta");
    }
}

std::size_t satisfaction_bin(double s, std::size_t bins) {
    if (bins == 0) throw InvalidParams("satisfaction bins must be positive");
    s = std::clamp(s, 0.0, 1.0);
    return std::min(bins - 1, static_cast<std::size_t>(s * static_cast<double>(bins)));
}

RewardParts adaptation_reward_parts(const AdaptState& after, const AdaptAction& action,
                                    std::size_t host_count, const AdaptCostModel& model) {
    RewardParts parts;
    parts.revenue = model.revenue_for(after.slice_type) * after.satisfaction;
    if (action.is_adapt()) {
        const double added =
            std::max<double>(0.0, static_cast<double>(action.delta) * static_cast<double>(host_count));
        parts.unit_cost = model.unit_cost * added;
        parts.op_cost = model.op_cost;
    }
    return parts;
}

AdaptState observe_slice(const slicing::SliceInstance& slice, const infra::Topology& topology) {
    AdaptState state;
    state.satisfaction = slice.last_satisfaction;
    state.slice_type = slice.type.id;
    Units residual = 0, capacity = 0;
    for (NodeId dc : slice.hosts) {
        const auto& d = topology.dc(dc);
        residual += d.residual();
        capacity += d.capacity;
    }
    state.residual_pool = capacity > 0 ? static_cast<double>(residual) / capacity : 0.0;
    state.vnf_host_residual.reserve(slice.placement.vnf_hosts.size());
    for (auto [vnf, dc] : slice.placement.vnf_hosts) {
        const auto& d = topology.dc(dc);
        state.vnf_host_residual.push_back(
            d.capacity > 0 ? static_cast<double>(d.residual()) / d.capacity : 0.0);
    }
    return state;
}

bool adaptation_feasible(const slicing::SliceInstance& slice, const infra::Topology& topology,
                         Units delta) {
    if (!slice.active() || slice.hosts.empty()) return false;
    if (delta >= 0) {
        // Checked per VNF: a host carrying several VNFs is inspected once per VNF.
        std::vector<Units> residual, demand;
        residual.reserve(slice.placement.vnf_hosts.size());
        for (auto [vnf, dc] : slice.placement.vnf_hosts) {
            residual.push_back(topology.dc(dc).residual());
            demand.push_back(delta);
        }
        return agents::greedy_decision({residual, demand});
    }
    const auto busy = static_cast<Units>(slice.in_service.size());
    for (auto [vnf, dc] : slice.placement.vnf_hosts) {
        const Units held = slice.allocated_units.at(dc);
        if (held + delta < busy || held + delta < 0) return false;
    }
    return true;
}

Units apply_adaptation(slicing::SliceInstance& slice, Units delta, infra::Topology& topology,
                       sim::Engine& engine, double now) {
    if (delta == 0) return 0;
    if (!adaptation_feasible(slice, topology, delta))
        throw InsufficientResidual("slice " + std::to_string(slice.id) + ": cannot apply delta " +
                                   std::to_string(delta));
    Units moved = 0;
    for (NodeId dc : slice.hosts) {
        infra::adjust(topology, slice.id, dc, delta);
        slice.allocated_units[dc] += delta;
        moved += delta;
    }
    if (delta > 0) slicing::promote_waiting(slice, now, engine);
    return moved;
}

LocalManager::LocalManager(TenantIndex tenant, agents::Agent& agent, LrmOptions options)
    : tenant_(tenant), agent_(agent), options_(std::move(options)) {
    options_.actions.validate();
    options_.costs.validate();
    if (agent_.action_count() != options_.actions.size())
        throw InvalidParams("LRM agent action count does not match the adaptation action set");
}

agents::Observation LocalManager::observe(const slicing::SliceInstance& slice,
                                          const infra::Topology& topology) const {
    const AdaptState state = observe_slice(slice, topology);
    agents::Observation obs;
    obs.features.reserve(lrm_feature_dim(state.vnf_host_residual.size()));
    obs.features.push_back(state.satisfaction);
    obs.features.push_back(state.residual_pool);
    obs.features.push_back(static_cast<double>(state.slice_type > 0 ? state.slice_type - 1 : 0));
    obs.features.insert(obs.features.end(), state.vnf_host_residual.begin(),
                        state.vnf_host_residual.end());
    const std::size_t type_index =
        std::min(options_.num_slice_types - 1, state.slice_type > 0 ? state.slice_type - 1 : 0);
    obs.discrete = satisfaction_bin(state.satisfaction, options_.satisfaction_bins) +
                   options_.satisfaction_bins * type_index;
    obs.feasible.resize(options_.actions.size());
    for (std::size_t i = 0; i < options_.actions.size(); ++i)
        obs.feasible[i] = adaptation_feasible(slice, topology, options_.actions.at(i).delta);
    return obs;
}

void LocalManager::on_check(slicing::SliceInstance& slice, infra::Topology& topology,
                            sim::Engine& engine, double now) {
    if (!slice.active()) return;
    const auto start = Clock::now();
    agents::Observation obs = observe(slice, topology);
    double observe_us = micros_since(start);

    double update_us = 0.0;
    if (auto it = pending_.find(slice.id); it != pending_.end()) {
        Pending& prev = it->second;
        AdaptState after;
        after.satisfaction = slice.last_satisfaction;
        after.slice_type = slice.type.id;
        const RewardParts parts = adaptation_reward_parts(after, AdaptAction{prev.delta},
                                                          slice.hosts.size(), options_.costs);
        const double reward = parts.total();
        totals_.revenue += parts.revenue;
        totals_.unit_cost += parts.unit_cost;
        totals_.op_cost += parts.op_cost;
        cumulative_reward_ += reward;
        if (options_.keep_log) {
            records_.push_back(AdaptationRecord{prev.time, tenant_, slice.id, prev.action,
                                                prev.delta, prev.coerced,
                                                prev.satisfaction_before, after.satisfaction,
                                                reward, prev.decision_us});
        }
        if (options_.training) {
            const auto learn_start = Clock::now();
            agent_.learn(prev.obs, prev.action, reward, obs, false);
            update_us = micros_since(learn_start);
        }
    }

    const auto decide_start = Clock::now();
    const std::size_t action = agent_.act(obs);
    Units delta = options_.actions.at(action).delta;
    bool coerced = false;
    if (delta != 0) {
        try {
            apply_adaptation(slice, delta, topology, engine, now);
        } catch (const InsufficientResidual&) {
            delta = 0;
            coerced = true;
        }
    }
    const double decision_us = observe_us + micros_since(decide_start);

    if (delta != 0) ++adapt_events_;
    if (coerced) ++coerced_;
    delays_.push_back(DelaySample{decision_us, update_us});
    pending_[slice.id] =
        Pending{std::move(obs), action, delta, coerced, slice.last_satisfaction, now, decision_us};
}

void write_adaptation_csv_header(std::ostream& out) {
    out << "sim_time_s,tenant,slice_id,action,delta_units,satisfaction_before,"
           "satisfaction_after,reward,wallclock_us\n";
}

void write_adaptation_csv(const AdaptationRecord& r, const std::string& tenant,
                          const AdaptActionSet& actions, std::ostream& out) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%.3f,%s,%llu,%s,%lld,%.6f,%.6f,%.6f,%.3f\n", r.time,
                  tenant.c_str(), static_cast<unsigned long long>(r.slice),
                  actions.label(r.action).c_str(), static_cast<long long>(r.delta),
                  r.satisfaction_before, r.satisfaction_after, r.reward, r.wallclock_us);
    out << buf;
}

} // namespace slicesim::lrm
