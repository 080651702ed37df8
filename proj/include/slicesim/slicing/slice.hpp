#pragma once

#include <cstddef>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slicesim/core/types.hpp"
#include "slicesim/infra/topology.hpp"
#include "slicesim/sim/engine.hpp"
#include "slicesim/traffic/traffic.hpp"

namespace slicesim::slicing {

/// How many units one in-service flow occupies.
enum class ChainUnits {
    PerVnf,  // one unit at every host DC of the slice
    PerFlow, // one unit out of the slice's pooled allocation
};

struct StatusRecord {
    double time = 0.0;
    SliceId slice = 0;
    TenantIndex tenant = 0;
    std::size_t waiting = 0;
    std::size_t in_service = 0;
    std::map<NodeId, Units> allocated;
    double satisfaction = 1.0;
};

struct SliceInstance {
    SliceId id = 0;
    TenantIndex tenant = 0;
    traffic::SliceType type;
    infra::Placement placement;
    std::vector<NodeId> hosts;             // distinct host DCs, ascending
    std::map<NodeId, Units> allocated_units; // per host DC
    ChainUnits chain = ChainUnits::PerVnf;

    traffic::FlowTrace trace;
    std::size_t arrived = 0; // flows of the trace that have arrived
    std::map<FlowId, sim::EventHandle> in_service;
    std::deque<FlowId> waiting;
    std::size_t served_count = 0;
    std::size_t orphaned_flows = 0; // trace flows that never arrived

    double created_at = 0.0;
    std::optional<double> terminated_at;
    double last_satisfaction = 1.0;

    sim::EventHandle next_arrival;
    sim::EventHandle completion;
    sim::EventHandle adaptation_check;

    bool active() const { return !terminated_at.has_value(); }

    /// Maximum number of flows that may be in service at once.
    std::size_t service_capacity() const;
    bool has_free_unit() const { return in_service.size() < service_capacity(); }
};

/// s = 1 - min(1, waiting / norm).
double satisfaction_value(std::size_t waiting, double norm);

/// A flow of the slice arrives at `now`. Starts service (and schedules its
/// FlowServiceEnd) when a unit is free at every host, else joins the FIFO
/// queue. Throws SliceTerminated on an inactive slice.
void admit_flow(SliceInstance& slice, FlowId flow, double now, sim::Engine& engine);

/// Service of `flow` ends; waiting flows are promoted while units are free.
void finish_flow(SliceInstance& slice, FlowId flow, double now, sim::Engine& engine);

/// Move waiting flows into service while capacity allows (after a grow).
std::size_t promote_waiting(SliceInstance& slice, double now, sim::Engine& engine);

/// Satisfaction of the slice now; appends a StatusRecord to `sink` if given.
double measure_satisfaction(SliceInstance& slice, double now, double norm,
                            std::vector<StatusRecord>* sink = nullptr);

/// Release everything the slice holds and cancel its pending events. Second
/// and later calls are no-ops returning 0.
Units terminate_slice(SliceInstance& slice, infra::Topology& topology, double now,
                      sim::Engine& engine);

struct SliceManagerOptions {
    ChainUnits chain = ChainUnits::PerVnf;
    /// Satisfaction normaliser; <= 0 means "the slice type's total flow count".
    double satisfaction_norm = 0.0;
    double measurement_period = 1.0;
    bool keep_records = true;
};

/// Owns the slice instances of one engine run and drives their flow events.
class SliceManager {
public:
    SliceManager(sim::Engine& engine, infra::Topology& topology, SliceManagerOptions options);

    /// Register an admitted slice whose resources are already allocated.
    /// When `simulate_flows` is set the first flow arrival is scheduled.
    SliceInstance& create(SliceId id, TenantIndex tenant, const traffic::SliceType& type,
                          infra::Placement placement, traffic::FlowTrace trace, double now,
                          bool simulate_flows);

    /// Dispatch FlowArrival / FlowServiceEnd events.
    void handle_flow_event(const sim::SimEvent& event);

    /// One record per active slice at `now` and schedule the next Measurement.
    std::vector<StatusRecord> record_status_tick(double now);

    Units terminate(SliceId id, double now);

    SliceInstance* find(SliceId id);
    const SliceInstance* find(SliceId id) const;
    std::vector<SliceId> active_ids() const;
    const std::map<SliceId, SliceInstance>& slices() const { return slices_; }

    double norm_for(const SliceInstance& slice) const;
    const std::vector<StatusRecord>& records() const { return records_; }
    const SliceManagerOptions& options() const { return options_; }
    std::size_t orphaned_flows() const;

    /// Empty string when flow conservation, the per-slice service bound and
    /// DC ledger consistency all hold; otherwise a description of the breach.
    std::string check_invariants() const;

private:
    void schedule_next_arrival(SliceInstance& slice);

    sim::Engine& engine_;
    infra::Topology& topology_;
    SliceManagerOptions options_;
    std::map<SliceId, SliceInstance> slices_;
    std::vector<StatusRecord> records_;
};

void write_status_csv_header(std::ostream& out);
void write_status_csv(const StatusRecord& record, const std::string& tenant, std::ostream& out);

} // namespace slicesim::slicing
