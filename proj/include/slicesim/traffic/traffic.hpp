#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "slicesim/core/types.hpp"
#include "slicesim/sim/rng.hpp"

namespace slicesim::traffic {

struct SliceType {
    std::size_t id = 1;
    std::size_t num_vnfs = 4;
    std::size_t total_flows = 180;
    double flow_arrival_interval = 2.0; // mean seconds between flow arrivals
    double flow_service_time = 200.0;   // mean seconds
    Units units_per_request_per_dc = 60;

    void validate() const;
};

struct Tenant {
    std::string id = "A";
    double request_rate = 10.0;    // requests per hour
    double completion_rate = 6.0;  // per hour, per admitted request
    double immediate_reward = 2.0;
    SliceType slice_type;

    void validate() const;
};

struct FlowEvent {
    double arrival_time = 0.0;
    double service_duration = 0.0;
};

struct FlowTrace {
    SliceId slice = 0;
    std::vector<FlowEvent> events;
};

double next_request_interarrival(const Tenant& tenant, sim::RngStream& stream);

/// How long an admitted request keeps its slice.
double request_holding_time(const Tenant& tenant, sim::RngStream& stream);

/// Exactly total_flows arrivals with exponential gaps after start_time, each
/// with an exponential service duration. Gaps and durations alternate on the
/// same stream, gap first.
FlowTrace generate_flow_trace(const SliceType& type, SliceId slice, double start_time,
                              sim::RngStream& stream);

void write_flow_trace_csv_header(std::ostream& out);
void write_flow_trace_csv(const FlowTrace& trace, std::ostream& out);

} // namespace slicesim::traffic
