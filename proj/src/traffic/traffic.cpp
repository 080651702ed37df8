#include "slicesim/traffic/traffic.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "slicesim/core/errors.hpp"

namespace slicesim::traffic {

void SliceType::validate() const {
    if (num_vnfs == 0 || total_flows == 0 || !(flow_arrival_interval > 0.0) ||
        !(flow_service_time > 0.0) || units_per_request_per_dc <= 0)
        throw InvalidParams("slice type " + std::to_string(id) + ": values must be positive");
}

void Tenant::validate() const {
    if (!(request_rate > 0.0) || !(completion_rate > 0.0))
        throw InvalidParams("tenant " + id + ": rates must be positive");
    if (!(immediate_reward >= 0.0)) throw InvalidParams("tenant " + id + ": negative reward");
    slice_type.validate();
}

double next_request_interarrival(const Tenant& tenant, sim::RngStream& stream) {
    return sim::sample_exponential(stream, tenant.request_rate / kSecondsPerHour);
}

double request_holding_time(const Tenant& tenant, sim::RngStream& stream) {
    return sim::sample_exponential(stream, tenant.completion_rate / kSecondsPerHour);
}

FlowTrace generate_flow_trace(const SliceType& type, SliceId slice, double start_time,
                              sim::RngStream& stream) {
    FlowTrace trace;
    trace.slice = slice;
    trace.events.reserve(type.total_flows);
    const double arrival_rate = 1.0 / type.flow_arrival_interval;
    const double service_rate = 1.0 / type.flow_service_time;
    double t = start_time;
    for (std::size_t i = 0; i < type.total_flows; ++i) {
        double gap = sim::sample_exponential(stream, arrival_rate);
        // Keep arrivals strictly increasing even if a gap underflows t's ulp.
        double next = t + gap;
        if (!(next > t)) next = std::nextafter(t, INFINITY);
        t = next;
        trace.events.push_back({t, sim::sample_exponential(stream, service_rate)});
    }
    return trace;
}

void write_flow_trace_csv_header(std::ostream& out) { out << "slice_id,arrival_s,service_s\n"; }

void write_flow_trace_csv(const FlowTrace& trace, std::ostream& out) {
    char buf[96];
    for (const auto& e : trace.events) {
        std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f\n",
                      static_cast<unsigned long long>(trace.slice), e.arrival_time,
                      e.service_duration);
        out << buf;
    }
}

} // namespace slicesim::traffic
