#include "slicesim/slicing/slice.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "slicesim/core/errors.hpp"

namespace slicesim::slicing {

std::size_t SliceInstance::service_capacity() const {
    if (allocated_units.empty()) return 0;
    if (chain == ChainUnits::PerFlow) {
        Units total = 0;
        for (auto [dc, u] : allocated_units) total += std::max<Units>(u, 0);
        return static_cast<std::size_t>(total);
    }
    Units least = std::numeric_limits<Units>::max();
    for (auto [dc, u] : allocated_units) least = std::min(least, u);
    return static_cast<std::size_t>(std::max<Units>(least, 0));
}

double satisfaction_value(std::size_t waiting, double norm) {
    if (!(norm > 0.0)) return waiting == 0 ? 1.0 : 0.0;
    return 1.0 - std::min(1.0, static_cast<double>(waiting) / norm);
}

namespace {

void start_service(SliceInstance& slice, FlowId flow, double now, sim::Engine& engine) {
    const double duration = slice.trace.events.at(flow).service_duration;
    slice.in_service[flow] =
        engine.schedule(sim::SimEvent::flow_service_end(now + duration, slice.id, flow));
}

} // namespace

void admit_flow(SliceInstance& slice, FlowId flow, double now, sim::Engine& engine) {
    if (!slice.active())
        throw SliceTerminated("flow arrived at terminated slice " + std::to_string(slice.id));
    if (slice.has_free_unit() && slice.waiting.empty()) {
        start_service(slice, flow, now, engine);
    } else {
        slice.waiting.push_back(flow);
    }
}

void finish_flow(SliceInstance& slice, FlowId flow, double now, sim::Engine& engine) {
    if (slice.in_service.erase(flow) == 0) return;
    ++slice.served_count;
    promote_waiting(slice, now, engine);
}

std::size_t promote_waiting(SliceInstance& slice, double now, sim::Engine& engine) {
    std::size_t promoted = 0;
    while (slice.active() && !slice.waiting.empty() && slice.has_free_unit()) {
        FlowId head = slice.waiting.front();
        slice.waiting.pop_front();
        start_service(slice, head, now, engine);
        ++promoted;
    }
    return promoted;
}

double measure_satisfaction(SliceInstance& slice, double now, double norm,
                            std::vector<StatusRecord>* sink) {
    const double s = satisfaction_value(slice.waiting.size(), norm);
    slice.last_satisfaction = s;
    if (sink) {
        sink->push_back(StatusRecord{now, slice.id, slice.tenant, slice.waiting.size(),
                                     slice.in_service.size(), slice.allocated_units, s});
    }
    return s;
}

Units terminate_slice(SliceInstance& slice, infra::Topology& topology, double now,
                      sim::Engine& engine) {
    if (!slice.active()) return 0;
    engine.cancel(slice.next_arrival);
    engine.cancel(slice.completion);
    engine.cancel(slice.adaptation_check);
    for (auto& [flow, handle] : slice.in_service) engine.cancel(handle);
    slice.orphaned_flows = slice.trace.events.size() - slice.arrived;
    slice.terminated_at = now;
    return infra::release(topology, slice.id);
}

SliceManager::SliceManager(sim::Engine& engine, infra::Topology& topology,
                           SliceManagerOptions options)
    : engine_(engine), topology_(topology), options_(options) {}

SliceInstance& SliceManager::create(SliceId id, TenantIndex tenant,
                                    const traffic::SliceType& type, infra::Placement placement,
                                    traffic::FlowTrace trace, double now, bool simulate_flows) {
    if (slices_.count(id)) throw InvalidParams("duplicate slice id " + std::to_string(id));
    SliceInstance slice;
    slice.id = id;
    slice.tenant = tenant;
    slice.type = type;
    slice.hosts = placement.host_dcs();
    for (NodeId dc : slice.hosts) {
        auto it = placement.units_per_dc.find(dc);
        slice.allocated_units[dc] = it == placement.units_per_dc.end() ? 0 : it->second;
    }
    slice.placement = std::move(placement);
    slice.chain = options_.chain;
    slice.trace = std::move(trace);
    slice.created_at = now;
    auto [it, inserted] = slices_.emplace(id, std::move(slice));
    if (simulate_flows) schedule_next_arrival(it->second);
    return it->second;
}

void SliceManager::schedule_next_arrival(SliceInstance& slice) {
    if (slice.arrived >= slice.trace.events.size()) {
        slice.next_arrival = {};
        return;
    }
    const auto& ev = slice.trace.events[slice.arrived];
    slice.next_arrival = engine_.schedule(
        sim::SimEvent::flow_arrival(std::max(ev.arrival_time, engine_.now()), slice.id,
                                    slice.arrived));
}

void SliceManager::handle_flow_event(const sim::SimEvent& event) {
    auto* slice = find(event.subject);
    if (!slice) return;
    const double now = event.time;
    if (event.kind == sim::EventKind::FlowArrival) {
        if (!slice->active()) {
            ++slice->orphaned_flows;
            return;
        }
        ++slice->arrived;
        admit_flow(*slice, event.detail, now, engine_);
        schedule_next_arrival(*slice);
    } else if (event.kind == sim::EventKind::FlowServiceEnd) {
        finish_flow(*slice, event.detail, now, engine_);
    }
}

std::vector<StatusRecord> SliceManager::record_status_tick(double now) {
    std::vector<StatusRecord> tick;
    for (auto& [id, slice] : slices_) {
        if (!slice.active()) continue;
        measure_satisfaction(slice, now, norm_for(slice), &tick);
    }
    if (options_.keep_records) records_.insert(records_.end(), tick.begin(), tick.end());
    engine_.schedule(sim::SimEvent::measurement(now + options_.measurement_period));
    return tick;
}

Units SliceManager::terminate(SliceId id, double now) {
    auto* slice = find(id);
    if (!slice) return 0;
    return terminate_slice(*slice, topology_, now, engine_);
}

SliceInstance* SliceManager::find(SliceId id) {
    auto it = slices_.find(id);
    return it == slices_.end() ? nullptr : &it->second;
}

const SliceInstance* SliceManager::find(SliceId id) const {
    auto it = slices_.find(id);
    return it == slices_.end() ? nullptr : &it->second;
}

std::vector<SliceId> SliceManager::active_ids() const {
    std::vector<SliceId> ids;
    for (const auto& [id, slice] : slices_)
        if (slice.active()) ids.push_back(id);
    return ids;
}

double SliceManager::norm_for(const SliceInstance& slice) const {
    return options_.satisfaction_norm > 0.0 ? options_.satisfaction_norm
                                            : static_cast<double>(slice.type.total_flows);
}

std::size_t SliceManager::orphaned_flows() const {
    std::size_t total = 0;
    for (const auto& [id, slice] : slices_) total += slice.orphaned_flows;
    return total;
}

std::string SliceManager::check_invariants() const {
    std::ostringstream err;
    for (const auto& [id, slice] : slices_) {
        if (!slice.active()) continue;
        if (slice.served_count + slice.in_service.size() + slice.waiting.size() != slice.arrived)
            err << "slice " << id << ": flow conservation broken; ";
        if (slice.in_service.size() > slice.service_capacity())
            err << "slice " << id << ": " << slice.in_service.size() << " in service exceeds "
                << slice.service_capacity() << "; ";
        for (auto [dc, units] : slice.allocated_units) {
            const auto& ledger = topology_.dc(dc).allocations;
            auto it = ledger.find(id);
            Units held = it == ledger.end() ? 0 : it->second;
            if (held != units) err << "slice " << id << ": ledger mismatch at DC " << dc << "; ";
        }
    }
    for (const auto& d : topology_.dcs()) {
        Units sum = 0;
        for (auto [s, u] : d.allocations) sum += u;
        if (sum != d.allocated) err << "DC " << d.id << ": allocated != sum of allocations; ";
        if (d.allocated < 0 || d.allocated > d.capacity)
            err << "DC " << d.id << ": allocation " << d.allocated << " outside [0, "
                << d.capacity << "]; ";
    }
    return err.str();
}

void write_status_csv_header(std::ostream& out) {
    out << "t_s,slice_id,tenant,waiting,in_service,satisfaction\n";
}

void write_status_csv(const StatusRecord& r, const std::string& tenant, std::ostream& out) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.3f,%llu,%s,%zu,%zu,%.6f\n", r.time,
                  static_cast<unsigned long long>(r.slice), tenant.c_str(), r.waiting,
                  r.in_service, r.satisfaction);
    out << buf;
}

} // namespace slicesim::slicing
