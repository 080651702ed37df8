#include "slicesim/sim/engine.hpp"

#include <cmath>
#include <string>

#include "slicesim/core/errors.hpp"

namespace slicesim::sim {

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::RequestArrival: return "RequestArrival";
    case EventKind::RequestCompletion: return "RequestCompletion";
    case EventKind::FlowArrival: return "FlowArrival";
    case EventKind::FlowServiceEnd: return "FlowServiceEnd";
    case EventKind::Measurement: return "Measurement";
    case EventKind::AdaptationCheck: return "AdaptationCheck";
    }
    return "?";
}

EventHandle Engine::schedule(SimEvent event) {
    if (!(event.time >= clock_) || std::isnan(event.time)) {
        throw PastEvent("cannot schedule " + std::string(to_string(event.kind)) + " at t=" +
                        std::to_string(event.time) + " (clock " + std::to_string(clock_) + ")");
    }
    event.sequence = next_sequence_++;
    queue_.push(event);
    live_.insert(event.sequence);
    return EventHandle{event.sequence};
}

bool Engine::cancel(EventHandle handle) {
    if (!handle.valid() || live_.erase(handle.sequence) == 0) return false;
    cancelled_.insert(handle.sequence);
    return true;
}

double Engine::run_until(double t_end, const Handler& handler) {
    if (t_end < clock_) return clock_;
    stop_requested_ = false;
    while (!queue_.empty() && queue_.top().time <= t_end) {
        SimEvent ev = queue_.top();
        queue_.pop();
        if (cancelled_.erase(ev.sequence) > 0) continue;
        live_.erase(ev.sequence);
        clock_ = ev.time;
        ++dispatched_;
        handler(ev);
        if (stop_requested_) return clock_;
    }
    clock_ = t_end;
    return clock_;
}

} // namespace slicesim::sim
