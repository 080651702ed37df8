#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <unordered_set>
#include <vector>

namespace slicesim::sim {

enum class EventKind : std::uint8_t {
    RequestArrival,    // subject = tenant index
    RequestCompletion, // subject = slice id
    FlowArrival,       // subject = slice id, detail = flow id
    FlowServiceEnd,    // subject = slice id, detail = flow id
    Measurement,
    AdaptationCheck,   // subject = slice id
};

const char* to_string(EventKind kind);

struct SimEvent {
    double time = 0.0;
    EventKind kind = EventKind::Measurement;
    std::uint64_t subject = 0;
    std::uint64_t detail = 0;
    std::uint64_t sequence = 0; // assigned by the engine

    static SimEvent request_arrival(double t, std::uint64_t tenant) {
        return {t, EventKind::RequestArrival, tenant, 0, 0};
    }
    static SimEvent request_completion(double t, std::uint64_t slice) {
        return {t, EventKind::RequestCompletion, slice, 0, 0};
    }
    static SimEvent flow_arrival(double t, std::uint64_t slice, std::uint64_t flow) {
        return {t, EventKind::FlowArrival, slice, flow, 0};
    }
    static SimEvent flow_service_end(double t, std::uint64_t slice, std::uint64_t flow) {
        return {t, EventKind::FlowServiceEnd, slice, flow, 0};
    }
    static SimEvent measurement(double t) { return {t, EventKind::Measurement, 0, 0, 0}; }
    static SimEvent adaptation_check(double t, std::uint64_t slice) {
        return {t, EventKind::AdaptationCheck, slice, 0, 0};
    }
};

struct EventHandle {
    std::uint64_t sequence = 0;
    bool valid() const { return sequence != 0; }
};

/// Single-threaded discrete-event engine. Events are dispatched in (time,
/// sequence) order; sequences are handed out in scheduling order starting at 1.
class Engine {
public:
    using Handler = std::function<void(const SimEvent&)>;

    double now() const { return clock_; }

    /// Enqueue `event` (its sequence field is overwritten). Throws PastEvent
    /// if event.time < now().
    EventHandle schedule(SimEvent event);

    /// Lazily cancels a pending event. Returns false if the handle is not
    /// pending (already dispatched, cancelled, or never issued).
    bool cancel(EventHandle handle);

    /// Dispatch every event with time <= t_end, then advance the clock to
    /// t_end. A t_end in the past leaves the clock unchanged.
    double run_until(double t_end, const Handler& handler);

    /// Ask run_until to return after the current handler finishes.
    void stop() { stop_requested_ = true; }

    std::size_t pending() const { return queue_.size() - cancelled_.size(); }
    std::uint64_t dispatched() const { return dispatched_; }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.sequence > b.sequence;
        }
    };

    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> queue_;
    std::unordered_set<std::uint64_t> cancelled_;
    std::unordered_set<std::uint64_t> live_;
    double clock_ = 0.0;
    std::uint64_t next_sequence_ = 1;
    std::uint64_t dispatched_ = 0;
    bool stop_requested_ = false;
};

} // namespace slicesim::sim
