#include <gtest/gtest.h>

#include <map>

#include "oracles.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/slicing/slice.hpp"

using namespace slicesim;
using namespace slicesim::slicing;

namespace {

infra::Topology two_dcs(Units capacity = 300) {
    return infra::Topology(2, {{0, 1}}, {0, 1}, {0, 1}, capacity);
}

infra::Placement two_host_placement(SliceId id, Units units) {
    infra::Placement p;
    p.slice = id;
    p.vnf_hosts = {{0, 0}, {1, 1}};
    p.units_per_dc = {{0, units}, {1, units}};
    return p;
}

traffic::FlowTrace trace_of(SliceId id, std::vector<double> arrival, std::vector<double> service) {
    traffic::FlowTrace t;
    t.slice = id;
    for (std::size_t i = 0; i < arrival.size(); ++i) t.events.push_back({arrival[i], service[i]});
    return t;
}

// Drive a slice manager to completion and collect (start, end) per flow.
std::map<FlowId, std::pair<double, double>> run_manager(SliceManager& m, sim::Engine& e) {
    std::map<FlowId, std::pair<double, double>> out;
    e.run_until(1e9, [&](const sim::SimEvent& ev) {
        if (ev.kind == sim::EventKind::FlowServiceEnd) out[ev.detail].second = ev.time;
        const auto* s = m.find(ev.subject);
        m.handle_flow_event(ev);
        if (ev.kind == sim::EventKind::FlowArrival || ev.kind == sim::EventKind::FlowServiceEnd)
            for (auto& [f, h] : s->in_service)
                if (!out.count(f)) out[f].first = ev.time;
        EXPECT_EQ(m.check_invariants(), "");
    });
    return out;
}

} // namespace

TEST(Satisfaction, Formula) {
    EXPECT_DOUBLE_EQ(satisfaction_value(0, 180), 1.0);
    EXPECT_DOUBLE_EQ(satisfaction_value(180, 180), 0.0);
    EXPECT_DOUBLE_EQ(satisfaction_value(400, 180), 0.0);
    EXPECT_DOUBLE_EQ(satisfaction_value(15, 60), 0.75);
    double prev = 2.0;
    for (std::size_t w = 0; w < 100; ++w) {
        const double s = satisfaction_value(w, 60);
        EXPECT_LE(s, prev);
        EXPECT_GE(s, 0.0);
        prev = s;
    }
}

TEST(Flows, AdmitAtCapacityBoundary) {
    sim::Engine e;
    SliceInstance s;
    s.id = 1;
    s.allocated_units = {{0, 60}, {1, 60}};
    s.trace = trace_of(1, std::vector<double>(61, 0.0), std::vector<double>(61, 10.0));
    for (FlowId f = 0; f < 59; ++f) admit_flow(s, f, 0.0, e);
    EXPECT_EQ(s.in_service.size(), 59u);
    admit_flow(s, 59, 0.0, e);
    EXPECT_EQ(s.in_service.size(), 60u);
    EXPECT_TRUE(s.waiting.empty());
    admit_flow(s, 60, 0.0, e);
    EXPECT_EQ(s.waiting.size(), 1u);
    EXPECT_DOUBLE_EQ(measure_satisfaction(s, 0.0, 60), 1.0 - 1.0 / 60);
}

TEST(Flows, PerVnfCapacityIsTheSmallestHost) {
    SliceInstance s;
    s.allocated_units = {{0, 60}, {1, 40}};
    EXPECT_EQ(s.service_capacity(), 40u);
    s.chain = ChainUnits::PerFlow;
    EXPECT_EQ(s.service_capacity(), 100u);
}

TEST(Flows, TerminatedSliceRejectsFlows) {
    auto topo = two_dcs();
    sim::Engine e;
    SliceInstance s;
    s.id = 1;
    s.trace = trace_of(1, {0.0}, {1.0});
    terminate_slice(s, topo, 0.0, e);
    EXPECT_THROW(admit_flow(s, 0, 0.0, e), SliceTerminated);
}

TEST(Flows, FifoMatchesReferenceQueue) {
    // Toy five-flow trace first, then random traces, against a plain
    // c-server FIFO schedule.
    std::vector<std::pair<std::vector<double>, std::vector<double>>> cases{
        {{1, 2, 3, 4, 5}, {10, 1, 1, 1, 1}}};
    for (std::uint64_t k = 0; k < 30; ++k) {
        sim::RngStream r(k, "fifo");
        std::vector<double> a, sv;
        double t = 0;
        for (int i = 0; i < 200; ++i) {
            t += sim::sample_exponential(r, 1.0);
            a.push_back(t);
            sv.push_back(sim::sample_exponential(r, 0.3));
        }
        cases.push_back({a, sv});
    }
    for (auto& [arr, srv] : cases) {
        for (Units units : {1, 2, 3}) {
            auto topo = two_dcs();
            infra::allocate(topo, 1, {{0, units}, {1, units}});
            sim::Engine e;
            SliceManager m(e, topo, {});
            m.create(1, 0, traffic::SliceType{}, two_host_placement(1, units), trace_of(1, arr, srv),
                     0.0, true);
            auto got = run_manager(m, e);
            auto want = oracle::fifo_schedule(arr, srv, static_cast<std::size_t>(units));
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t i = 0; i < want.size(); ++i) {
                EXPECT_NEAR(got[i].first, want[i].first, 1e-9) << i;
                EXPECT_NEAR(got[i].second, want[i].second, 1e-9) << i;
            }
            EXPECT_EQ(m.find(1)->served_count, arr.size());
        }
    }
}

TEST(Status, TicksAndRecords) {
    auto topo = two_dcs();
    sim::Engine e;
    SliceManager m(e, topo, {});
    // No slices: empty tick, still rescheduled.
    EXPECT_TRUE(m.record_status_tick(0.0).empty());
    EXPECT_EQ(e.pending(), 1u);
    for (SliceId id : {1, 2}) {
        infra::allocate(topo, id, {{0, 60}, {1, 60}});
        m.create(id, 0, traffic::SliceType{}, two_host_placement(id, 60), trace_of(id, {}, {}), 0.0,
                 false);
    }
    auto tick = m.record_status_tick(0.0);
    ASSERT_EQ(tick.size(), 2u);
    EXPECT_EQ(tick[0].time, tick[1].time);

    sim::Engine e2;
    SliceManager m2(e2, topo, {});
    int ticks = 0;
    e2.schedule(sim::SimEvent::measurement(0.0));
    e2.run_until(999.5, [&](const sim::SimEvent& ev) {
        if (ev.kind == sim::EventKind::Measurement) {
            m2.record_status_tick(ev.time);
            ++ticks;
        }
    });
    EXPECT_EQ(ticks, 1000);
}

TEST(Terminate, ReleasesAndIsIdempotent) {
    auto topo = two_dcs();
    const auto before = topo.dcs();
    infra::allocate(topo, 1, {{0, 60}, {1, 60}});
    sim::Engine e;
    SliceManager m(e, topo, {});
    auto& s = m.create(1, 0, traffic::SliceType{}, two_host_placement(1, 60),
                       trace_of(1, {1, 2, 3}, {100, 100, 100}), 0.0, true);
    e.run_until(2.5, [&](const sim::SimEvent& ev) { m.handle_flow_event(ev); });
    EXPECT_EQ(s.in_service.size(), 2u);
    EXPECT_EQ(m.terminate(1, 2.5), 120);
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_EQ(topo.dcs()[i].allocated, before[i].allocated);
        EXPECT_EQ(topo.dcs()[i].allocations, before[i].allocations);
    }
    EXPECT_EQ(m.terminate(1, 3.0), 0);
    EXPECT_EQ(s.orphaned_flows, 1u);
    // Every pending flow event was cancelled.
    EXPECT_EQ(e.pending(), 0u);
    EXPECT_TRUE(m.active_ids().empty());
}

TEST(Status, AmpleCapacityNeverWaits) {
    infra::Topology topo(2, {{0, 1}}, {0, 1}, {0, 1}, 1'000'000);
    infra::allocate(topo, 1, {{0, 1'000'000}, {1, 1'000'000}});
    sim::Engine e;
    SliceManager m(e, topo, {});
    sim::RngStream r(1, "flows");
    auto tr = traffic::generate_flow_trace(traffic::SliceType{}, 1, 0.0, r);
    m.create(1, 0, traffic::SliceType{}, two_host_placement(1, 1'000'000), tr, 0.0, true);
    e.schedule(sim::SimEvent::measurement(0.0));
    e.run_until(1000.0, [&](const sim::SimEvent& ev) {
        if (ev.kind == sim::EventKind::Measurement) m.record_status_tick(ev.time);
        else m.handle_flow_event(ev);
    });
    ASSERT_FALSE(m.records().empty());
    for (auto& rec : m.records()) {
        EXPECT_EQ(rec.waiting, 0u);
        EXPECT_EQ(rec.satisfaction, 1.0);
    }
}
