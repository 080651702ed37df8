#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/grm/framework.hpp"
#include "slicesim/traffic/traffic.hpp"

using namespace slicesim;
using namespace slicesim::traffic;

namespace {

Tenant tenant(double rate, double completion = 6.0) {
    Tenant t;
    t.request_rate = rate;
    t.completion_rate = completion;
    return t;
}

template <class F>
double mean_of(F draw, int n = 100000) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += draw();
    return s / n;
}

} // namespace

TEST(Requests, InterarrivalMeans) {
    sim::RngStream s(1, "requests");
    const double a = mean_of([&] { return next_request_interarrival(tenant(10), s); });
    EXPECT_GE(a, 342.0);
    EXPECT_LE(a, 378.0);
    const double b = mean_of([&] { return next_request_interarrival(tenant(12), s); });
    EXPECT_NEAR(b, 300.0, 15.0);
    const double c = mean_of([&] { return next_request_interarrival(tenant(24), s); });
    EXPECT_NEAR(c / b, 0.5, 0.025);
}

TEST(Requests, HoldingTime) {
    sim::RngStream s(2, "holding");
    const double m = mean_of([&] { return request_holding_time(tenant(10, 6), s); });
    EXPECT_NEAR(m, 600.0, 30.0);
    sim::RngStream a(5, "h"), b(5, "h");
    EXPECT_EQ(request_holding_time(tenant(10), a), request_holding_time(tenant(10), b));
}

TEST(Requests, KsAgainstExponential) {
    for (double rate : {10.0, 12.0}) {
        sim::RngStream s(3, "ks-requests", static_cast<std::uint64_t>(rate));
        std::vector<double> xs(10000);
        for (auto& x : xs) x = next_request_interarrival(tenant(rate), s);
        const double lambda = rate / 3600.0;
        EXPECT_LT(oracle::ks_statistic(xs, [&](double x) { return 1 - std::exp(-lambda * x); }),
                  oracle::ks_critical_001(xs.size()));
    }
}

TEST(Requests, UncapacitatedOfferedLoad) {
    // M/M/inf: mean number in system = (10 + 12) / 6.
    grm::ScenarioConfig sc;
    sc.network.dc_capacity = 1'000'000;
    sc.simulate_flows = false;
    sc.onehot_counts = false;
    sc.horizon_s = 2000.0 * 3600.0;
    agents::GreedyAgent greedy(2, 1, 0);
    auto r = grm::run_admission_episode(sc, 17, greedy, {});
    // Little's law on the accepted stream: L = lambda * W.
    const double arrivals = static_cast<double>(r.accepted[0] + r.accepted[1]);
    const double lambda = arrivals / (sc.horizon_s / 3600.0);
    EXPECT_NEAR(lambda / 6.0, 22.0 / 6.0, 0.15);
    EXPECT_EQ(r.coerced[0] + r.coerced[1], 0u);
}

TEST(FlowTrace, TableOneTypes) {
    SliceType t1{1, 4, 180, 2.0, 200.0, 60};
    SliceType t2{2, 4, 60, 5.0, 300.0, 60};
    double gap1 = 0, srv1 = 0, gap2 = 0, srv2 = 0;
    const int reps = 200;
    for (int r = 0; r < reps; ++r) {
        sim::RngStream s(r, "flows");
        auto a = generate_flow_trace(t1, 1, 100.0, s);
        auto b = generate_flow_trace(t2, 2, 0.0, s);
        ASSERT_EQ(a.events.size(), 180u);
        ASSERT_EQ(b.events.size(), 60u);
        gap1 += (a.events.back().arrival_time - 100.0) / 180.0;
        gap2 += b.events.back().arrival_time / 60.0;
        for (auto& e : a.events) srv1 += e.service_duration / 180.0;
        for (auto& e : b.events) srv2 += e.service_duration / 60.0;
        for (std::size_t i = 1; i < a.events.size(); ++i)
            ASSERT_GT(a.events[i].arrival_time, a.events[i - 1].arrival_time);
        ASSERT_GT(a.events.front().arrival_time, 100.0);
    }
    EXPECT_NEAR(gap1 / reps, 2.0, 0.2);
    EXPECT_NEAR(srv1 / reps, 200.0, 20.0);
    EXPECT_NEAR(gap2 / reps, 5.0, 0.5);
    EXPECT_NEAR(srv2 / reps, 300.0, 30.0);
}

TEST(FlowTrace, SingleTraceWithinTenPercent) {
    sim::RngStream s(4, "flows");
    auto a = generate_flow_trace(SliceType{1, 4, 10000, 2.0, 200.0, 60}, 1, 0.0, s);
    double srv = 0;
    for (auto& e : a.events) srv += e.service_duration;
    EXPECT_NEAR(a.events.back().arrival_time / 10000, 2.0, 0.2);
    EXPECT_NEAR(srv / 10000, 200.0, 20.0);
}

TEST(FlowTrace, KsOnInterarrivals) {
    sim::RngStream s(8, "flows");
    auto tr = generate_flow_trace(SliceType{1, 4, 10000, 2.0, 200.0, 60}, 1, 0.0, s);
    std::vector<double> gaps;
    double prev = 0;
    for (auto& e : tr.events) {
        gaps.push_back(e.arrival_time - prev);
        prev = e.arrival_time;
    }
    EXPECT_LT(oracle::ks_statistic(gaps, [](double x) { return 1 - std::exp(-x / 2.0); }),
              oracle::ks_critical_001(gaps.size()));
}

TEST(FlowTrace, EmptyAndCsv) {
    SliceType t{1, 4, 180, 2.0, 200.0, 60};
    t.total_flows = 0;
    sim::RngStream s(1, "f");
    EXPECT_TRUE(generate_flow_trace(t, 3, 0.0, s).events.empty());
    EXPECT_THROW(t.validate(), InvalidParams);

    sim::RngStream s2(1, "f");
    t.total_flows = 2;
    auto tr = generate_flow_trace(t, 3, 0.0, s2);
    std::ostringstream out;
    write_flow_trace_csv_header(out);
    write_flow_trace_csv(tr, out);
    std::istringstream in(out.str());
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    EXPECT_EQ(lines, 3);
    EXPECT_EQ(out.str().rfind("slice_id,arrival_s,service_s\n3,", 0), 0u);
}

TEST(Streams, AgentDoesNotChangeTraffic) {
    grm::ScenarioConfig sc;
    sc.simulate_flows = false;
    agents::GreedyAgent greedy(2, 1, 0);
    agents::ConstantAgent reject("reject", 2, 0);
    for (std::uint64_t seed : {1, 2, 3}) {
        auto a = grm::run_admission_episode(sc, seed, greedy, {});
        auto b = grm::run_admission_episode(sc, seed, reject, {});
        EXPECT_EQ(a.traffic_checksum, b.traffic_checksum);
        EXPECT_EQ(a.arrived, b.arrived);
        EXPECT_EQ(a.traffic_checksum, grm::traffic_checksum(sc, seed));
        EXPECT_EQ(b.revenue_total, 0.0);
    }
    EXPECT_NE(grm::traffic_checksum(sc, 1), grm::traffic_checksum(sc, 2));
}
