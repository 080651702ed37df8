#include <gtest/gtest.h>

#include <cmath>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/sim/engine.hpp"
#include "slicesim/sim/rng.hpp"

using namespace slicesim;
using namespace slicesim::sim;

TEST(Engine, ScheduleOnEmptyQueue) {
    Engine e;
    auto h = e.schedule(SimEvent::measurement(0.0));
    EXPECT_TRUE(h.valid());
    EXPECT_EQ(e.pending(), 1u);
}

TEST(Engine, TiesBreakBySequence) {
    Engine e;
    auto a = e.schedule(SimEvent::request_arrival(5.0, 7));
    auto b = e.schedule(SimEvent::request_arrival(5.0, 8));
    ASSERT_LT(a.sequence, b.sequence);
    std::vector<std::uint64_t> order;
    e.run_until(10.0, [&](const SimEvent& ev) { order.push_back(ev.subject); });
    EXPECT_EQ(order, (std::vector<std::uint64_t>{7, 8}));
}

TEST(Engine, PastEventRejected) {
    Engine e;
    e.run_until(2.0, [](const SimEvent&) {});
    EXPECT_THROW(e.schedule(SimEvent::measurement(1.0)), PastEvent);
}

TEST(Engine, EmptyRunAdvancesClock) {
    Engine e;
    EXPECT_DOUBLE_EQ(e.run_until(10.0, [](const SimEvent&) {}), 10.0);
    EXPECT_EQ(e.dispatched(), 0u);
}

TEST(Engine, RunUntilStopsAtHorizon) {
    Engine e;
    for (double t : {1.0, 2.0, 3.0}) e.schedule(SimEvent::measurement(t));
    int n = 0;
    EXPECT_DOUBLE_EQ(e.run_until(2.5, [&](const SimEvent&) { ++n; }), 2.5);
    EXPECT_EQ(n, 2);
    EXPECT_EQ(e.pending(), 1u);
}

TEST(Engine, CancelledEventsAreSkipped) {
    Engine e;
    auto h = e.schedule(SimEvent::measurement(1.0));
    e.schedule(SimEvent::measurement(2.0));
    EXPECT_TRUE(e.cancel(h));
    EXPECT_FALSE(e.cancel(h));
    int n = 0;
    e.run_until(5.0, [&](const SimEvent&) { ++n; });
    EXPECT_EQ(n, 1);
    EXPECT_FALSE(e.cancel(EventHandle{}));
}

TEST(Engine, DispatchOrderIsTotalOnRandomBatches) {
    for (std::uint64_t trial = 0; trial < 50; ++trial) {
        RngStream rng(trial, "engine-fuzz");
        Engine e;
        for (int i = 0; i < 200; ++i) {
            // Coarse times force plenty of ties.
            e.schedule(SimEvent::measurement(static_cast<double>(rng.uniform_index(20))));
        }
        std::vector<std::pair<double, std::uint64_t>> seen;
        e.run_until(100.0, [&](const SimEvent& ev) { seen.push_back({ev.time, ev.sequence}); });
        ASSERT_EQ(seen.size(), 200u);
        for (std::size_t i = 1; i < seen.size(); ++i) ASSERT_LT(seen[i - 1], seen[i]);
    }
}

TEST(Engine, ReplayIsDeterministic) {
    auto run = [] {
        Engine e;
        RngStream rng(42, "replay");
        std::vector<std::tuple<double, std::uint64_t, std::uint64_t>> log;
        e.schedule(SimEvent::request_arrival(0.0, 0));
        e.run_until(1000.0, [&](const SimEvent& ev) {
            log.emplace_back(ev.time, ev.subject, ev.sequence);
            if (log.size() < 500)
                e.schedule(SimEvent::request_arrival(ev.time + sample_exponential(rng, 0.5),
                                                     rng.uniform_index(3)));
        });
        return log;
    };
    EXPECT_EQ(run(), run());
}

TEST(Rng, DeriveSeedIsPureAndLabelSensitive) {
    EXPECT_EQ(derive_seed(1, "a", 0), derive_seed(1, "a", 0));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "b", 0));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(1, "a", 1));
    EXPECT_NE(derive_seed(1, "a", 0), derive_seed(2, "a", 0));
    // FNV-1a reference value of the empty string and of "a".
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
    RngStream a1(9, "x"), a2(9, "x"), b(9, "y");
    std::vector<double> va1, va2, vb;
    for (int i = 0; i < 16; ++i) {
        va1.push_back(a1.uniform());
        va2.push_back(a2.uniform());
        vb.push_back(b.uniform());
    }
    EXPECT_EQ(va1, va2);
    EXPECT_NE(va1, vb);
}

TEST(Rng, UniformRangesAndIndexCoverage) {
    RngStream s(3, "u");
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const double v = s.uniform_open_low();
        ASSERT_GT(v, 0.0);
        ASSERT_LE(v, 1.0);
        ++hits[s.uniform_index(7)];
    }
    for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(Exponential, NonPositiveRateRejected) {
    RngStream s(1, "e");
    EXPECT_THROW(sample_exponential(s, 0.0), NonPositiveRate);
    EXPECT_THROW(sample_exponential(s, -1.0), NonPositiveRate);
}

TEST(Exponential, FlowServiceMean) {
    RngStream s(11, "service");
    double sum = 0;
    for (int i = 0; i < 100000; ++i) sum += sample_exponential(s, 1.0 / 200.0);
    const double m = sum / 100000;
    EXPECT_GE(m, 190.0);
    EXPECT_LE(m, 210.0);
}

TEST(Exponential, MeanVarianceAndKs) {
    for (double rate : {10.0 / 3600, 12.0 / 3600, 6.0 / 3600, 0.5, 0.2, 1.0 / 200, 1.0 / 300}) {
        RngStream s(5, "ks", static_cast<std::uint64_t>(1e6 * rate));
        std::vector<double> xs(100000);
        double sum = 0, sq = 0;
        for (auto& x : xs) {
            x = sample_exponential(s, rate);
            sum += x;
            sq += x * x;
        }
        const double n = static_cast<double>(xs.size());
        const double m = sum / n;
        const double var = sq / n - m * m;
        EXPECT_NEAR(m * rate, 1.0, 0.05) << rate;
        EXPECT_NEAR(var * rate * rate, 1.0, 0.05) << rate;
        const double d = oracle::ks_statistic(xs, [&](double x) { return 1.0 - std::exp(-rate * x); });
        EXPECT_LT(d, oracle::ks_critical_001(xs.size())) << rate;
    }
}
