#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "slicesim/agents/agent.hpp"
#include "slicesim/agents/mdp.hpp"
#include "slicesim/core/errors.hpp"
#include "slicesim/grm/framework.hpp"
#include "slicesim/lrm/adaptation.hpp"

using namespace slicesim;
using namespace slicesim::lrm;

namespace {

// Four DCs, one VNF on each, the slice holding `held` units per DC.
struct FourHostSlice {
    infra::Topology topo{4, {{0, 1}, {1, 2}, {2, 3}}, {0, 1, 2, 3}, {0, 0, 1, 1}, 300};
    sim::Engine engine;
    slicing::SliceInstance slice;

    explicit FourHostSlice(Units held, Units other = 0) {
        slice.id = 1;
        slice.type = traffic::SliceType{1, 4, 180, 2.0, 200.0, 60};
        for (NodeId dc = 0; dc < 4; ++dc) {
            slice.placement.vnf_hosts.push_back({dc, dc});
            slice.placement.units_per_dc[dc] = held;
            slice.hosts.push_back(dc);
            slice.allocated_units[dc] = held;
        }
        infra::allocate(topo, 1, slice.placement.units_per_dc);
        if (other > 0) infra::allocate(topo, 2, infra::uniform_demand(topo, other));
    }
};

grm::ScenarioConfig short_scenario(Units capacity, double horizon_s = 300.0) {
    grm::ScenarioConfig sc;
    sc.network.dc_capacity = capacity;
    sc.horizon_s = horizon_s;
    sc.initial_slices = true;
    sc.check_invariants = true;
    sc.onehot_counts = false;
    return sc;
}

struct Run {
    grm::EpisodeResult result;
    std::unique_ptr<LocalManager> a, b;
};

Run run_with(const grm::ScenarioConfig& sc, std::uint64_t seed, agents::Agent* lrm_agent,
             AdaptCostModel costs = {}) {
    agents::GreedyAgent greedy(2, 1, 0);
    Run run;
    std::vector<LocalManager*> lrms;
    if (lrm_agent) {
        LrmOptions opt;
        opt.costs = costs;
        run.a = std::make_unique<LocalManager>(0, *lrm_agent, opt);
        run.b = std::make_unique<LocalManager>(1, *lrm_agent, opt);
        lrms = {run.a.get(), run.b.get()};
    }
    run.result = grm::run_episode(sc, seed, greedy, lrms, {});
    return run;
}

} // namespace

TEST(Reward, Examples) {
    AdaptCostModel m;
    AdaptState after;
    after.satisfaction = 1.0;
    EXPECT_DOUBLE_EQ(adaptation_reward(after, AdaptAction{0}, 4, m), 1.0);
    after.satisfaction = 0.9;
    EXPECT_NEAR(adaptation_reward(after, AdaptAction{10}, 4, m), 0.4, 1e-12);
    auto shrink = adaptation_reward_parts(after, AdaptAction{-10}, 4, m);
    EXPECT_EQ(shrink.unit_cost, 0.0);
    EXPECT_DOUBLE_EQ(shrink.op_cost, 0.1);
    m.revenue_rate_by_type[2] = 3.0;
    after.slice_type = 2;
    EXPECT_DOUBLE_EQ(adaptation_reward(after, AdaptAction{0}, 4, m), 2.7);
}

TEST(Reward, ActionSetAndBins) {
    AdaptActionSet set;
    EXPECT_EQ(set.size(), 4u);
    EXPECT_EQ(set.label(0), "noop");
    EXPECT_EQ(set.label(1), "+10");
    EXPECT_EQ(set.label(3), "-10");
    EXPECT_THROW(set.at(4), InvalidParams);
    EXPECT_THROW((AdaptActionSet{{10, 0}}).validate(), InvalidParams);
    EXPECT_THROW((AdaptActionSet{{10, 10}}).validate(), InvalidParams);
    EXPECT_EQ(satisfaction_bin(0.0, 10), 0u);
    EXPECT_EQ(satisfaction_bin(0.95, 10), 9u);
    EXPECT_EQ(satisfaction_bin(1.0, 10), 9u);
    EXPECT_EQ(satisfaction_bin(0.35, 10), 3u);
}

TEST(Apply, GrowWithRoom) {
    FourHostSlice f(60);
    EXPECT_EQ(f.topo.dc(0).residual(), 240);
    EXPECT_EQ(apply_adaptation(f.slice, 10, f.topo, f.engine, 0.0), 40);
    for (NodeId dc = 0; dc < 4; ++dc) {
        EXPECT_EQ(f.slice.allocated_units.at(dc), 70);
        EXPECT_EQ(f.topo.dc(dc).allocations.at(1), 70);
    }
}

TEST(Apply, GrowWithoutRoomChangesNothing) {
    FourHostSlice f(60, 235);
    EXPECT_EQ(f.topo.dc(0).residual(), 5);
    EXPECT_FALSE(adaptation_feasible(f.slice, f.topo, 10));
    EXPECT_THROW(apply_adaptation(f.slice, 10, f.topo, f.engine, 0.0), InsufficientResidual);
    for (NodeId dc = 0; dc < 4; ++dc) EXPECT_EQ(f.topo.dc(dc).allocated, 295);
}

TEST(Apply, ShrinkRespectsFlowsInService) {
    FourHostSlice f(12);
    f.slice.trace.events.assign(5, {0.0, 100.0});
    for (FlowId k = 0; k < 5; ++k) slicing::admit_flow(f.slice, k, 0.0, f.engine);
    EXPECT_FALSE(adaptation_feasible(f.slice, f.topo, -10));
    EXPECT_TRUE(adaptation_feasible(f.slice, f.topo, -7));
    apply_adaptation(f.slice, -7, f.topo, f.engine, 0.0);
    EXPECT_EQ(f.slice.service_capacity(), 5u);
}

TEST(Apply, GrowPromotesWaitingFlows) {
    FourHostSlice f(1);
    f.slice.trace.events.assign(3, {0.0, 100.0});
    for (FlowId k = 0; k < 3; ++k) slicing::admit_flow(f.slice, k, 0.0, f.engine);
    EXPECT_EQ(f.slice.waiting.size(), 2u);
    apply_adaptation(f.slice, 10, f.topo, f.engine, 1.0);
    EXPECT_TRUE(f.slice.waiting.empty());
    EXPECT_EQ(f.slice.in_service.size(), 3u);
}

TEST(Manager, ObservationLayout) {
    FourHostSlice f(60, 60);
    agents::ConstantAgent noop("noop", 4, 0);
    LocalManager m(0, noop, {});
    f.slice.last_satisfaction = 0.55;
    auto obs = m.observe(f.slice, f.topo);
    ASSERT_EQ(obs.features.size(), lrm_feature_dim(4));
    EXPECT_DOUBLE_EQ(obs.features[0], 0.55);
    EXPECT_DOUBLE_EQ(obs.features[1], 180.0 / 300.0);
    EXPECT_DOUBLE_EQ(obs.features[2], 0.0);
    EXPECT_EQ(obs.discrete, 5u);
    EXPECT_EQ(obs.feasible, (std::vector<char>{1, 1, 1, 1}));
    agents::ConstantAgent wrong("x", 3, 0);
    EXPECT_THROW(LocalManager(0, wrong, {}), InvalidParams);
}

TEST(Manager, RewardSettledAtNextCheck) {
    FourHostSlice f(60);
    agents::ConstantAgent grow("grow", 4, 1);
    LocalManager m(0, grow, {});
    f.slice.last_satisfaction = 0.9;
    m.on_check(f.slice, f.topo, f.engine, 0.0);
    EXPECT_TRUE(m.records().empty());
    f.slice.last_satisfaction = 0.8;
    m.on_check(f.slice, f.topo, f.engine, 1.0);
    ASSERT_EQ(m.records().size(), 1u);
    EXPECT_NEAR(m.records()[0].reward, 0.8 - 0.4 - 0.1, 1e-12);
    EXPECT_DOUBLE_EQ(m.records()[0].satisfaction_before, 0.9);
    EXPECT_EQ(m.adapt_events(), 2u);
    m.on_terminate(1);
    f.slice.last_satisfaction = 0.1;
    m.on_check(f.slice, f.topo, f.engine, 2.0);
    EXPECT_EQ(m.records().size(), 1u);
}

TEST(Loop, RewardDecompositionIdentity) {
    auto sc = short_scenario(300, 200.0);
    agents::DqnConfig cfg;
    cfg.hidden = {16};
    agents::DqnAgent agent(lrm_feature_dim(4), 4, cfg, 3);
    agent.set_exploration(1.0);
    AdaptCostModel costs;
    costs.op_cost = 0.25;
    auto run = run_with(sc, 5, &agent, costs);
    EXPECT_EQ(run.result.invariant_violation, "");
    for (auto* m : {run.a.get(), run.b.get()}) {
        ASSERT_FALSE(m->records().empty());
        double sum = 0, revenue = 0, unit = 0;
        std::size_t adapts = 0;
        for (const auto& r : m->records()) {
            sum += r.reward;
            if (r.delta != 0) ++adapts;
            revenue += r.satisfaction_after;
            unit += 0.01 * std::max<double>(0.0, static_cast<double>(r.delta) * 4.0);
        }
        const auto& t = m->reward_totals();
        EXPECT_NEAR(m->cumulative_reward(), sum, 1e-9);
        EXPECT_NEAR(m->cumulative_reward(), t.revenue - t.unit_cost - t.op_cost, 1e-9);
        EXPECT_NEAR(t.op_cost, 0.25 * static_cast<double>(adapts), 1e-9);
        EXPECT_NEAR(t.revenue, revenue, 1e-9);
        EXPECT_NEAR(t.unit_cost, unit, 1e-9);
    }
}

TEST(Loop, ZeroResidualMakesAdaptationInert) {
    // Two initial slices fill every DC and never leave; grows are all coerced.
    auto sc = short_scenario(120);
    for (auto& t : sc.tenants) t.completion_rate = 1e-9;
    agents::ConstantAgent grow("grow", 4, 1);
    auto adapted = run_with(sc, 9, &grow);
    auto baseline = run_with(sc, 9, nullptr);
    EXPECT_EQ(adapted.result.invariant_violation, "");
    EXPECT_GT(adapted.a->coerced_actions(), 0u);
    EXPECT_EQ(adapted.a->adapt_events(), 0u);
    EXPECT_EQ(adapted.b->adapt_events(), 0u);
    ASSERT_EQ(adapted.result.status.size(), baseline.result.status.size());
    for (std::size_t i = 0; i < baseline.result.status.size(); ++i) {
        EXPECT_EQ(adapted.result.status[i].satisfaction, baseline.result.status[i].satisfaction);
        EXPECT_EQ(adapted.result.status[i].waiting, baseline.result.status[i].waiting);
    }
}

TEST(Loop, GrowingNeverHurtsWithAmpleResidual) {
    auto sc = short_scenario(100000);
    agents::ConstantAgent grow("grow", 4, 1), noop("noop", 4, 0);
    auto a = run_with(sc, 4, &grow);
    auto b = run_with(sc, 4, &noop);
    EXPECT_EQ(a.result.invariant_violation, "");
    ASSERT_EQ(a.result.status.size(), b.result.status.size());
    double sa = 0, sb = 0;
    for (std::size_t i = 0; i < a.result.status.size(); ++i) {
        ASSERT_EQ(a.result.status[i].slice, b.result.status[i].slice);
        EXPECT_GE(a.result.status[i].satisfaction, b.result.status[i].satisfaction);
        sa += a.result.status[i].satisfaction;
        sb += b.result.status[i].satisfaction;
    }
    EXPECT_GT(sa, sb);
}

TEST(Loop, ProhibitiveOperationCostMeansNoOp) {
    // Satisfaction bins as states; a grow lifts the bin, NoOp lets it decay.
    const std::size_t bins = 10;
    const AdaptActionSet actions;
    auto solve = [&](double op_cost) {
        AdaptCostModel costs;
        costs.op_cost = op_cost;
        agents::MdpSpec mdp(bins, actions.size(), 0.95);
        for (std::size_t s = 0; s < bins; ++s) {
            for (std::size_t a = 0; a < actions.size(); ++a) {
                const Units d = actions.at(a).delta;
                const long step = d > 0 ? d / 10 : d < 0 ? -1 : -1;
                const std::size_t next =
                    static_cast<std::size_t>(std::clamp<long>(static_cast<long>(s) + step, 0, bins - 1));
                mdp.outcomes(s, a) = {{next, 1.0}};
                AdaptState after;
                after.satisfaction = (static_cast<double>(next) + 0.5) / bins;
                mdp.reward(s, a) = adaptation_reward(after, actions.at(a), 4, costs);
            }
        }
        return agents::value_iteration(mdp, 1e-9).policy;
    };
    for (auto a : solve(1e9)) EXPECT_EQ(a, 0u);
    const auto cheap = solve(0.0);
    EXPECT_TRUE(std::any_of(cheap.begin(), cheap.end(), [](auto a) { return a != 0; }));
}

TEST(Log, CsvFormat) {
    std::ostringstream out;
    write_adaptation_csv_header(out);
    AdaptationRecord r;
    r.time = 3;
    r.slice = 7;
    r.action = 1;
    r.delta = 10;
    r.satisfaction_after = 0.5;
    r.reward = 0.0;
    write_adaptation_csv(r, "A", AdaptActionSet{}, out);
    EXPECT_EQ(out.str(),
              "sim_time_s,tenant,slice_id,action,delta_units,satisfaction_before,"
              "satisfaction_after,reward,wallclock_us\n"
              "3.000,A,7,+10,10,1.000000,0.500000,0.000000,0.000\n");
}
